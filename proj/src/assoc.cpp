#include "rlmtrack/assoc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rlm {

namespace {

constexpr double kGateCost = 1e6;

// Kuhn-Munkres with row/column potentials on a square matrix. Returns
// col_of_row. O(n^3).
std::vector<int> solve_square(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);

    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, std::numeric_limits<double>::infinity());
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = 0;
            double delta = std::numeric_limits<double>::infinity();
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }

    std::vector<int> col_of_row(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] > 0) col_of_row[p[j] - 1] = j - 1;
    return col_of_row;
}

}  // namespace

Rect to_rect(const MappedBox& b) {
    return {b.bottom_center.x - b.width / 2.0, b.bottom_center.y,
            b.bottom_center.x + b.width / 2.0, b.bottom_center.y + b.height};
}

Rect to_rect(const Detection& d) { return {d.x, d.y, d.x + d.w, d.y + d.h}; }

Rect to_rect(const MotRow& r) { return {r.x, r.y, r.x + r.w, r.y + r.h}; }

double iou(const Rect& a, const Rect& b) {
    const double ix = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
    const double iy = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
    if (ix <= 0.0 || iy <= 0.0) return 0.0;
    const double inter = ix * iy;
    return inter / (a.area() + b.area() - inter);
}

Assignment hungarian(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    const int m = n > 0 ? static_cast<int>(cost[0].size()) : 0;
    Assignment out;
    if (n == 0 || m == 0) {
        for (int i = 0; i < n; ++i) out.unmatched_tracks.push_back(i);
        for (int j = 0; j < m; ++j) out.unmatched_dets.push_back(j);
        return out;
    }

    for (const auto& row : cost) {
        if (static_cast<int>(row.size()) != m)
            throw std::invalid_argument("ragged cost matrix");
        for (double c : row)
            if (!(c >= 0.0) || !std::isfinite(c))
                throw std::invalid_argument("costs must be finite and nonnegative");
    }

    // Pad to square; perturb real cells by a rank-ordered epsilon so equal-cost
    // optima resolve toward the lowest (row, col) pair. Totals are reported
    // from the unperturbed costs.
    const int dim = std::max(n, m);
    double max_cost = 0.0;
    for (const auto& row : cost)
        for (double c : row) max_cost = std::max(max_cost, c);
    const double eps = 1e-12 * std::max(1.0, max_cost) / (static_cast<double>(n) * m + 1.0);

    std::vector<std::vector<double>> padded(dim, std::vector<double>(dim, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            padded[i][j] = cost[i][j] + eps * (static_cast<double>(i) * m + j);

    const auto col_of_row = solve_square(padded);

    std::vector<char> det_matched(m, 0);
    for (int i = 0; i < n; ++i) {
        const int j = col_of_row[i];
        if (j >= 0 && j < m) {
            out.matches.emplace_back(i, j);
            det_matched[j] = 1;
        } else {
            out.unmatched_tracks.push_back(i);
        }
    }
    std::sort(out.matches.begin(), out.matches.end());
    for (const auto& [i, j] : out.matches) out.total_cost += cost[i][j];
    for (int j = 0; j < m; ++j)
        if (!det_matched[j]) out.unmatched_dets.push_back(j);
    return out;
}

Assignment associate(const std::vector<Rect>& tracks, const std::vector<Rect>& dets,
                     double iou_min) {
    const int n = static_cast<int>(tracks.size());
    const int m = static_cast<int>(dets.size());
    std::vector<std::vector<double>> cost(n, std::vector<double>(m));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < m; ++j) {
            const double v = iou(tracks[i], dets[j]);
            cost[i][j] = v >= iou_min ? 1.0 - v : kGateCost;
        }
    }

    Assignment a = hungarian(cost);

    // Strip matches the gate forced through the sentinel cost.
    Assignment out;
    out.unmatched_tracks = a.unmatched_tracks;
    out.unmatched_dets = a.unmatched_dets;
    for (const auto& [i, j] : a.matches) {
        if (cost[i][j] >= kGateCost) {
            out.unmatched_tracks.push_back(i);
            out.unmatched_dets.push_back(j);
        } else {
            out.matches.emplace_back(i, j);
            out.total_cost += cost[i][j];
        }
    }
    std::sort(out.unmatched_tracks.begin(), out.unmatched_tracks.end());
    std::sort(out.unmatched_dets.begin(), out.unmatched_dets.end());
    return out;
}

std::pair<Assignment, Assignment> associate_two_stage(const std::vector<Rect>& tracks,
                                                      const std::vector<Rect>& dets_high,
                                                      const std::vector<Rect>& dets_low,
                                                      double iou_min) {
    Assignment stage1 = associate(tracks, dets_high, iou_min);

    std::vector<Rect> leftovers;
    leftovers.reserve(stage1.unmatched_tracks.size());
    for (int idx : stage1.unmatched_tracks) leftovers.push_back(tracks[idx]);

    Assignment stage2 = associate(leftovers, dets_low, iou_min);
    for (auto& [i, j] : stage2.matches) i = stage1.unmatched_tracks[i];
    for (auto& i : stage2.unmatched_tracks) i = stage1.unmatched_tracks[i];
    return {std::move(stage1), std::move(stage2)};
}

}  // namespace rlm
