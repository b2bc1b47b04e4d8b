#include "rlmtrack/density.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rlm {

namespace {

// Column/row of a coordinate under the boundary-to-lower-index rule.
int band_of(double v, double extent) {
    if (v <= 0.0) return 0;
    const int band = static_cast<int>(std::ceil(3.0 * v / extent)) - 1;
    return std::clamp(band, 0, 2);
}

}  // namespace

int cell_of(int img_w, int img_h, PixelPoint p) {
    const double w = static_cast<double>(img_w);
    const double h = static_cast<double>(img_h);
    if (p.x < 0.0 || p.x > w || p.y < 0.0 || p.y > h)
        throw std::domain_error("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                                ") outside image");
    const double y_top = h - p.y;  // row 0 is the top of the image
    return band_of(y_top, h) * 3 + band_of(p.x, w);
}

DensityMatrix accumulate(std::span<const Detection> dets_high, int img_w, int img_h,
                         const DensityConfig& cfg) {
    DensityMatrix m;
    const double w = static_cast<double>(img_w);
    const double h = static_cast<double>(img_h);

    for (const auto& d : dets_high) {
        const double area = d.w * d.h;
        if (area <= 0.0) continue;
        for (int row = 0; row < 3; ++row) {
            for (int col = 0; col < 3; ++col) {
                const double cx0 = col * w / 3.0, cx1 = (col + 1) * w / 3.0;
                const double cy0 = row * h / 3.0, cy1 = (row + 1) * h / 3.0;
                const double ix0 = std::max(d.x, cx0), ix1 = std::min(d.x + d.w, cx1);
                const double iy0 = std::max(d.y, cy0), iy1 = std::min(d.y + d.h, cy1);
                if (ix1 <= ix0 || iy1 <= iy0) continue;
                const double frac = (ix1 - ix0) * (iy1 - iy0) / area;
                // Vertical ramp weight at the overlap-region center: boxes
                // low in the image count more than boxes near the top.
                const double yc = 0.5 * (iy0 + iy1);
                const double varpi =
                    cfg.varpi_top + (cfg.varpi_bottom - cfg.varpi_top) * (yc / h);
                m.raw[row * 3 + col] += frac * d.score * varpi;
            }
        }
    }
    return m;
}

void normalize(DensityMatrix& m) {
    const double rho_max = *std::max_element(m.raw.begin(), m.raw.end());
    if (rho_max <= 0.0) {
        m.rho.fill(1.0);
        return;
    }
    for (int i = 0; i < 9; ++i) m.rho[i] = m.raw[i] / rho_max;
}

double low_threshold(const DensityMatrix& m, int cell, const DensityConfig& cfg) {
    if (cell < 0 || cell > 8) throw std::domain_error("cell index outside 0..8");
    const double a = std::clamp(m.rho[cell], cfg.rho_floor, 1.0);
    return cfg.mode == ThresholdMode::as_written ? a * cfg.tau_low : cfg.tau_low * (2.0 - a);
}

}  // namespace rlm
