#include "rlmtrack/normbox.hpp"

#include <algorithm>
#include <vector>

namespace rlm {

std::optional<double> avg_spacing(std::span<const double> positions) {
    if (positions.size() < 2) return std::nullopt;
    const auto [lo, hi] = std::minmax_element(positions.begin(), positions.end());
    return (*hi - *lo) / static_cast<double>(positions.size() - 1);
}

double std_width(double l_arg, double a_phi_mean, double a_rho_cell, double fps,
                 const StdBoxConfig& cfg) {
    if (l_arg < 0.0) throw std::domain_error("negative target spacing");
    if (a_phi_mean <= 0.0 || a_rho_cell <= 0.0 || fps <= 0.0 || cfg.c <= 0.0)
        throw std::domain_error("std_width requires positive coefficients");
    const double w = l_arg * a_phi_mean / (a_rho_cell * fps * cfg.c);
    return std::clamp(w, cfg.w_min, cfg.w_max);
}

MappedBox make_std_box(MapPoint p, double w_bar, double det_aspect, double score, int cell,
                       const StdBoxConfig& cfg) {
    const double aspect = std::clamp(det_aspect, cfg.aspect_min, cfg.aspect_max);
    return MappedBox{p, w_bar, w_bar * aspect, score, cell};
}

double RegionWidthState::update(int cell, std::optional<double> w_new, const StdBoxConfig& cfg) {
    auto& slot = w_bar_[cell];
    if (w_new) {
        slot = slot ? cfg.ema_alpha * *w_new + (1.0 - cfg.ema_alpha) * *slot : *w_new;
    }
    return slot.value_or(cfg.w_max);
}

}  // namespace rlm
