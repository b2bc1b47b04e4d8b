#pragma once

#include <array>
#include <optional>
#include <span>

#include "rlmtrack/geometry.hpp"

namespace rlm {

/// Standardized bounding box in the map plane: fixed per-region width,
/// height = width * original aspect ratio, anchored at the bottom center.
struct MappedBox {
    MapPoint bottom_center;
    double width = 0.0;
    double height = 0.0;
    double score = 0.0;
    int source_cell = 4;
};

struct StdBoxConfig {
    double c = 1.0 / 30.0;    // frame-rate control constant; fps*c = 1 at 30 fps
    double w_min = 1.0;       // width clamps, map units
    double w_max = 24.0;
    double aspect_min = 0.2;  // clamps on detection h/w
    double aspect_max = 10.0;
    double ema_alpha = 0.3;   // cross-frame smoothing of the region width
};

// Mean sorted gap of the positions, which telescopes to range/(n-1).
// Fewer than two positions carry no spacing signal.
std::optional<double> avg_spacing(std::span<const double> positions);

// Width of the standardized box for one region:
//   W = L_arg * A_phi_mean / (A_rho_cell * fps * c), clamped to [w_min, w_max].
double std_width(double l_arg, double a_phi_mean, double a_rho_cell, double fps,
                 const StdBoxConfig& cfg);

MappedBox make_std_box(MapPoint p, double w_bar, double det_aspect, double score, int cell,
                       const StdBoxConfig& cfg);

/// Per-region EMA of the standardized width, owned by one tracking session.
class RegionWidthState {
public:
    // Blends the new width in (or returns the remembered one when the region
    // had no spacing signal this frame; w_max before any observation).
    double update(int cell, std::optional<double> w_new, const StdBoxConfig& cfg);

    std::optional<double> current(int cell) const { return w_bar_[cell]; }

private:
    std::array<std::optional<double>, 9> w_bar_{};
};

}  // namespace rlm
