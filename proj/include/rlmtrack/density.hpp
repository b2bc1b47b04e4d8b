#pragma once

#include <array>
#include <span>

#include "rlmtrack/geometry.hpp"
#include "rlmtrack/io.hpp"

namespace rlm {

// Direction of the low-score threshold modulation. as_written follows the
// published rule (dense cell -> higher bar); inverse lowers the bar in dense
// cells instead. Both are exposed for ablation.
enum class ThresholdMode { as_written, inverse };

struct DensityConfig {
    double tau_low = 0.3;      // base low-score threshold
    double rho_floor = 0.5;    // lower clamp on the normalized density
    double varpi_top = 1.0;    // vertical ramp weight at the image top
    double varpi_bottom = 2.0; // and at the image bottom
    ThresholdMode mode = ThresholdMode::as_written;
};

/// 3x3 region densities, row-major with row 0 at the image top.
struct DensityMatrix {
    std::array<double, 9> raw{};  // pre-normalization accumulators
    std::array<double, 9> rho{};  // in [0,1]; all ones for an empty frame
};

// Cell index of a pixel point (bottom-origin y). Boundary pixels belong to
// the lower-index cell.
int cell_of(int img_w, int img_h, PixelPoint p);

// Sum overlap_fraction * score * ramp_weight per cell over the high-score
// detections. Additive and order-independent; rho is left zeroed.
DensityMatrix accumulate(std::span<const Detection> dets_high, int img_w, int img_h,
                         const DensityConfig& cfg);

// rho = raw / max(raw); all ones when the frame contributed nothing.
void normalize(DensityMatrix& m);

// Adaptive low-score threshold for one cell. Never returns zero: the density
// is clamped to [rho_floor, 1] first.
double low_threshold(const DensityMatrix& m, int cell, const DensityConfig& cfg);

}  // namespace rlm
