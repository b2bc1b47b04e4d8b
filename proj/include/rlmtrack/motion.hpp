#pragma once

#include <Eigen/Dense>

#include "rlmtrack/normbox.hpp"

namespace rlm {

/// Constant-velocity state in the map plane: (x, y, vx, vy), unit time step
/// per frame.
struct TrackState {
    Eigen::Vector4d mean = Eigen::Vector4d::Zero();
    Eigen::Matrix4d cov = Eigen::Matrix4d::Identity();
    double rho_hint = 0.0;  // density recorded at the last predict
};

struct NoiseConfig {
    double pos_std = 2.0;    // process noise, position, per frame
    double vel_std = 1.0;    // process noise, velocity, per frame
    double meas_std = 10.0;  // base measurement noise
    double kappa_rho = 1.0;  // density modulation gain; 0 disables
};

// Per-frame camera motion: [x', y']^T = A [x, y]^T + B, pixel coordinates.
struct AffineTransform {
    double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;
    double b1 = 0.0, b2 = 0.0;

    bool is_identity() const {
        return a11 == 1.0 && a12 == 0.0 && a21 == 0.0 && a22 == 1.0 && b1 == 0.0 && b2 == 0.0;
    }
    double det() const { return a11 * a22 - a12 * a21; }
};

Eigen::Vector2d apply_affine(const AffineTransform& t, const Eigen::Vector2d& p);
AffineTransform compose(const AffineTransform& second, const AffineTransform& first);

TrackState init_state(const MappedBox& box, const NoiseConfig& cfg);

// CV prediction; rho_cell is stored on the state for the following update.
TrackState predict(TrackState s, double rho_cell, const NoiseConfig& cfg);

// Position update with measurement covariance inflated by density:
// R = meas_std^2 * (1 + kappa_rho * rho_cell) * I. Dense regions trust the
// motion model more.
TrackState update(TrackState s, const MappedBox& z, double rho_cell, const NoiseConfig& cfg);

}  // namespace rlm
