#include "rlmtrack/motion.hpp"

#include <cmath>
#include <stdexcept>

namespace rlm {

namespace {

Eigen::Matrix4d transition() {
    Eigen::Matrix4d f = Eigen::Matrix4d::Identity();
    f(0, 2) = 1.0;
    f(1, 3) = 1.0;
    return f;
}

void symmetrize(Eigen::Matrix4d& m) { m = 0.5 * (m + m.transpose()).eval(); }

}  // namespace

Eigen::Vector2d apply_affine(const AffineTransform& t, const Eigen::Vector2d& p) {
    return {t.a11 * p.x() + t.a12 * p.y() + t.b1, t.a21 * p.x() + t.a22 * p.y() + t.b2};
}

AffineTransform compose(const AffineTransform& second, const AffineTransform& first) {
    AffineTransform t;
    t.a11 = second.a11 * first.a11 + second.a12 * first.a21;
    t.a12 = second.a11 * first.a12 + second.a12 * first.a22;
    t.a21 = second.a21 * first.a11 + second.a22 * first.a21;
    t.a22 = second.a21 * first.a12 + second.a22 * first.a22;
    t.b1 = second.a11 * first.b1 + second.a12 * first.b2 + second.b1;
    t.b2 = second.a21 * first.b1 + second.a22 * first.b2 + second.b2;
    return t;
}

TrackState init_state(const MappedBox& box, const NoiseConfig& cfg) {
    TrackState s;
    s.mean << box.bottom_center.x, box.bottom_center.y, 0.0, 0.0;
    const double p = cfg.meas_std * cfg.meas_std;
    const double v = 100.0 * p;  // velocity is unobserved at birth
    s.cov = Eigen::Vector4d(p, p, v, v).asDiagonal();
    return s;
}

TrackState predict(TrackState s, double rho_cell, const NoiseConfig& cfg) {
    const Eigen::Matrix4d f = transition();
    s.mean = f * s.mean;
    Eigen::Matrix4d q = Eigen::Vector4d(cfg.pos_std * cfg.pos_std, cfg.pos_std * cfg.pos_std,
                                        cfg.vel_std * cfg.vel_std, cfg.vel_std * cfg.vel_std)
                            .asDiagonal();
    s.cov = f * s.cov * f.transpose() + q;
    symmetrize(s.cov);
    s.rho_hint = rho_cell;
    return s;
}

TrackState update(TrackState s, const MappedBox& z, double rho_cell, const NoiseConfig& cfg) {
    Eigen::Matrix<double, 2, 4> h = Eigen::Matrix<double, 2, 4>::Zero();
    h(0, 0) = 1.0;
    h(1, 1) = 1.0;

    const double r_scale = cfg.meas_std * cfg.meas_std * (1.0 + cfg.kappa_rho * rho_cell);
    const Eigen::Matrix2d r = r_scale * Eigen::Matrix2d::Identity();

    const Eigen::Matrix2d innov_cov = h * s.cov * h.transpose() + r;
    if (std::abs(innov_cov.determinant()) < 1e-30)
        throw std::runtime_error("innovation covariance is singular; check noise config");

    const Eigen::Matrix<double, 4, 2> gain = s.cov * h.transpose() * innov_cov.inverse();
    const Eigen::Vector2d measured(z.bottom_center.x, z.bottom_center.y);
    s.mean += gain * (measured - h * s.mean);

    // Joseph form keeps the covariance PSD under roundoff.
    const Eigen::Matrix4d ikh = Eigen::Matrix4d::Identity() - gain * h;
    s.cov = ikh * s.cov * ikh.transpose() + gain * r * gain.transpose();
    symmetrize(s.cov);
    s.rho_hint = rho_cell;
    return s;
}

}  // namespace rlm
