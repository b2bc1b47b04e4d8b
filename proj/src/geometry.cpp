#include "rlmtrack/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace rlm {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double deg2rad(double d) { return d * kDegToRad; }
double rad2deg(double r) { return r / kDegToRad; }

// Smallest imaging angle the phi formulas are evaluated at; the perturbation
// is far below pixel resolution and keeps the 0/0 limit finite.
constexpr double kAlphaEpsDeg = 1e-9;

[[noreturn]] void throw_above_horizon(double alpha_deg, double theta_deg) {
    throw AboveHorizonError("imaging angle " + std::to_string(alpha_deg) +
                            " deg + theta " + std::to_string(theta_deg) +
                            " deg reaches past the horizon");
}

}  // namespace

void CameraModel::validate() const {
    auto fail = [](const std::string& what) { throw ConfigError("camera config: " + what); };
    if (!(beta_v_deg > 0.0 && beta_v_deg < 180.0)) fail("beta_v_deg must be in (0, 180)");
    if (!(beta_h_deg > 0.0 && beta_h_deg < 180.0)) fail("beta_h_deg must be in (0, 180)");
    if (!(gamma_deg >= 0.0 && gamma_deg < 90.0)) fail("gamma_deg must be in [0, 90)");
    if (!(cam_height > 0.0)) fail("cam_height must be positive");
    if (img_w <= 0 || img_h <= 0) fail("image dimensions must be positive");
    if (!(fps > 0.0)) fail("fps must be positive");
    if (theta_deg() < 0.0)
        fail("theta = 90 - gamma - beta_v/2 is negative (bottom ray tilts behind vertical)");
    if (!(90.0 - theta_deg() - kHorizonMarginDeg > 0.0))
        fail("view cone is entirely above the usable horizon");
}

double imaging_angle_v(const CameraModel& cam, double y_px) {
    const double h = static_cast<double>(cam.img_h);
    if (y_px < 0.0 || y_px > h)
        throw std::domain_error("pixel y " + std::to_string(y_px) + " outside [0, H]");
    const double half = cam.beta_v_deg / 2.0;
    // Both branches of the piecewise definition collapse to this expression
    // because arctan is odd.
    const double t = (2.0 * y_px / h - 1.0) * std::tan(deg2rad(half));
    return half + rad2deg(std::atan(t));
}

double imaging_angle_h(const CameraModel& cam, double x_px) {
    const double w = static_cast<double>(cam.img_w);
    if (x_px < 0.0 || x_px > w)
        throw std::domain_error("pixel x " + std::to_string(x_px) + " outside [0, W]");
    const double half = cam.beta_h_deg / 2.0;
    const double t = (2.0 * x_px / w - 1.0) * std::tan(deg2rad(half));
    return half + rad2deg(std::atan(t));
}

double pixel_y_for_angle(const CameraModel& cam, double alpha_v_deg) {
    if (alpha_v_deg < 0.0 || alpha_v_deg > cam.beta_v_deg)
        throw std::domain_error("imaging angle outside [0, beta_v]");
    const double half = cam.beta_v_deg / 2.0;
    const double h = static_cast<double>(cam.img_h);
    return (h / 2.0) * (1.0 + std::tan(deg2rad(alpha_v_deg - half)) / std::tan(deg2rad(half)));
}

double phi_v(const CameraModel& cam, double alpha_v_deg) {
    const double alpha = std::max(alpha_v_deg, kAlphaEpsDeg);
    const double theta = cam.theta_deg();
    if (alpha + theta >= 90.0) throw_above_horizon(alpha, theta);

    const double a = deg2rad(alpha);
    const double th = deg2rad(theta);
    const double half = deg2rad(cam.beta_v_deg / 2.0);

    const double num = std::cos(th) * (std::tan(a + th) - std::tan(th));
    const double den = alpha < cam.beta_v_deg / 2.0
                           ? std::tan(half) - std::tan(half - a)
                           : std::tan(half) + std::tan(a - half);
    return num / den;
}

double phi_h(const CameraModel& cam, double alpha_v_deg) {
    const double theta = cam.theta_deg();
    if (alpha_v_deg + theta >= 90.0) throw_above_horizon(alpha_v_deg, theta);

    const double a = deg2rad(alpha_v_deg);
    const double th = deg2rad(theta);
    const double half = deg2rad(cam.beta_v_deg / 2.0);
    return std::cos(std::abs(half - a)) * std::cos(th) / (std::cos(half) * std::cos(a + th));
}

double horizon_angle(const CameraModel& cam) {
    return std::min(cam.beta_v_deg, 90.0 - cam.theta_deg() - kHorizonMarginDeg);
}

double horizon_row(const CameraModel& cam) {
    const double a_max = horizon_angle(cam);
    if (a_max >= cam.beta_v_deg) return static_cast<double>(cam.img_h);
    return pixel_y_for_angle(cam, a_max);
}

double phi_max(const CameraModel& cam) { return phi_h(cam, horizon_angle(cam)); }

double ground_distance(const CameraModel& cam, double alpha_v_deg) {
    const double theta = cam.theta_deg();
    if (alpha_v_deg + theta >= 90.0) throw_above_horizon(alpha_v_deg, theta);
    const double a = deg2rad(alpha_v_deg);
    const double th = deg2rad(theta);
    return cam.cam_height * (std::tan(a + th) - std::tan(th));
}

double map_depth_range(const CameraModel& cam) {
    const double y_h = horizon_row(cam);
    return y_h * phi_v(cam, std::min(imaging_angle_v(cam, y_h), horizon_angle(cam)));
}

MapPoint map_point(const CameraModel& cam, PixelPoint p) {
    const double alpha = imaging_angle_v(cam, p.y);
    const double a_max = horizon_angle(cam);
    if (alpha > a_max + 1e-12) throw_above_horizon(alpha, cam.theta_deg());

    const double pv = phi_v(cam, std::min(alpha, a_max));
    const double ph = phi_h(cam, std::min(alpha, a_max));
    const double w_half = static_cast<double>(cam.img_w) / 2.0;
    return {w_half * (phi_max(cam) - ph) + p.x * ph, p.y * pv};
}

PixelPoint unmap_point(const CameraModel& cam, MapPoint m) {
    const double y_h = horizon_row(cam);
    const double map_y_max = map_depth_range(cam);
    if (m.y < -1e-9 || m.y > map_y_max + 1e-9)
        throw std::out_of_range("map y " + std::to_string(m.y) + " outside mapped range [0, " +
                                std::to_string(map_y_max) + "]");
    const double target = std::clamp(m.y, 0.0, map_y_max);

    // y * phi_v(alpha_v(y)) is strictly increasing, so bisection converges.
    double lo = 0.0, hi = y_h;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, y_h); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double g = mid * phi_v(cam, std::min(imaging_angle_v(cam, mid), horizon_angle(cam)));
        if (std::abs(g - target) <= 1e-12) {
            lo = hi = mid;
            break;
        }
        (g < target ? lo : hi) = mid;
    }
    const double y = 0.5 * (lo + hi);

    const double alpha = std::min(imaging_angle_v(cam, y), horizon_angle(cam));
    const double ph = phi_h(cam, alpha);
    const double w_half = static_cast<double>(cam.img_w) / 2.0;
    const double x = (m.x - w_half * (phi_max(cam) - ph)) / ph;
    return {x, y};
}

}  // namespace rlm
