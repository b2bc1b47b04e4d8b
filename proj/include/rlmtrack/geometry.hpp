#pragma once

#include "rlmtrack/errors.hpp"

namespace rlm {

// Pixel coordinates use a bottom-left origin inside the geometry layer:
// x grows right in [0, W], y grows UP from the image bottom in [0, H].
// Conversion from top-left-origin detection boxes happens in the io layer.
struct PixelPoint {
    double x = 0.0;
    double y = 0.0;
};

// Ground-map coordinates in pixel-equivalent units. y is depth away from the
// line where the bottom edge of the view meets the ground; y >= 0.
struct MapPoint {
    double x = 0.0;
    double y = 0.0;
};

/// Static camera description. Angles in degrees, height in ground units.
struct CameraModel {
    double beta_v_deg = 0.0;   // vertical field of view
    double beta_h_deg = 0.0;   // horizontal field of view
    double gamma_deg = 0.0;    // camera-to-ground tilt
    double cam_height = 0.0;   // height above the ground plane
    int img_w = 0;
    int img_h = 0;
    double fps = 0.0;

    // Angle between the bottom view ray and the vertical.
    double theta_deg() const { return 90.0 - gamma_deg - beta_v_deg / 2.0; }

    // Throws ConfigError on any invariant violation.
    void validate() const;
};

// Margin kept below the mathematical horizon so mapping coefficients stay
// finite across the frame.
inline constexpr double kHorizonMarginDeg = 0.5;

// Vertical imaging angle of pixel row y, in [0, beta_v]. Strictly increasing.
double imaging_angle_v(const CameraModel& cam, double y_px);

// Horizontal imaging angle of pixel column x, in [0, beta_h].
double imaging_angle_h(const CameraModel& cam, double x_px);

// Closed-form inverse of imaging_angle_v.
double pixel_y_for_angle(const CameraModel& cam, double alpha_v_deg);

/// Vertical mapping coefficient: ratio of ground displacement to pixel
/// displacement at imaging angle alpha_v. The 0/0 singularity at alpha_v = 0
/// is handled by evaluating at max(alpha_v, 1e-9 degrees).
double phi_v(const CameraModel& cam, double alpha_v_deg);

/// Horizontal mapping coefficient. Depends on the VERTICAL imaging angle
/// only: lateral stretch is a function of depth.
double phi_h(const CameraModel& cam, double alpha_v_deg);

// Largest imaging angle whose view ray still intersects the ground,
// min(beta_v, 90 - theta - kHorizonMarginDeg).
double horizon_angle(const CameraModel& cam);

// Pixel row corresponding to horizon_angle (clamped to H).
double horizon_row(const CameraModel& cam);

// phi_h evaluated at horizon_angle; the constant that keeps mapped x
// nonnegative across the frame.
double phi_max(const CameraModel& cam);

// Ground distance between the view ray at alpha_v and the bottom-ray ground
// line: cam_height * [tan(alpha_v + theta) - tan(theta)].
double ground_distance(const CameraModel& cam, double alpha_v_deg);

// Largest mapped depth, i.e. map_point y at the horizon row.
double map_depth_range(const CameraModel& cam);

/// Forward mapping, image plane -> ground map:
///   map.y = y * phi_v(alpha_v(y))
///   map.x = (W/2) * (phi_max - phi_h) + x * phi_h
/// Throws AboveHorizonError when the pixel row maps past the horizon.
MapPoint map_point(const CameraModel& cam, PixelPoint p);

/// Exact inverse of map_point. y is recovered by monotone bisection to an
/// absolute tolerance of 1e-9 map units, x in closed form.
PixelPoint unmap_point(const CameraModel& cam, MapPoint m);

}  // namespace rlm
