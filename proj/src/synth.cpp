#include "rlmtrack/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rlmtrack/assoc.hpp"

namespace rlm {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Local inverse of the vertical angle-to-row relation. Kept separate from the
// geometry module on purpose: the oracle must not share its code paths.
double row_for_vertical_angle(const CameraModel& cam, double alpha_deg) {
    const double half = cam.beta_v_deg / 2.0;
    return (cam.img_h / 2.0) *
           (1.0 + std::tan((alpha_deg - half) * kDegToRad) / std::tan(half * kDegToRad));
}

double col_for_azimuth(const CameraModel& cam, double psi_deg) {
    const double half = cam.beta_h_deg / 2.0;
    return (cam.img_w / 2.0) *
           (1.0 + std::tan(psi_deg * kDegToRad) / std::tan(half * kDegToRad));
}

}  // namespace

std::uint64_t Rng::next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::normal(double sigma) {
    if (has_spare_) {
        has_spare_ = false;
        return spare_ * sigma;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t) * sigma;
}

PixelPoint ray_cast_project(const CameraModel& cam, double ground_d, double lateral) {
    if (ground_d < 0.0) throw std::domain_error("ground point behind the bottom view line");
    const double theta = cam.theta_deg();
    const double h = cam.cam_height;

    // Camera at (0, 0, h); bottom ray meets the ground at horizontal distance
    // h*tan(theta) from the foot. The target sits foot_dist away from the foot.
    const double foot_dist = h * std::tan(theta * kDegToRad) + ground_d;
    const double elev_deg = std::atan2(foot_dist, h) / kDegToRad;  // from vertical
    const double alpha_deg = elev_deg - theta;
    if (alpha_deg > horizon_angle(cam) + 1e-12)
        throw AboveHorizonError("ground point beyond the usable horizon");

    const double psi_deg = std::atan2(lateral, foot_dist) / kDegToRad;
    return {col_for_azimuth(cam, psi_deg), row_for_vertical_angle(cam, std::max(0.0, alpha_deg))};
}

namespace {

struct ProjectedAgent {
    int index;
    double depth;
    Rect box;  // top-left-origin pixel rect
};

// Full body rectangle: feet on the ground, top at body_h, lateral extent
// body_w around the lateral position. Returns false when the agent is not
// cleanly inside the frame.
bool project_agent(const CameraModel& cam, const AgentSpec& a, double depth, double lateral,
                   Rect* out) {
    if (depth < 0.0) return false;
    PixelPoint bottom;
    try {
        bottom = ray_cast_project(cam, depth, lateral);
    } catch (const std::domain_error&) {
        return false;
    }
    if (bottom.x < 0.0 || bottom.x > cam.img_w) return false;

    const double theta = cam.theta_deg();
    const double foot_dist = cam.cam_height * std::tan(theta * kDegToRad) + depth;

    // Head row: the ray to the top of the body. A head at or above the lens
    // maps to the top of the frame.
    double alpha_top;
    if (a.body_h >= cam.cam_height) {
        alpha_top = cam.beta_v_deg;
    } else {
        const double elev = std::atan2(foot_dist, cam.cam_height - a.body_h) / kDegToRad;
        alpha_top = std::min(elev - theta, cam.beta_v_deg);
    }
    const double y_top = row_for_vertical_angle(cam, alpha_top);
    if (y_top <= bottom.y) return false;

    const double psi_l = std::atan2(lateral - a.body_w / 2.0, foot_dist) / kDegToRad;
    const double psi_r = std::atan2(lateral + a.body_w / 2.0, foot_dist) / kDegToRad;
    const double x_l = col_for_azimuth(cam, psi_l);
    const double x_r = col_for_azimuth(cam, psi_r);
    if (x_r <= x_l) return false;

    // Convert to the top-left-origin convention of MOT rows.
    *out = Rect{x_l, cam.img_h - y_top, x_r, cam.img_h - bottom.y};
    return true;
}

MotRow to_row(int frame, int id, const Rect& r, double score) {
    return MotRow{frame, id, r.x0, r.y0, r.x1 - r.x0, r.y1 - r.y0, score};
}

}  // namespace

SynthOutput generate(const ScenarioSpec& spec) {
    spec.camera.validate();
    SynthOutput out;
    Rng rng(spec.seed);

    for (int frame = 1; frame <= spec.n_frames; ++frame) {
        std::vector<ProjectedAgent> present;
        for (int k = 0; k < static_cast<int>(spec.agents.size()); ++k) {
            const auto& a = spec.agents[k];
            const double t = static_cast<double>(frame - 1);
            const double depth = a.depth + a.vel_depth * t;
            const double lateral = a.lateral + a.vel_lateral * t;
            Rect box;
            if (project_agent(spec.camera, a, depth, lateral, &box))
                present.push_back({k, depth, box});
        }

        std::vector<double> score(present.size(), spec.occlusion.base_score);
        std::vector<Rect> det_box;
        det_box.reserve(present.size());
        for (const auto& p : present) det_box.push_back(p.box);

        // Overlapping pairs degrade the farther agent's detection. Severe
        // overlap also merges its box with the occluder, the way a detector
        // boxes the joint blob.
        for (size_t i = 0; i < present.size(); ++i) {
            for (size_t j = i + 1; j < present.size(); ++j) {
                const double v = iou(present[i].box, present[j].box);
                if (v <= spec.occlusion.iou_thresh) continue;
                const size_t far = present[i].depth >= present[j].depth ? i : j;
                const size_t near = far == i ? j : i;
                score[far] = spec.occlusion.occluded_score;
                if (v > spec.occlusion.drag_iou_thresh) {
                    det_box[far] = Rect{std::min(present[near].box.x0, present[far].box.x0),
                                        std::min(present[near].box.y0, present[far].box.y0),
                                        std::max(present[near].box.x1, present[far].box.x1),
                                        std::max(present[near].box.y1, present[far].box.y1)};
                }
            }
        }

        for (size_t i = 0; i < present.size(); ++i) {
            out.gt.push_back(to_row(frame, present[i].index + 1, present[i].box, 1.0));
            Rect d = det_box[i];
            const double jx = rng.normal(spec.jitter_px);
            const double jy = rng.normal(spec.jitter_px);
            d.x0 += jx;
            d.x1 += jx;
            d.y0 += jy;
            d.y1 += jy;
            out.dets.push_back(to_row(frame, -1, d, score[i]));
        }
    }
    return out;
}

ScenarioSpec crossing_preset(std::uint64_t seed) {
    ScenarioSpec s;
    s.camera = CameraModel{70.0, 110.0, 30.0, 8.0, 1920, 1080, 30.0};
    s.n_frames = 60;
    s.seed = seed;
    s.jitter_px = 2.0;
    // Two near-parallel walkers one meter apart in depth, swapping sides.
    // Their pixel boxes overlap for a handful of frames around frame 30;
    // their mapped positions never come close.
    s.agents = {
        {9.0, -1.65, 0.0, +0.055, 0.55, 1.70},
        {10.0, +1.65, 0.0, -0.055, 0.60, 1.80},
    };
    return s;
}

}  // namespace rlm
