#pragma once

#include <cstdint>
#include <vector>

#include "rlmtrack/geometry.hpp"
#include "rlmtrack/io.hpp"

namespace rlm {

// One simulated pedestrian. Ground coordinates: depth is measured from the
// line where the bottom view ray meets the ground, lateral from the camera
// axis. Velocities are per frame.
struct AgentSpec {
    double depth = 0.0;
    double lateral = 0.0;
    double vel_depth = 0.0;
    double vel_lateral = 0.0;
    double body_w = 0.6;
    double body_h = 1.75;
};

// Detector degradation under overlap: above iou_thresh the farther agent's
// score drops; above drag_iou_thresh its box additionally merges with the
// occluder (a detector boxing the joint blob).
struct OcclusionRule {
    double iou_thresh = 0.25;
    double drag_iou_thresh = 0.45;
    double base_score = 0.9;
    double occluded_score = 0.35;
};

struct ScenarioSpec {
    std::vector<AgentSpec> agents;
    int n_frames = 60;
    CameraModel camera;
    OcclusionRule occlusion;
    std::uint64_t seed = 1;
    double jitter_px = 2.0;
};

struct SynthOutput {
    std::vector<MotRow> gt;    // true boxes, id = agent index + 1
    std::vector<MotRow> dets;  // jittered/degraded copies, id = -1
};

// Deterministic generator: splitmix64 stream + hand-rolled Box-Muller, so a
// seed produces identical bytes on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    double uniform();               // [0, 1)
    double normal(double sigma);    // mean 0

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Independent projection oracle. Builds the view ray from first principles
/// (camera at cam_height, bottom ray theta from vertical) and never touches
/// the mapping-coefficient code it is used to validate.
PixelPoint ray_cast_project(const CameraModel& cam, double ground_d, double lateral);

SynthOutput generate(const ScenarioSpec& spec);

// Two pedestrians at different depths swapping sides, with a short mutual
// occlusion in the middle. The standard identity-preservation benchmark.
ScenarioSpec crossing_preset(std::uint64_t seed);

}  // namespace rlm
