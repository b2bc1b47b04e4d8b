#pragma once

#include <map>
#include <vector>

#include "rlmtrack/assoc.hpp"
#include "rlmtrack/density.hpp"
#include "rlmtrack/io.hpp"
#include "rlmtrack/motion.hpp"
#include "rlmtrack/normbox.hpp"
#include "rlmtrack/synth.hpp"

namespace rlm {

enum class TrackStatus { Tentative, Active, Lost };

struct Track {
    int id = 0;
    TrackState state;
    TrackStatus status = TrackStatus::Tentative;
    int frames_since_update = 0;
    int consecutive_matches = 0;
    double px_w = 0.0;   // EMA of matched detection width, pixels
    double px_h = 0.0;
    double aspect = 2.0; // EMA of clamped h/w
    double last_score = 0.0;
    PixelPoint anchor_px;  // last matched bottom-center, bottom-origin
};

struct TrackerConfig {
    double tau_high = 0.6;
    DensityConfig density;
    StdBoxConfig stdbox;
    NoiseConfig noise;
    int max_age = 30;     // lost-track buffer, frames
    double iou_min = 0.1;
    int n_confirm = 2;    // consecutive matches to promote Tentative -> Active
    double dims_ema = 0.3;
    bool use_rlm = true;  // false: raw pixel-box IoU in the image plane
};

struct TrackerCounters {
    long dropped_above_horizon = 0;
    long clamped_boxes = 0;
    long skipped_dets = 0;
    long affine_skips = 0;
};

// Two-pass threshold split: high-score detections feed the density matrix,
// which then sets the per-cell bar for the low-score remainder.
struct DetectionSplit {
    std::vector<Detection> high;
    std::vector<Detection> low;
    DensityMatrix density;
    int discarded = 0;
};

DetectionSplit split_detections(const std::vector<Detection>& dets, const CameraModel& cam,
                                const DensityConfig& cfg, double tau_high);

/// One tracking session. Strictly sequential: frame t depends on t-1.
class Tracker {
public:
    Tracker(CameraModel cam, TrackerConfig cfg);

    // Processes one frame and returns the rows emitted for it (frame field
    // left 0; the caller knows the frame number). Rows are id-ascending.
    std::vector<MotRow> step(const std::vector<Detection>& dets,
                             const AffineTransform* affine = nullptr);

    const std::vector<Track>& tracks() const { return tracks_; }
    const TrackerCounters& counters() const { return counters_; }
    const DensityMatrix& last_density() const { return density_; }
    int ids_created() const { return next_id_ - 1; }

private:
    struct Staged;  // mapped detection with its association box

    std::vector<Staged> map_detections(const std::vector<Detection>& dets);
    void build_boxes(std::vector<Staged>& high, std::vector<Staged>& low,
                     const DensityMatrix& density);
    Rect track_rect(const Track& t) const;
    PixelPoint position_px(const TrackState& s) const;

    CameraModel cam_;
    TrackerConfig cfg_;
    std::vector<Track> tracks_;
    RegionWidthState widths_;
    DensityMatrix density_;
    TrackerCounters counters_;
    int next_id_ = 1;
};

struct RunStats {
    long frames = 0;
    long detections = 0;
    int ids_created = 0;
    int ids_emitted = 0;
    TrackerCounters counters;
};

/// Folds Tracker::step over a detection file, filling frame gaps with empty
/// frames so lost tracks age correctly. Rows come back sorted by (frame, id).
std::vector<MotRow> run_sequence(const CameraModel& cam,
                                 const std::map<int, std::vector<Detection>>& dets_by_frame,
                                 const std::map<int, AffineTransform>& affines,
                                 const TrackerConfig& cfg, RunStats* stats = nullptr);

}  // namespace rlm
