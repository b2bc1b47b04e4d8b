#pragma once

#include <utility>
#include <vector>

#include "rlmtrack/io.hpp"
#include "rlmtrack/normbox.hpp"

namespace rlm {

// Axis-aligned rectangle, (x0,y0) <= (x1,y1). Orientation-agnostic: both
// map-plane and pixel boxes reduce to this for IoU.
struct Rect {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;

    double area() const { return (x1 - x0) * (y1 - y0); }
};

Rect to_rect(const MappedBox& b);
Rect to_rect(const Detection& d);
Rect to_rect(const MotRow& r);

double iou(const Rect& a, const Rect& b);

struct Assignment {
    std::vector<std::pair<int, int>> matches;  // (track index, detection index)
    std::vector<int> unmatched_tracks;
    std::vector<int> unmatched_dets;
    double total_cost = 0.0;
};

/// Minimum-total-cost matching of size min(n, m) for a finite nonnegative
/// cost matrix. Ties break toward the lowest (row, col) index.
Assignment hungarian(const std::vector<std::vector<double>>& cost);

// IoU association with gating: pairs under iou_min never match.
Assignment associate(const std::vector<Rect>& tracks, const std::vector<Rect>& dets,
                     double iou_min);

/// BYTE-style cascade: stage 1 matches all tracks against high-score boxes,
/// stage 2 matches the stage-1 leftovers against low-score boxes. Track
/// indices in stage 2 refer to the original `tracks` vector.
std::pair<Assignment, Assignment> associate_two_stage(const std::vector<Rect>& tracks,
                                                      const std::vector<Rect>& dets_high,
                                                      const std::vector<Rect>& dets_low,
                                                      double iou_min);

}  // namespace rlm
