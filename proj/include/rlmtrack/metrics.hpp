#pragma once

#include <utility>
#include <vector>

#include "rlmtrack/io.hpp"

namespace rlm {

// Per-frame correspondence between ground-truth and hypothesis identities.
struct FrameMatches {
    int frame = 0;
    std::vector<std::pair<int, int>> matches;  // (gt id, hyp id)
    int fp = 0;
    int fn = 0;
};

struct EvalReport {
    double mota = 0.0;
    bool mota_defined = false;  // false when there is no ground truth at all
    double idf1 = 0.0;
    int id_switches = 0;
    int fp = 0;
    int fn = 0;
    int gt_count = 0;   // total ground-truth boxes
    int hyp_count = 0;  // total hypothesis boxes
    int idtp = 0;
    std::vector<FrameMatches> frames;
};

/// CLEAR-style per-frame matching: pairs matched in the previous frame are
/// kept while their IoU clears the threshold, then the remainder is matched
/// optimally on 1 - IoU.
std::vector<FrameMatches> match_frames(const std::vector<MotRow>& gt,
                                       const std::vector<MotRow>& hyp,
                                       double iou_thresh = 0.5);

// A switch is counted when a ground truth's matched hypothesis id differs
// between consecutive matched frames.
int count_id_switches(const std::vector<FrameMatches>& log);

// MOTA, IDF1 (global one-to-one id assignment over per-frame match counts),
// switches, FP, FN in one pass.
EvalReport evaluate(const std::vector<MotRow>& gt, const std::vector<MotRow>& hyp,
                    double iou_thresh = 0.5);

}  // namespace rlm
