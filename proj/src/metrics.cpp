#include "rlmtrack/metrics.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "rlmtrack/assoc.hpp"

namespace rlm {

namespace {

std::map<int, std::vector<const MotRow*>> group_by_frame(const std::vector<MotRow>& rows) {
    std::map<int, std::vector<const MotRow*>> out;
    for (const auto& r : rows) out[r.frame].push_back(&r);
    return out;
}

}  // namespace

std::vector<FrameMatches> match_frames(const std::vector<MotRow>& gt,
                                       const std::vector<MotRow>& hyp, double iou_thresh) {
    const auto gt_by_frame = group_by_frame(gt);
    const auto hyp_by_frame = group_by_frame(hyp);

    std::set<int> frames;
    for (const auto& [f, _] : gt_by_frame) frames.insert(f);
    for (const auto& [f, _] : hyp_by_frame) frames.insert(f);

    std::vector<FrameMatches> log;
    std::map<int, int> carry;  // gt id -> hyp id matched in the previous frame

    for (int frame : frames) {
        FrameMatches fm;
        fm.frame = frame;

        static const std::vector<const MotRow*> kNone;
        const auto git = gt_by_frame.find(frame);
        const auto hit = hyp_by_frame.find(frame);
        const auto& gts = git != gt_by_frame.end() ? git->second : kNone;
        const auto& hyps = hit != hyp_by_frame.end() ? hit->second : kNone;

        std::vector<char> gt_used(gts.size(), 0), hyp_used(hyps.size(), 0);

        // Persistence bonus: keep last frame's pairs while they still overlap.
        for (size_t i = 0; i < gts.size(); ++i) {
            const auto it = carry.find(gts[i]->id);
            if (it == carry.end()) continue;
            for (size_t j = 0; j < hyps.size(); ++j) {
                if (hyp_used[j] || hyps[j]->id != it->second) continue;
                if (iou(to_rect(*gts[i]), to_rect(*hyps[j])) >= iou_thresh) {
                    fm.matches.emplace_back(gts[i]->id, hyps[j]->id);
                    gt_used[i] = hyp_used[j] = 1;
                }
                break;
            }
        }

        // Optimal matching of the remainder.
        std::vector<int> gi, hj;
        for (size_t i = 0; i < gts.size(); ++i)
            if (!gt_used[i]) gi.push_back(static_cast<int>(i));
        for (size_t j = 0; j < hyps.size(); ++j)
            if (!hyp_used[j]) hj.push_back(static_cast<int>(j));

        std::vector<Rect> g_rects, h_rects;
        for (int i : gi) g_rects.push_back(to_rect(*gts[i]));
        for (int j : hj) h_rects.push_back(to_rect(*hyps[j]));
        const Assignment a = associate(g_rects, h_rects, iou_thresh);
        for (const auto& [ri, rj] : a.matches)
            fm.matches.emplace_back(gts[gi[ri]]->id, hyps[hj[rj]]->id);

        fm.fn = static_cast<int>(gts.size() - fm.matches.size());
        fm.fp = static_cast<int>(hyps.size() - fm.matches.size());

        carry.clear();
        for (const auto& [g, h] : fm.matches) carry[g] = h;
        log.push_back(std::move(fm));
    }
    return log;
}

int count_id_switches(const std::vector<FrameMatches>& log) {
    std::map<int, int> last_hyp;  // gt id -> hyp id at its last matched frame
    int switches = 0;
    for (const auto& fm : log) {
        for (const auto& [g, h] : fm.matches) {
            const auto it = last_hyp.find(g);
            if (it != last_hyp.end() && it->second != h) ++switches;
            last_hyp[g] = h;
        }
    }
    return switches;
}

EvalReport evaluate(const std::vector<MotRow>& gt, const std::vector<MotRow>& hyp,
                    double iou_thresh) {
    EvalReport r;
    r.frames = match_frames(gt, hyp, iou_thresh);
    r.gt_count = static_cast<int>(gt.size());
    r.hyp_count = static_cast<int>(hyp.size());
    for (const auto& fm : r.frames) {
        r.fp += fm.fp;
        r.fn += fm.fn;
    }
    r.id_switches = count_id_switches(r.frames);
    if (r.gt_count > 0) {
        r.mota = 1.0 - static_cast<double>(r.fp + r.fn + r.id_switches) / r.gt_count;
        r.mota_defined = true;
    }

    // IDF1: overlap counts between gt and hyp identities, then one global
    // one-to-one assignment maximizing correctly identified frames.
    std::map<std::pair<int, int>, int> overlap;
    std::set<int> gt_ids, hyp_ids;
    for (const auto& fm : r.frames) {
        for (const auto& [g, h] : fm.matches) {
            ++overlap[{g, h}];
            gt_ids.insert(g);
            hyp_ids.insert(h);
        }
    }
    if (!overlap.empty()) {
        std::vector<int> gs(gt_ids.begin(), gt_ids.end());
        std::vector<int> hs(hyp_ids.begin(), hyp_ids.end());
        int max_ov = 0;
        for (const auto& [_, c] : overlap) max_ov = std::max(max_ov, c);
        // Minimize (max - overlap) to maximize total overlap.
        std::vector<std::vector<double>> cost(gs.size(), std::vector<double>(hs.size()));
        for (size_t i = 0; i < gs.size(); ++i)
            for (size_t j = 0; j < hs.size(); ++j) {
                const auto it = overlap.find({gs[i], hs[j]});
                cost[i][j] = max_ov - (it != overlap.end() ? it->second : 0);
            }
        const Assignment a = hungarian(cost);
        for (const auto& [i, j] : a.matches) {
            const auto it = overlap.find({gs[i], hs[j]});
            if (it != overlap.end()) r.idtp += it->second;
        }
    }
    const int idfp = r.hyp_count - r.idtp;
    const int idfn = r.gt_count - r.idtp;
    const double denom = 2.0 * r.idtp + idfp + idfn;
    r.idf1 = denom > 0.0 ? 2.0 * r.idtp / denom : 1.0;
    return r;
}

}  // namespace rlm
