#include "rlmtrack/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace rlm {

namespace {

double ema(double prev, double next, double alpha) { return alpha * next + (1.0 - alpha) * prev; }

bool sane(const Detection& d) {
    return std::isfinite(d.x) && std::isfinite(d.y) && std::isfinite(d.w) && std::isfinite(d.h) &&
           std::isfinite(d.score) && d.w > 0.0 && d.h > 0.0;
}

}  // namespace

DetectionSplit split_detections(const std::vector<Detection>& dets, const CameraModel& cam,
                                const DensityConfig& cfg, double tau_high) {
    DetectionSplit out;
    std::vector<Detection> candidates;
    for (const auto& d : dets) {
        if (d.score > tau_high)
            out.high.push_back(d);
        else
            candidates.push_back(d);
    }

    out.density = accumulate(out.high, cam.img_w, cam.img_h, cfg);
    normalize(out.density);

    for (const auto& d : candidates) {
        const int cell = cell_of(cam.img_w, cam.img_h, bottom_center(d, cam));
        if (d.score > low_threshold(out.density, cell, cfg))
            out.low.push_back(d);
        else
            ++out.discarded;
    }
    return out;
}

struct Tracker::Staged {
    Detection det;
    PixelPoint bc;       // bottom-center, bottom-origin
    MapPoint pos;        // map plane under RLM, pixel plane otherwise
    int cell = 4;
    double phi_mean = 1.0;
    Rect box;            // association rectangle
};

Tracker::Tracker(CameraModel cam, TrackerConfig cfg) : cam_(std::move(cam)), cfg_(std::move(cfg)) {
    cam_.validate();
    density_.rho.fill(1.0);
}

std::vector<Tracker::Staged> Tracker::map_detections(const std::vector<Detection>& dets) {
    std::vector<Staged> staged;
    staged.reserve(dets.size());
    for (const auto& d : dets) {
        Staged s;
        s.det = d;
        s.bc = bottom_center(d, cam_);
        s.cell = cell_of(cam_.img_w, cam_.img_h, s.bc);
        if (cfg_.use_rlm) {
            try {
                s.pos = map_point(cam_, s.bc);
            } catch (const AboveHorizonError&) {
                ++counters_.dropped_above_horizon;
                continue;
            }
            const double alpha = std::min(imaging_angle_v(cam_, s.bc.y), horizon_angle(cam_));
            s.phi_mean = (phi_v(cam_, alpha) + phi_h(cam_, alpha)) / 2.0;
        } else {
            s.pos = MapPoint{s.bc.x, s.bc.y};
        }
        staged.push_back(s);
    }
    return staged;
}

void Tracker::build_boxes(std::vector<Staged>& high, std::vector<Staged>& low,
                          const DensityMatrix& density) {
    if (!cfg_.use_rlm) {
        for (auto* list : {&high, &low})
            for (auto& s : *list) s.box = to_rect(s.det);
        return;
    }

    // One width per region per frame, from the spacing of all surviving
    // targets there (high and low together), EMA-smoothed across frames.
    std::array<std::vector<double>, 9> depths;
    std::array<double, 9> phi_sum{};
    std::array<int, 9> count{};
    for (const auto* list : {&high, &low}) {
        for (const auto& s : *list) {
            depths[s.cell].push_back(s.pos.y);
            phi_sum[s.cell] += s.phi_mean;
            ++count[s.cell];
        }
    }
    std::array<double, 9> w_bar{};
    for (int c = 0; c < 9; ++c) {
        std::optional<double> w_new;
        if (const auto spacing = avg_spacing(depths[c])) {
            const double a_phi = phi_sum[c] / count[c];
            const double a_rho = std::clamp(density.rho[c], cfg_.density.rho_floor, 1.0);
            w_new = std_width(*spacing, a_phi, a_rho, cam_.fps, cfg_.stdbox);
        }
        w_bar[c] = widths_.update(c, w_new, cfg_.stdbox);
    }
    for (auto* list : {&high, &low}) {
        for (auto& s : *list) {
            const double aspect = s.det.h / s.det.w;
            s.box = to_rect(
                make_std_box(s.pos, w_bar[s.cell], aspect, s.det.score, s.cell, cfg_.stdbox));
        }
    }
}

PixelPoint Tracker::position_px(const TrackState& s) const {
    if (!cfg_.use_rlm) return {s.mean(0), s.mean(1)};
    MapPoint m{s.mean(0), std::clamp(s.mean(1), 0.0, map_depth_range(cam_))};
    return unmap_point(cam_, m);
}

Rect Tracker::track_rect(const Track& t) const {
    if (cfg_.use_rlm) {
        const PixelPoint px = position_px(t.state);
        const int cell = cell_of(cam_.img_w, cam_.img_h,
                                 {std::clamp(px.x, 0.0, static_cast<double>(cam_.img_w)), px.y});
        auto w_bar = widths_.current(cell);
        MappedBox box{{t.state.mean(0), t.state.mean(1)},
                      w_bar.value_or(cfg_.stdbox.w_max),
                      w_bar.value_or(cfg_.stdbox.w_max) * t.aspect,
                      t.last_score,
                      cell};
        return to_rect(box);
    }
    // Pixel plane: EMA dims anchored at the predicted bottom-center,
    // converted to the top-left-origin orientation of detection rects.
    const double cx = t.state.mean(0);
    const double y_bottom_toporigin = cam_.img_h - t.state.mean(1);
    return Rect{cx - t.px_w / 2.0, y_bottom_toporigin - t.px_h, cx + t.px_w / 2.0,
                y_bottom_toporigin};
}

std::vector<MotRow> Tracker::step(const std::vector<Detection>& dets,
                                  const AffineTransform* affine) {
    std::vector<Detection> clean;
    clean.reserve(dets.size());
    for (const auto& d : dets) {
        if (sane(d))
            clean.push_back(d);
        else
            ++counters_.skipped_dets;
    }

    // 1-3: threshold split and region density.
    DetectionSplit split = split_detections(clean, cam_, cfg_.density, cfg_.tau_high);
    density_ = split.density;

    // 4: map and standardize.
    std::vector<Staged> high = map_detections(split.high);
    std::vector<Staged> low = map_detections(split.low);
    build_boxes(high, low, density_);

    // 5: camera-motion shift, then predict.
    if (affine != nullptr && !affine->is_identity()) {
        for (auto& t : tracks_) {
            const Eigen::Vector2d before(t.anchor_px.x, cam_.img_h - t.anchor_px.y);
            const Eigen::Vector2d after = apply_affine(*affine, before);
            PixelPoint moved{std::clamp(after.x(), 0.0, static_cast<double>(cam_.img_w)),
                             std::clamp(static_cast<double>(cam_.img_h) - after.y(), 0.0,
                                        static_cast<double>(cam_.img_h))};
            if (cfg_.use_rlm) {
                try {
                    const MapPoint from = map_point(cam_, t.anchor_px);
                    const MapPoint to = map_point(cam_, moved);
                    t.state.mean(0) += to.x - from.x;
                    t.state.mean(1) += to.y - from.y;
                } catch (const AboveHorizonError&) {
                    ++counters_.affine_skips;
                    continue;
                }
            } else {
                t.state.mean(0) += moved.x - t.anchor_px.x;
                t.state.mean(1) += moved.y - t.anchor_px.y;
            }
            t.anchor_px = moved;
        }
    }
    for (auto& t : tracks_) {
        const int cell = cell_of(cam_.img_w, cam_.img_h, t.anchor_px);
        t.state = predict(t.state, density_.rho[cell], cfg_.noise);
    }

    // 6: two-stage association on the standardized boxes.
    std::vector<Rect> track_rects;
    track_rects.reserve(tracks_.size());
    for (const auto& t : tracks_) track_rects.push_back(track_rect(t));
    std::vector<Rect> high_rects, low_rects;
    for (const auto& s : high) high_rects.push_back(s.box);
    for (const auto& s : low) low_rects.push_back(s.box);

    const auto [stage1, stage2] =
        associate_two_stage(track_rects, high_rects, low_rects, cfg_.iou_min);

    // 7: lifecycle.
    std::vector<char> matched(tracks_.size(), 0);
    auto apply_match = [&](int ti, const Staged& s) {
        Track& t = tracks_[ti];
        MappedBox z{s.pos, 0.0, 0.0, s.det.score, s.cell};
        t.state = update(t.state, z, density_.rho[s.cell], cfg_.noise);
        t.px_w = ema(t.px_w, s.det.w, cfg_.dims_ema);
        t.px_h = ema(t.px_h, s.det.h, cfg_.dims_ema);
        t.aspect = ema(t.aspect,
                       std::clamp(s.det.h / s.det.w, cfg_.stdbox.aspect_min,
                                  cfg_.stdbox.aspect_max),
                       cfg_.dims_ema);
        t.last_score = s.det.score;
        t.anchor_px = s.bc;
        t.frames_since_update = 0;
        ++t.consecutive_matches;
        if (t.status == TrackStatus::Tentative && t.consecutive_matches >= cfg_.n_confirm)
            t.status = TrackStatus::Active;
        else if (t.status == TrackStatus::Lost)
            t.status = TrackStatus::Active;
        matched[ti] = 1;
    };
    for (const auto& [ti, dj] : stage1.matches) apply_match(ti, high[dj]);
    for (const auto& [ti, dj] : stage2.matches) apply_match(ti, low[dj]);

    std::vector<Track> survivors;
    survivors.reserve(tracks_.size() + stage1.unmatched_dets.size());
    for (size_t i = 0; i < tracks_.size(); ++i) {
        Track& t = tracks_[i];
        if (matched[i]) {
            survivors.push_back(t);
            continue;
        }
        if (t.status == TrackStatus::Tentative) continue;  // one miss kills a tentative
        t.consecutive_matches = 0;
        ++t.frames_since_update;
        t.status = TrackStatus::Lost;
        if (t.frames_since_update <= cfg_.max_age) survivors.push_back(t);
    }

    // Births: leftover high-score detections only.
    for (int dj : stage1.unmatched_dets) {
        const Staged& s = high[dj];
        Track t;
        t.id = next_id_++;
        MappedBox z{s.pos, 0.0, 0.0, s.det.score, s.cell};
        t.state = init_state(z, cfg_.noise);
        t.status = cfg_.n_confirm <= 1 ? TrackStatus::Active : TrackStatus::Tentative;
        t.consecutive_matches = 1;
        t.px_w = s.det.w;
        t.px_h = s.det.h;
        t.aspect = std::clamp(s.det.h / s.det.w, cfg_.stdbox.aspect_min, cfg_.stdbox.aspect_max);
        t.last_score = s.det.score;
        t.anchor_px = s.bc;
        survivors.push_back(t);
    }
    tracks_ = std::move(survivors);

    // 8: emit Active tracks matched this frame, restored to pixel boxes.
    std::vector<MotRow> out;
    for (const auto& t : tracks_) {
        if (t.status != TrackStatus::Active || t.frames_since_update != 0 ||
            t.consecutive_matches == 0)
            continue;
        const PixelPoint bc = position_px(t.state);
        const double W = cam_.img_w, H = cam_.img_h;
        double x0 = bc.x - t.px_w / 2.0;
        double y0 = H - bc.y - t.px_h;  // top-left origin
        double x1 = x0 + t.px_w;
        double y1 = y0 + t.px_h;
        const double cx0 = std::clamp(x0, 0.0, W), cx1 = std::clamp(x1, 0.0, W);
        const double cy0 = std::clamp(y0, 0.0, H), cy1 = std::clamp(y1, 0.0, H);
        if (cx0 != x0 || cx1 != x1 || cy0 != y0 || cy1 != y1) ++counters_.clamped_boxes;
        if (cx1 <= cx0 || cy1 <= cy0) continue;  // clamped away entirely
        out.push_back(MotRow{0, t.id, cx0, cy0, cx1 - cx0, cy1 - cy0, t.last_score});
    }
    std::sort(out.begin(), out.end(), [](const MotRow& a, const MotRow& b) { return a.id < b.id; });
    return out;
}

std::vector<MotRow> run_sequence(const CameraModel& cam,
                                 const std::map<int, std::vector<Detection>>& dets_by_frame,
                                 const std::map<int, AffineTransform>& affines,
                                 const TrackerConfig& cfg, RunStats* stats) {
    std::vector<MotRow> rows;
    Tracker tracker(cam, cfg);
    std::set<int> emitted_ids;
    long detections = 0;

    if (!dets_by_frame.empty()) {
        const int first = dets_by_frame.begin()->first;
        const int last = dets_by_frame.rbegin()->first;
        static const std::vector<Detection> kEmpty;
        for (int frame = first; frame <= last; ++frame) {
            const auto dit = dets_by_frame.find(frame);
            const auto& dets = dit != dets_by_frame.end() ? dit->second : kEmpty;
            detections += static_cast<long>(dets.size());
            const auto ait = affines.find(frame);
            const AffineTransform* aff = ait != affines.end() ? &ait->second : nullptr;
            for (auto& row : tracker.step(dets, aff)) {
                row.frame = frame;
                emitted_ids.insert(row.id);
                rows.push_back(row);
            }
        }
    }

    if (stats != nullptr) {
        stats->frames = dets_by_frame.empty()
                            ? 0
                            : dets_by_frame.rbegin()->first - dets_by_frame.begin()->first + 1;
        stats->detections = detections;
        stats->ids_created = tracker.ids_created();
        stats->ids_emitted = static_cast<int>(emitted_ids.size());
        stats->counters = tracker.counters();
    }
    return rows;
}

}  // namespace rlm
