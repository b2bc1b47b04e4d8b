#include "rlmtrack/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rlmtrack/motion.hpp"

namespace rlm {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

double to_double(const std::string& s, long line_no) {
    try {
        size_t pos = 0;
        double v = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos != s.size()) throw ParseError("trailing junk in number '" + s + "'", line_no);
        if (!std::isfinite(v)) throw ParseError("non-finite number '" + s + "'", line_no);
        return v;
    } catch (const std::invalid_argument&) {
        throw ParseError("not a number: '" + s + "'", line_no);
    } catch (const std::out_of_range&) {
        throw ParseError("number out of range: '" + s + "'", line_no);
    }
}

bool blank(const std::string& s) {
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isspace(c); });
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open file: " + path);
    return f;
}

}  // namespace

PixelPoint bottom_center(const Detection& d, const CameraModel& cam) {
    const double w = static_cast<double>(cam.img_w);
    const double h = static_cast<double>(cam.img_h);
    return {std::clamp(d.x + d.w / 2.0, 0.0, w), std::clamp(h - (d.y + d.h), 0.0, h)};
}

DetectionFile parse_mot_dets(std::istream& in) {
    DetectionFile out;
    std::string line;
    long line_no = 0;
    int last_frame = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        const auto f = split_csv(line);
        if (f.size() < 7) throw ParseError("expected at least 7 fields, got " +
                                           std::to_string(f.size()), line_no);
        Detection d;
        d.frame = static_cast<int>(to_double(f[0], line_no));
        if (d.frame <= 0) throw ParseError("frame number must be positive", line_no);
        if (d.frame < last_frame)
            throw ParseError("frame numbers decrease (" + std::to_string(d.frame) + " after " +
                             std::to_string(last_frame) + ")", line_no);
        last_frame = std::max(last_frame, d.frame);
        d.x = to_double(f[2], line_no);
        d.y = to_double(f[3], line_no);
        d.w = to_double(f[4], line_no);
        d.h = to_double(f[5], line_no);
        d.score = to_double(f[6], line_no);
        if (d.w <= 0.0 || d.h <= 0.0) {
            ++out.skipped_rows;
            continue;
        }
        if (d.score < 0.0 || d.score > 1.0) {
            d.score = std::clamp(d.score, 0.0, 1.0);
            ++out.clamped_scores;
        }
        out.by_frame[d.frame].push_back(d);
    }
    return out;
}

DetectionFile load_mot_dets(const std::string& path) {
    auto f = open_or_throw(path);
    return parse_mot_dets(f);
}

std::vector<MotRow> parse_mot_rows(std::istream& in) {
    std::vector<MotRow> rows;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        const auto f = split_csv(line);
        if (f.size() < 6) throw ParseError("expected at least 6 fields, got " +
                                           std::to_string(f.size()), line_no);
        MotRow r;
        r.frame = static_cast<int>(to_double(f[0], line_no));
        r.id = static_cast<int>(to_double(f[1], line_no));
        r.x = to_double(f[2], line_no);
        r.y = to_double(f[3], line_no);
        r.w = to_double(f[4], line_no);
        r.h = to_double(f[5], line_no);
        r.score = f.size() > 6 ? to_double(f[6], line_no) : 1.0;
        rows.push_back(r);
    }
    return rows;
}

std::vector<MotRow> load_mot_rows(const std::string& path) {
    auto f = open_or_throw(path);
    return parse_mot_rows(f);
}

void write_mot_results(std::ostream& out, const std::vector<MotRow>& rows) {
    const MotRow* prev = nullptr;
    for (const auto& r : rows) {
        if (prev && (r.frame < prev->frame || (r.frame == prev->frame && r.id < prev->id)))
            throw std::invalid_argument("result rows must be sorted by (frame, id)");
        prev = &r;
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%d,%d,%.2f,%.2f,%.2f,%.2f,%.2f,-1,-1,-1\n",
                      r.frame, r.id, r.x, r.y, r.w, r.h, r.score);
        out << buf;
    }
}

void save_mot_results(const std::string& path, const std::vector<MotRow>& rows) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot open file for writing: " + path);
    write_mot_results(f, rows);
}

CameraModel parse_camera_config(std::istream& in) {
    std::map<std::string, double> kv;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (blank(line)) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected key=value", line_no);
        std::string key = line.substr(0, eq);
        key.erase(std::remove_if(key.begin(), key.end(),
                                 [](unsigned char c) { return std::isspace(c); }),
                  key.end());
        kv[key] = to_double(line.substr(eq + 1), line_no);
    }

    auto need = [&](const char* key) {
        auto it = kv.find(key);
        if (it == kv.end())
            throw ConfigError(std::string("camera config: missing required key '") + key + "'");
        return it->second;
    };

    CameraModel cam;
    cam.beta_v_deg = need("beta_v_deg");
    cam.beta_h_deg = need("beta_h_deg");
    cam.gamma_deg = need("gamma_deg");
    cam.cam_height = need("cam_height");
    cam.img_w = static_cast<int>(need("img_w"));
    cam.img_h = static_cast<int>(need("img_h"));
    cam.fps = need("fps");
    cam.validate();
    return cam;
}

CameraModel load_camera_config(const std::string& path) {
    auto f = open_or_throw(path);
    return parse_camera_config(f);
}

std::map<int, AffineTransform> parse_affine_file(std::istream& in) {
    std::map<int, AffineTransform> out;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (blank(line)) continue;
        const auto f = split_csv(line);
        if (f.size() != 7) throw ParseError("expected frame,a11,a12,a21,a22,b1,b2", line_no);
        const int frame = static_cast<int>(to_double(f[0], line_no));
        AffineTransform t;
        t.a11 = to_double(f[1], line_no);
        t.a12 = to_double(f[2], line_no);
        t.a21 = to_double(f[3], line_no);
        t.a22 = to_double(f[4], line_no);
        t.b1 = to_double(f[5], line_no);
        t.b2 = to_double(f[6], line_no);
        if (std::abs(t.det()) <= 1e-12)
            throw ParseError("singular affine matrix at frame " + std::to_string(frame), line_no);
        out[frame] = t;
    }
    return out;
}

std::map<int, AffineTransform> load_affine_file(const std::string& path) {
    auto f = open_or_throw(path);
    return parse_affine_file(f);
}

}  // namespace rlm
