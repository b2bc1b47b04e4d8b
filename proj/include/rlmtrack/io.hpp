#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "rlmtrack/geometry.hpp"

namespace rlm {

/// One detector output. Box in top-left-origin pixel coordinates, as stored
/// in MOT interchange files.
struct Detection {
    int frame = 0;
    double x = 0.0;  // top-left corner
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;
    double score = 0.0;
};

// Generic MOT CSV row (detections, ground truth, or tracker results).
struct MotRow {
    int frame = 0;
    int id = -1;
    double x = 0.0;
    double y = 0.0;
    double w = 0.0;
    double h = 0.0;
    double score = 1.0;
};

// Bottom-center of a detection box in the geometry convention (y up from the
// image bottom). Clamped into the image rectangle.
PixelPoint bottom_center(const Detection& d, const CameraModel& cam);

struct DetectionFile {
    // Frame-ascending; frames with no detections are absent.
    std::map<int, std::vector<Detection>> by_frame;
    int clamped_scores = 0;   // scores nudged back into [0, 1]
    int skipped_rows = 0;     // rows with non-positive w or h
};

// `frame,id,x,y,w,h,score,...`; the id and trailing fields are ignored.
// Throws ParseError (with line number) on unparseable rows or frame numbers
// that decrease.
DetectionFile parse_mot_dets(std::istream& in);
DetectionFile load_mot_dets(const std::string& path);

// Raw rows, for ground truth and results. Same format tolerance.
std::vector<MotRow> parse_mot_rows(std::istream& in);
std::vector<MotRow> load_mot_rows(const std::string& path);

// `frame,id,x,y,w,h,score,-1,-1,-1` with fixed 2-decimal floats.
// Rows must already be sorted by (frame, id).
void write_mot_results(std::ostream& out, const std::vector<MotRow>& rows);
void save_mot_results(const std::string& path, const std::vector<MotRow>& rows);

// key=value text, one pair per line; # starts a comment. Required keys:
// beta_v_deg beta_h_deg gamma_deg cam_height img_w img_h fps.
CameraModel parse_camera_config(std::istream& in);
CameraModel load_camera_config(const std::string& path);

struct AffineTransform;  // motion.hpp

// CSV `frame,a11,a12,a21,a22,b1,b2`; absent frames mean identity.
std::map<int, AffineTransform> parse_affine_file(std::istream& in);
std::map<int, AffineTransform> load_affine_file(const std::string& path);

}  // namespace rlm
