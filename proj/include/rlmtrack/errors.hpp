#pragma once

#include <stdexcept>
#include <string>

namespace rlm {

// A view ray that never intersects the ground plane (pixel at or above the
// horizon row). Callers that stream detections catch this to drop the box.
class AboveHorizonError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Invalid configuration (camera file, tracker config, scenario spec).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input text. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, long line = -1)
        : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}

    long line() const { return line_; }

private:
    long line_;
};

}  // namespace rlm
