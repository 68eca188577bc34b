#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hid {

/// Malformed input file: bad JSON, schema violation, or broken annotation
/// invariant. line() is 1-based, 0 when the error is not tied to one line.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                    : message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Prediction frames whose (video_id, timestamp) key has no ground truth.
class FrameKeyMismatch : public std::runtime_error {
 public:
  explicit FrameKeyMismatch(std::vector<std::string> missing)
      : std::runtime_error(describe(missing)), missing_keys_(std::move(missing)) {}

  const std::vector<std::string>& missing_keys() const { return missing_keys_; }

 private:
  static std::string describe(const std::vector<std::string>& keys) {
    std::string msg = "prediction frames missing from ground truth:";
    for (const auto& k : keys) msg += " " + k;
    return msg;
  }

  std::vector<std::string> missing_keys_;
};

}  // namespace hid
