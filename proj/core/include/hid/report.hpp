#pragma once

#include <cstddef>
#include <string>

#include "hid/action_metrics.hpp"
#include "hid/group_metrics.hpp"

namespace hid {

inline constexpr const char* kToolVersion = "0.1.0";

struct EvalCounts {
  std::size_t num_frames = 0;
  std::size_t num_gt_persons = 0;
  std::size_t num_pred_persons = 0;

  bool operator==(const EvalCounts&) const = default;
};

/// Echo of every flag that shaped the numbers, for reproducibility.
struct EvalConfig {
  double person_iou_threshold = 0.5;
  ScoreMode score_mode = ScoreMode::action;
  double person_score_threshold = 0.0;
  double group_score_threshold = 0.0;
  std::size_t workers = 1;

  bool operator==(const EvalConfig&) const = default;
};

struct EvalReport {
  APResult group_ap;
  PersonApResult person_ap;
  EvalCounts counts;
  EvalConfig config;
  std::string version = kToolVersion;

  bool operator==(const EvalReport&) const = default;
};

std::string to_json_string(const EvalReport& report, int indent = 2);
EvalReport eval_report_from_json(const std::string& json_text);

/// Human-readable summary for stderr; stdout stays machine-clean.
std::string format_summary_table(const EvalReport& report);

}  // namespace hid
