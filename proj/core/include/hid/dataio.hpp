#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hid/geometry.hpp"

namespace hid {

/// Number of interactive action classes when a dataset declares none (AVA-I).
inline constexpr int kDefaultNumActions = 17;

struct FrameKey {
  std::string video_id;
  std::int64_t timestamp = 0;

  auto operator<=>(const FrameKey&) const = default;
  std::string str() const {
    return "(" + video_id + ", " + std::to_string(timestamp) + ")";
  }
};

struct PersonGT {
  BBox box;
  std::vector<int> actions;  // sorted, unique class ids in [0, K)

  bool operator==(const PersonGT&) const = default;
};

struct FrameGroundTruth {
  std::string video_id;
  std::int64_t timestamp = 0;
  std::vector<PersonGT> persons;
  std::vector<std::vector<std::size_t>> groups;  // disjoint member-index lists

  FrameKey key() const { return {video_id, timestamp}; }
  bool operator==(const FrameGroundTruth&) const = default;
};

struct PersonPrediction {
  BBox box;
  double score = 0.0;                 // foreground confidence s^P
  std::vector<double> action_scores;  // K per-class scores

  bool operator==(const PersonPrediction&) const = default;
};

struct GroupPrediction {
  std::vector<std::size_t> members;
  double score = 0.0;  // group confidence s^G
  std::optional<BBox> box;

  bool operator==(const GroupPrediction&) const = default;
};

struct FramePrediction {
  std::string video_id;
  std::int64_t timestamp = 0;
  std::vector<PersonPrediction> persons;
  std::vector<GroupPrediction> groups;

  FrameKey key() const { return {video_id, timestamp}; }
  bool operator==(const FramePrediction&) const = default;
};

struct DatasetMeta {
  int num_actions = kDefaultNumActions;
  std::vector<std::string> labels;  // optional id -> name map

  bool operator==(const DatasetMeta&) const = default;
};

struct GroundTruthDataset {
  DatasetMeta meta;
  std::vector<FrameGroundTruth> frames;
  std::vector<std::string> warnings;  // clamped coordinates etc.
};

struct PredictionDataset {
  DatasetMeta meta;
  std::vector<FramePrediction> frames;
  std::vector<std::string> warnings;
};

struct DatasetStats {
  std::size_t num_frames = 0;
  std::size_t num_groups_total = 0;
  std::size_t num_interaction_categories_present = 0;
  std::size_t max_groups_per_frame = 0;
  std::size_t max_people_per_group = 0;
  double mean_people_per_group = 0.0;  // 0 when there are no groups

  bool operator==(const DatasetStats&) const = default;
};

/// strict: annotation invariants (disjoint groups, group size >= 2, index
/// bounds, unique keys, grouped persons carry actions) are hard parse errors.
/// lenient: structural schema only; semantic findings are left to
/// validate_ground_truth so a validation run can list them all.
enum class ParseMode { strict, lenient };

GroundTruthDataset parse_ground_truth(const std::string& path,
                                      ParseMode mode = ParseMode::strict);
GroundTruthDataset parse_ground_truth(std::istream& in,
                                      ParseMode mode = ParseMode::strict);

PredictionDataset parse_predictions(const std::string& path);
PredictionDataset parse_predictions(std::istream& in);

std::string serialize_frame(const FrameGroundTruth& frame);
std::string serialize_frame(const FramePrediction& frame);
std::string serialize_meta(const DatasetMeta& meta);

/// Meta line first (when not default), then one frame per line, file order.
void write_dataset(std::ostream& out, const GroundTruthDataset& ds);
void write_dataset(std::ostream& out, const PredictionDataset& ds);

enum class GtRule {
  groups_overlap,
  group_too_small,
  index_out_of_range,
  duplicate_frame_key,
  grouped_person_without_actions,
};

const char* gt_rule_name(GtRule rule);

struct GtViolation {
  GtRule rule;
  FrameKey frame;
  std::string message;
};

struct GtWarning {
  std::string code;  // "scenario1", "scenario2"
  FrameKey frame;
  std::string message;
};

struct ValidationReport {
  std::vector<GtViolation> violations;
  std::vector<GtWarning> warnings;

  bool ok() const { return violations.empty(); }
};

ValidationReport validate_ground_truth(const std::vector<FrameGroundTruth>& frames);

DatasetStats dataset_stats(const std::vector<FrameGroundTruth>& frames);

/// Drops predicted persons below person_thr and groups below group_thr or with
/// fewer than min_group_size surviving members, then reindexes group members.
FramePrediction filter_prediction(const FramePrediction& frame, double person_thr,
                                  double group_thr, std::size_t min_group_size = 1);

}  // namespace hid
