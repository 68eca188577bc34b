#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hid/dataio.hpp"

namespace hid {

struct ClassAP {
  int class_id = 0;
  double ap = 0.0;
  std::size_t num_gt = 0;  // ground-truth boxes carrying this action

  bool operator==(const ClassAP&) const = default;
};

/// How a per-class detection score is formed from a predicted person.
enum class ScoreMode {
  action,                // raw per-action score (default)
  action_times_person,   // per-action score scaled by s^P
};

struct PersonApResult {
  std::vector<ClassAP> per_class;  // one entry per class id, ascending
  double mean_ap = 0.0;            // over classes with num_gt > 0

  bool operator==(const PersonApResult&) const = default;
};

/// AVA-protocol per-person action detection AP: per class, detections ranked
/// by score, true positive when box IoU >= iou_threshold against an unmatched
/// same-class ground-truth person in the same frame, all-points AP. Classes
/// without ground truth are excluded from the mean.
PersonApResult evaluate_person_ap(std::span<const FrameGroundTruth> gt_frames,
                                  std::span<const FramePrediction> pred_frames,
                                  int num_actions,
                                  double iou_threshold = 0.5,
                                  ScoreMode score_mode = ScoreMode::action,
                                  std::size_t workers = 1);

}  // namespace hid
