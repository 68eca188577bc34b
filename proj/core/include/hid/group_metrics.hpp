#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "hid/dataio.hpp"
#include "hid/geometry.hpp"

namespace hid {

/// The six group-IoU thresholds, 50% to 100% in 10% steps.
inline constexpr std::array<double, 6> kGroupIouThresholds = {0.5, 0.6, 0.7,
                                                              0.8, 0.9, 1.0};

/// Member boxes of one interactive group.
struct GroupRef {
  std::vector<BBox> member_boxes;
};

struct APResult {
  std::array<double, 6> per_threshold = {};  // aligned with kGroupIouThresholds
  double mean = 0.0;
  std::size_t num_gt_groups = 0;
  std::size_t num_pred_groups = 0;

  bool operator==(const APResult&) const = default;
};

/// Group-level IoU: optimal bipartite matching between member boxes (cost
/// -IoU above the 0.5 gate), bad matches filtered, then R / (U + V - R) where
/// R counts surviving pairs. 1 exactly iff the groups admit a perfect match.
double group_iou(const GroupRef& gt, const GroupRef& pred);

/// Group average precision: predictions ranked globally by group confidence,
/// matched greedily per frame to the highest-IoU^G unmatched ground-truth
/// group, judged at each threshold, all-points AP per threshold, mean over
/// the six thresholds. Throws FrameKeyMismatch when a prediction frame has no
/// ground-truth counterpart.
APResult evaluate_group_ap(std::span<const FrameGroundTruth> gt_frames,
                           std::span<const FramePrediction> pred_frames,
                           std::size_t workers = 1);

}  // namespace hid
