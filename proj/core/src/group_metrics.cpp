#include "hid/group_metrics.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

#include "detail/ap_util.hpp"
#include "detail/frame_align.hpp"
#include "detail/parallel.hpp"
#include "hid/matching.hpp"

namespace hid {
namespace {

std::vector<GroupRef> gt_group_refs(const FrameGroundTruth& frame) {
  std::vector<GroupRef> refs;
  refs.reserve(frame.groups.size());
  for (const auto& members : frame.groups) {
    GroupRef ref;
    ref.member_boxes.reserve(members.size());
    for (const std::size_t m : members) {
      if (m >= frame.persons.size())
        throw std::invalid_argument("group member index out of range at frame " +
                                    frame.key().str());
      ref.member_boxes.push_back(frame.persons[m].box);
    }
    refs.push_back(std::move(ref));
  }
  return refs;
}

GroupRef pred_group_ref(const FramePrediction& frame, const GroupPrediction& group) {
  GroupRef ref;
  ref.member_boxes.reserve(group.members.size());
  for (const std::size_t m : group.members) {
    if (m >= frame.persons.size())
      throw std::invalid_argument("group member index out of range at frame " +
                                  frame.key().str());
    ref.member_boxes.push_back(frame.persons[m].box);
  }
  return ref;
}

// One predicted group flattened for global ranking.
struct RankedGroup {
  double score = 0.0;
  FrameKey key;
  std::size_t group_idx = 0;
  std::size_t gt_frame = 0;             // index into per-frame matched flags
  std::vector<double> iou_to_gt;        // IoU^G against each GT group in frame
};

}  // namespace

double group_iou(const GroupRef& gt, const GroupRef& pred) {
  if (gt.member_boxes.empty() || pred.member_boxes.empty())
    throw std::invalid_argument("group_iou: empty group");
  const CostMatrix cost = build_cost_matrix(gt.member_boxes, pred.member_boxes);
  const Assignment matched = filter_matches(
      hungarian_min_cost(cost), gt.member_boxes, pred.member_boxes);
  const double u = static_cast<double>(gt.member_boxes.size());
  const double v = static_cast<double>(pred.member_boxes.size());
  const double r = static_cast<double>(matched.size());
  return r / (u + v - r);
}

APResult evaluate_group_ap(std::span<const FrameGroundTruth> gt_frames,
                           std::span<const FramePrediction> pred_frames,
                           std::size_t workers) {
  const auto gt_index = detail::index_ground_truth(gt_frames);
  const auto pred_to_gt = detail::align_predictions(gt_index, pred_frames);

  std::vector<std::vector<GroupRef>> gt_refs(gt_frames.size());
  std::size_t num_gt_groups = 0;
  for (std::size_t i = 0; i < gt_frames.size(); ++i) {
    gt_refs[i] = gt_group_refs(gt_frames[i]);
    num_gt_groups += gt_refs[i].size();
  }

  // IoU^G tables per prediction frame, computed independently per frame.
  std::vector<std::vector<RankedGroup>> per_frame(pred_frames.size());
  detail::parallel_for(pred_frames.size(), workers, [&](std::size_t j) {
    const FramePrediction& frame = pred_frames[j];
    const std::size_t gi = pred_to_gt[j];
    const auto& refs = gt_refs[gi];
    auto& slot = per_frame[j];
    slot.reserve(frame.groups.size());
    for (std::size_t g = 0; g < frame.groups.size(); ++g) {
      RankedGroup rec;
      rec.score = frame.groups[g].score;
      rec.key = frame.key();
      rec.group_idx = g;
      rec.gt_frame = gi;
      const GroupRef ref = pred_group_ref(frame, frame.groups[g]);
      rec.iou_to_gt.reserve(refs.size());
      for (const GroupRef& gt_ref : refs)
        rec.iou_to_gt.push_back(group_iou(gt_ref, ref));
      slot.push_back(std::move(rec));
    }
  });

  std::vector<RankedGroup> ranked;
  for (auto& slot : per_frame)
    for (auto& rec : slot) ranked.push_back(std::move(rec));
  std::sort(ranked.begin(), ranked.end(),
            [](const RankedGroup& a, const RankedGroup& b) {
              if (a.score != b.score) return a.score > b.score;
              return std::tie(a.key, a.group_idx) < std::tie(b.key, b.group_idx);
            });

  APResult out;
  out.num_gt_groups = num_gt_groups;
  out.num_pred_groups = ranked.size();

  std::vector<std::vector<char>> matched(gt_frames.size());
  for (std::size_t i = 0; i < gt_frames.size(); ++i)
    matched[i].assign(gt_refs[i].size(), 0);

  double mean_sum = 0.0;
  for (std::size_t t = 0; t < kGroupIouThresholds.size(); ++t) {
    const double delta = kGroupIouThresholds[t];
    for (auto& flags : matched) std::fill(flags.begin(), flags.end(), 0);

    std::vector<bool> is_tp(ranked.size(), false);
    for (std::size_t k = 0; k < ranked.size(); ++k) {
      const RankedGroup& rec = ranked[k];
      auto& flags = matched[rec.gt_frame];
      std::size_t best = flags.size();
      double best_iou = -1.0;
      for (std::size_t g = 0; g < rec.iou_to_gt.size(); ++g) {
        if (flags[g]) continue;
        if (rec.iou_to_gt[g] > best_iou) {
          best_iou = rec.iou_to_gt[g];
          best = g;
        }
      }
      if (best < flags.size() && best_iou >= delta) {
        flags[best] = 1;
        is_tp[k] = true;
      }
    }
    out.per_threshold[t] = detail::average_precision(is_tp, num_gt_groups);
    mean_sum += out.per_threshold[t];
  }
  out.mean = mean_sum / static_cast<double>(kGroupIouThresholds.size());
  return out;
}

}  // namespace hid
