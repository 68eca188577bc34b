#include "hid/action_metrics.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

#include "detail/ap_util.hpp"
#include "detail/frame_align.hpp"
#include "detail/parallel.hpp"
#include "hid/geometry.hpp"

namespace hid {
namespace {

struct Detection {
  double score = 0.0;
  FrameKey key;
  std::size_t person_idx = 0;
  std::size_t gt_frame = 0;
  const BBox* box = nullptr;
};

}  // namespace

PersonApResult evaluate_person_ap(std::span<const FrameGroundTruth> gt_frames,
                                  std::span<const FramePrediction> pred_frames,
                                  int num_actions, double iou_threshold,
                                  ScoreMode score_mode, std::size_t workers) {
  if (num_actions <= 0)
    throw std::invalid_argument("evaluate_person_ap: num_actions must be positive");
  const auto gt_index = detail::index_ground_truth(gt_frames);
  const auto pred_to_gt = detail::align_predictions(gt_index, pred_frames);

  for (const auto& frame : gt_frames)
    for (const auto& person : frame.persons)
      for (const int a : person.actions)
        if (a < 0 || a >= num_actions)
          throw std::invalid_argument("unknown class index " + std::to_string(a) +
                                      " at frame " + frame.key().str());
  for (const auto& frame : pred_frames)
    for (const auto& person : frame.persons)
      if (static_cast<int>(person.action_scores.size()) != num_actions)
        throw std::invalid_argument(
            "prediction action_scores length mismatch at frame " +
            frame.key().str());

  PersonApResult out;
  out.per_class.assign(static_cast<std::size_t>(num_actions), ClassAP{});

  detail::parallel_for(
      static_cast<std::size_t>(num_actions), workers, [&](std::size_t ki) {
        const int k = static_cast<int>(ki);

        // Ground-truth person boxes carrying class k, per frame.
        std::vector<std::vector<const BBox*>> gt_boxes(gt_frames.size());
        std::size_t num_gt = 0;
        for (std::size_t i = 0; i < gt_frames.size(); ++i) {
          for (const auto& person : gt_frames[i].persons) {
            if (std::find(person.actions.begin(), person.actions.end(), k) !=
                person.actions.end()) {
              gt_boxes[i].push_back(&person.box);
              ++num_gt;
            }
          }
        }

        std::vector<Detection> detections;
        for (std::size_t j = 0; j < pred_frames.size(); ++j) {
          const FramePrediction& frame = pred_frames[j];
          for (std::size_t p = 0; p < frame.persons.size(); ++p) {
            const auto& person = frame.persons[p];
            const double action_score = person.action_scores[ki];
            if (action_score <= 0.0) continue;
            Detection det;
            det.score = score_mode == ScoreMode::action
                            ? action_score
                            : action_score * person.score;
            det.key = frame.key();
            det.person_idx = p;
            det.gt_frame = pred_to_gt[j];
            det.box = &person.box;
            detections.push_back(det);
          }
        }
        std::sort(detections.begin(), detections.end(),
                  [](const Detection& a, const Detection& b) {
                    if (a.score != b.score) return a.score > b.score;
                    return std::tie(a.key, a.person_idx) <
                           std::tie(b.key, b.person_idx);
                  });

        std::vector<std::vector<char>> used(gt_frames.size());
        for (std::size_t i = 0; i < gt_frames.size(); ++i)
          used[i].assign(gt_boxes[i].size(), 0);

        std::vector<bool> is_tp(detections.size(), false);
        for (std::size_t d = 0; d < detections.size(); ++d) {
          const Detection& det = detections[d];
          const auto& candidates = gt_boxes[det.gt_frame];
          auto& flags = used[det.gt_frame];
          std::size_t best = candidates.size();
          double best_iou = -1.0;
          for (std::size_t g = 0; g < candidates.size(); ++g) {
            if (flags[g]) continue;
            const double overlap = iou(*det.box, *candidates[g]);
            if (overlap > best_iou) {
              best_iou = overlap;
              best = g;
            }
          }
          if (best < candidates.size() && best_iou >= iou_threshold) {
            flags[best] = 1;
            is_tp[d] = true;
          }
        }

        out.per_class[ki] = ClassAP{k, detail::average_precision(is_tp, num_gt),
                                    num_gt};
      });

  double ap_sum = 0.0;
  std::size_t counted = 0;
  for (const ClassAP& c : out.per_class) {
    if (c.num_gt == 0) continue;
    ap_sum += c.ap;
    ++counted;
  }
  out.mean_ap = counted == 0 ? 0.0 : ap_sum / static_cast<double>(counted);
  return out;
}

}  // namespace hid
