#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "hid/dataio.hpp"
#include "hid/errors.hpp"

namespace hid::detail {

inline std::map<FrameKey, std::size_t> index_ground_truth(
    std::span<const FrameGroundTruth> gt_frames) {
  std::map<FrameKey, std::size_t> index;
  for (std::size_t i = 0; i < gt_frames.size(); ++i) {
    const auto [it, inserted] = index.emplace(gt_frames[i].key(), i);
    if (!inserted)
      throw std::invalid_argument("duplicate ground-truth frame key " +
                                  gt_frames[i].key().str());
  }
  return index;
}

// Ground-truth frame index for every prediction frame. Prediction keys with
// no ground truth are an error; ground-truth frames without predictions are
// fine (their groups simply go unretrieved).
inline std::vector<std::size_t> align_predictions(
    const std::map<FrameKey, std::size_t>& gt_index,
    std::span<const FramePrediction> pred_frames) {
  std::vector<std::size_t> mapping;
  mapping.reserve(pred_frames.size());
  std::vector<std::string> missing;
  for (const auto& frame : pred_frames) {
    const auto it = gt_index.find(frame.key());
    if (it == gt_index.end()) {
      missing.push_back(frame.key().str());
    } else {
      mapping.push_back(it->second);
    }
  }
  if (!missing.empty()) throw FrameKeyMismatch(std::move(missing));
  return mapping;
}

}  // namespace hid::detail
