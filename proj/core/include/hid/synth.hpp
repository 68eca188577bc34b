#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "hid/dataio.hpp"
#include "hid/matrix.hpp"

namespace hid {

struct SizeRange {
  std::size_t lo = 0;
  std::size_t hi = 0;  // inclusive

  bool valid() const { return lo >= 1 && lo <= hi; }
};

/// Deterministic synthetic scenario: non-overlapping people on a jittered
/// grid, a group partition in the AVA-I regime, and predictions derived from
/// the ground truth by controlled perturbation.
struct ScenarioSpec {
  std::uint64_t seed = 1;
  std::size_t num_frames = 1;
  SizeRange people_per_frame{2, 8};
  SizeRange groups_per_frame{1, 4};
  double box_jitter = 0.0;             // sigma, normalized units
  double membership_corruption = 0.0;  // per-frame probability
  double score_noise = 0.0;
  int num_actions = kDefaultNumActions;
};

/// Generates (ground truth, predictions). Byte-deterministic for a fixed
/// seed: mt19937_64 with hand-rolled uniform draws, no std distributions.
/// Zero perturbation yields predictions identical to the ground truth.
/// Throws when the spec is invalid or asks for more non-overlapping people
/// than the layout grid can hold.
std::pair<GroundTruthDataset, PredictionDataset> generate(const ScenarioSpec& spec);

/// Exact assignment optimum by exhaustive enumeration over all injections.
/// Oracle for the Hungarian path; requires min(U,V) <= 8.
double brute_force_assignment(const Matrix& cost);

/// Exact all-points AP from a ranked true/false-positive sequence: builds the
/// precision/recall sequence pointwise and integrates the step curve.
/// Oracle for the AP path; requires the list length <= 1000.
double brute_force_ap(const std::vector<bool>& ranked_is_tp, std::size_t num_gt);

}  // namespace hid
