#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "hid/geometry.hpp"
#include "hid/matrix.hpp"

namespace hid {

/// Brancher constant for pairs below the IoU gate. Any value exceeding every
/// achievable -IoU works because such pairs are removed by filter_matches;
/// 1e6 keeps the matrix well conditioned for the floating-point solver.
inline constexpr double kCostEpsilon = 1e6;

/// One-to-one row/col pairing. pairs are sorted by row, then col.
struct Assignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  std::size_t size() const { return pairs.size(); }
  bool operator==(const Assignment&) const = default;
};

/// Total cost of an assignment, summed in pair-list order.
double assignment_cost(const Matrix& cost, const Assignment& assignment);

/// Cost matrix between two box sets: -IoU where IoU >= iou_threshold
/// (inclusive), epsilon otherwise. Throws std::invalid_argument on an empty
/// box set or non-positive epsilon.
CostMatrix build_cost_matrix(std::span<const BBox> gt_boxes,
                             std::span<const BBox> pred_boxes,
                             double epsilon = kCostEpsilon,
                             double iou_threshold = 0.5);

/// Minimum-cost bipartite assignment of size min(rows, cols) over a finite
/// cost matrix. Rectangular matrices are handled natively. Among equal-cost
/// optima the lexicographically smallest pair list is returned, so results
/// are deterministic across platforms.
Assignment hungarian_min_cost(const Matrix& cost);

/// Drops pairs whose box IoU falls below min_iou. The survivor count R feeds
/// the group-level IoU.
Assignment filter_matches(const Assignment& assignment,
                          std::span<const BBox> gt_boxes,
                          std::span<const BBox> pred_boxes,
                          double min_iou = 0.5);

}  // namespace hid
