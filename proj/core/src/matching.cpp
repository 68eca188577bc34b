#include "hid/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hid {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Margin for recognizing an optimal continuation when re-solving
// subproblems during tie canonicalization. Covers accumulated rounding of
// sums over matrix entries (|entry| <= kCostEpsilon, <= ~100 terms) while
// staying far below any meaningful cost gap.
constexpr double kTieEps = 1e-6;

// Shortest-augmenting-path assignment on a square matrix (row-major, n x n).
// Returns row -> col.
std::vector<int> jv_square(const std::vector<double>& cost, int n) {
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<double> minv(n + 1);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = 0;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

// Optimal value of the rectangular problem restricted to the given rows and
// cols of m: min(|rows|, |cols|) one-to-one pairs of minimum total cost.
// Rectangles are zero-padded to square; dummy cells model "row/col unused".
double optimal_value(const Matrix& m, std::span<const std::size_t> rows,
                     std::span<const std::size_t> cols) {
  if (rows.empty() || cols.empty()) return 0.0;
  const int n = static_cast<int>(std::max(rows.size(), cols.size()));
  std::vector<double> padded(static_cast<std::size_t>(n) * n, 0.0);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      padded[i * n + j] = m.at(rows[i], cols[j]);
  const std::vector<int> r2c = jv_square(padded, n);
  double total = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const int j = r2c[i];
    if (j >= 0 && j < static_cast<int>(cols.size()))
      total += m.at(rows[i], cols[static_cast<std::size_t>(j)]);
  }
  return total;
}

}  // namespace

double assignment_cost(const Matrix& cost, const Assignment& assignment) {
  double total = 0.0;
  for (const auto& [r, c] : assignment.pairs) total += cost.at(r, c);
  return total;
}

CostMatrix build_cost_matrix(std::span<const BBox> gt_boxes,
                             std::span<const BBox> pred_boxes, double epsilon,
                             double iou_threshold) {
  if (gt_boxes.empty() || pred_boxes.empty())
    throw std::invalid_argument("build_cost_matrix: empty box set");
  if (!(epsilon > 0.0))
    throw std::invalid_argument("build_cost_matrix: epsilon must be positive");
  CostMatrix cost(gt_boxes.size(), pred_boxes.size());
  for (std::size_t i = 0; i < gt_boxes.size(); ++i) {
    for (std::size_t j = 0; j < pred_boxes.size(); ++j) {
      const double overlap = iou(gt_boxes[i], pred_boxes[j]);
      cost.at(i, j) = overlap >= iou_threshold ? -overlap : epsilon;
    }
  }
  return cost;
}

Assignment hungarian_min_cost(const Matrix& cost) {
  if (cost.rows == 0 || cost.cols == 0) return {};
  for (const double v : cost.data)
    if (!std::isfinite(v))
      throw std::invalid_argument("hungarian_min_cost: non-finite cost entry");

  std::vector<std::size_t> all_rows(cost.rows), avail_cols(cost.cols);
  std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});
  std::iota(avail_cols.begin(), avail_cols.end(), std::size_t{0});

  double remaining = optimal_value(cost, all_rows, avail_cols);
  std::size_t need = std::min(cost.rows, cost.cols);

  // Re-solve completions row by row, smallest column first, so that equal-cost
  // optima resolve to the lexicographically smallest pair list.
  Assignment out;
  out.pairs.reserve(need);
  for (std::size_t r = 0; r < cost.rows && need > 0; ++r) {
    const std::span<const std::size_t> tail(all_rows.data() + r + 1,
                                            cost.rows - r - 1);
    const bool can_skip = tail.size() >= need;

    std::size_t best_ci = avail_cols.size();
    double best_via = kInf;
    double best_sub = 0.0;
    bool chosen = false;
    std::vector<std::size_t> reduced(avail_cols.size() - 1);
    for (std::size_t ci = 0; ci < avail_cols.size() && !chosen; ++ci) {
      reduced.assign(avail_cols.begin(), avail_cols.end());
      reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(ci));
      const double sub = need > 1 ? optimal_value(cost, tail, reduced) : 0.0;
      const double via = cost.at(r, avail_cols[ci]) + sub;
      if (via <= remaining + kTieEps) {
        best_ci = ci;
        best_sub = sub;
        chosen = true;
      } else if (via < best_via) {
        best_via = via;
        best_ci = ci;
        best_sub = sub;
      }
    }
    if (!chosen && can_skip) {
      const double sub = optimal_value(cost, tail, avail_cols);
      if (sub <= remaining + kTieEps) {
        remaining = sub;
        continue;
      }
      if (sub < best_via) {
        // Degenerate float case: skipping beats every assignment of row r.
        remaining = sub;
        continue;
      }
    }
    out.pairs.emplace_back(r, avail_cols[best_ci]);
    avail_cols.erase(avail_cols.begin() + static_cast<std::ptrdiff_t>(best_ci));
    remaining = best_sub;
    --need;
  }
  return out;
}

Assignment filter_matches(const Assignment& assignment,
                          std::span<const BBox> gt_boxes,
                          std::span<const BBox> pred_boxes, double min_iou) {
  Assignment out;
  for (const auto& [r, c] : assignment.pairs) {
    if (r >= gt_boxes.size() || c >= pred_boxes.size())
      throw std::invalid_argument("filter_matches: pair index out of range");
    if (iou(gt_boxes[r], pred_boxes[c]) >= min_iou) out.pairs.emplace_back(r, c);
  }
  return out;
}

}  // namespace hid
