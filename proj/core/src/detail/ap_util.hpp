#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace hid::detail {

// All-points average precision over a ranked TP/FP sequence: area under the
// interpolated precision envelope max_{k' >= k} p_{k'}. The recall step per
// true positive is constant, so the sum of envelope values is divided by
// num_gt once at the end; a perfect ranking then yields exactly 1.0.
inline double average_precision(const std::vector<bool>& is_tp,
                                std::size_t num_gt) {
  if (num_gt == 0 || is_tp.empty()) return 0.0;
  const std::size_t n = is_tp.size();
  std::vector<double> precision(n);
  std::size_t tp = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (is_tp[k]) ++tp;
    precision[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
  }
  for (std::size_t k = n - 1; k-- > 0;)
    precision[k] = std::max(precision[k], precision[k + 1]);
  double envelope_sum = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    if (is_tp[k]) envelope_sum += precision[k];
  return envelope_sum / static_cast<double>(num_gt);
}

}  // namespace hid::detail
