#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "hid/geometry.hpp"
#include "hid/group_metrics.hpp"
#include "hid/matching.hpp"

namespace {

double uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<hid::BBox> random_boxes(std::mt19937_64& rng, std::size_t n) {
  std::vector<hid::BBox> boxes;
  for (std::size_t i = 0; i < n; ++i) {
    const double x1 = 0.8 * uniform(rng);
    const double y1 = 0.8 * uniform(rng);
    boxes.push_back({x1, y1, x1 + 0.05 + 0.14 * uniform(rng),
                     y1 + 0.05 + 0.14 * uniform(rng)});
  }
  return boxes;
}

hid::Matrix random_cost(std::mt19937_64& rng, std::size_t n) {
  hid::Matrix m(n, n);
  for (double& v : m.data) v = uniform(rng) < 0.25 ? 1e6 : -uniform(rng);
  return m;
}

void BM_Iou(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const auto boxes = random_boxes(rng, 64);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hid::iou(boxes[i % 64], boxes[(i + 17) % 64]));
    ++i;
  }
}
BENCHMARK(BM_Iou);

void BM_BuildCostMatrix(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const auto gt = random_boxes(rng, static_cast<std::size_t>(state.range(0)));
  const auto pred = random_boxes(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(hid::build_cost_matrix(gt, pred));
}
BENCHMARK(BM_BuildCostMatrix)->Arg(4)->Arg(8)->Arg(16);

void BM_Hungarian(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const hid::Matrix cost = random_cost(rng, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state)
    benchmark::DoNotOptimize(hid::hungarian_min_cost(cost));
}
BENCHMARK(BM_Hungarian)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void BM_GroupIou(benchmark::State& state) {
  std::mt19937_64 rng(4);
  hid::GroupRef a{random_boxes(rng, static_cast<std::size_t>(state.range(0)))};
  hid::GroupRef b = a;
  for (auto& box : b.member_boxes) {
    box.x1 += 0.01;
    box.x2 += 0.01;
  }
  for (auto _ : state) benchmark::DoNotOptimize(hid::group_iou(a, b));
}
BENCHMARK(BM_GroupIou)->Arg(2)->Arg(4)->Arg(8)->Arg(13);

}  // namespace
