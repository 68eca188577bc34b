#include <sstream>

#include "benchmark/benchmark.h"
#include "hid/action_metrics.hpp"
#include "hid/dataio.hpp"
#include "hid/group_metrics.hpp"
#include "hid/synth.hpp"

namespace {

hid::ScenarioSpec bench_spec() {
  hid::ScenarioSpec spec;
  spec.seed = 99;
  spec.num_frames = 200;
  spec.people_per_frame = {2, 15};
  spec.groups_per_frame = {1, 4};
  spec.box_jitter = 0.03;
  spec.membership_corruption = 0.3;
  spec.score_noise = 0.5;
  return spec;
}

void BM_EvaluateGroupAp(benchmark::State& state) {
  const auto [gt, pred] = hid::generate(bench_spec());
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        hid::evaluate_group_ap(gt.frames, pred.frames,
                               static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_EvaluateGroupAp)->Arg(1)->Arg(4);

void BM_EvaluatePersonAp(benchmark::State& state) {
  const auto [gt, pred] = hid::generate(bench_spec());
  for (auto _ : state) {
    benchmark::DoNotOptimize(hid::evaluate_person_ap(
        gt.frames, pred.frames, gt.meta.num_actions, 0.5,
        hid::ScoreMode::action, static_cast<std::size_t>(state.range(0))));
  }
}
BENCHMARK(BM_EvaluatePersonAp)->Arg(1)->Arg(4);

void BM_ParseGroundTruth(benchmark::State& state) {
  const auto [gt, pred] = hid::generate(bench_spec());
  std::ostringstream out;
  hid::write_dataset(out, gt);
  const std::string text = out.str();
  for (auto _ : state) {
    std::istringstream in(text);
    benchmark::DoNotOptimize(hid::parse_ground_truth(in));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ParseGroundTruth);

void BM_SerializePredictions(benchmark::State& state) {
  const auto [gt, pred] = hid::generate(bench_spec());
  for (auto _ : state) {
    std::ostringstream out;
    hid::write_dataset(out, pred);
    benchmark::DoNotOptimize(out);
  }
}
BENCHMARK(BM_SerializePredictions);

}  // namespace
