#include <stdexcept>
#include <random>

#include "doctest.h"
#include "hid/errors.hpp"
#include "hid/group_metrics.hpp"
#include "hid/synth.hpp"

using hid::BBox;
using hid::FrameGroundTruth;
using hid::FramePrediction;
using hid::GroupRef;

namespace {

// Disjoint boxes on a row; index i gets [i*0.1, 0, i*0.1+0.08, 0.1].
BBox slot(std::size_t i) {
  const double x = static_cast<double>(i) * 0.1;
  return {x, 0.0, x + 0.08, 0.1};
}

FrameGroundTruth make_gt(const std::string& vid, std::int64_t ts,
                         std::size_t persons,
                         std::vector<std::vector<std::size_t>> groups) {
  FrameGroundTruth f;
  f.video_id = vid;
  f.timestamp = ts;
  for (std::size_t i = 0; i < persons; ++i)
    f.persons.push_back({slot(i), {0}});
  f.groups = std::move(groups);
  return f;
}

FramePrediction make_pred(const std::string& vid, std::int64_t ts,
                          std::size_t persons,
                          std::vector<std::pair<std::vector<std::size_t>, double>>
                              groups) {
  FramePrediction f;
  f.video_id = vid;
  f.timestamp = ts;
  for (std::size_t i = 0; i < persons; ++i)
    f.persons.push_back({slot(i), 1.0, {1.0}});
  for (auto& [members, score] : groups)
    f.groups.push_back({std::move(members), score, std::nullopt});
  return f;
}

GroupRef ref_of(std::initializer_list<std::size_t> slots) {
  GroupRef g;
  for (const std::size_t s : slots) g.member_boxes.push_back(slot(s));
  return g;
}

}  // namespace

TEST_SUITE("group_metrics") {

TEST_CASE("group_iou spot values") {
  // identical member sets, U = V = R = 2
  CHECK(hid::group_iou(ref_of({0, 1}), ref_of({0, 1})) == 1.0);

  // U=3, V=2, two members matched: R/(U+V-R) = 2/3
  CHECK(hid::group_iou(ref_of({0, 1, 2}), ref_of({0, 1})) == 2.0 / 3.0);

  // fully disjoint member boxes
  CHECK(hid::group_iou(ref_of({0, 1}), ref_of({4, 5})) == 0.0);

  CHECK_THROWS_AS(hid::group_iou(GroupRef{}, ref_of({0})), std::invalid_argument);
}

TEST_CASE("group_iou is symmetric and bounded") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    GroupRef a, b;
    const auto u = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    const auto rand_box = [&] {
      const double x1 = 0.8 * u(), y1 = 0.8 * u();
      return BBox{x1, y1, x1 + 0.05 + 0.1 * u(), y1 + 0.05 + 0.1 * u()};
    };
    for (std::size_t i = 0; i < 1 + rng() % 5; ++i) a.member_boxes.push_back(rand_box());
    for (std::size_t i = 0; i < 1 + rng() % 5; ++i) b.member_boxes.push_back(rand_box());
    const double ab = hid::group_iou(a, b);
    CHECK(ab == hid::group_iou(b, a));
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
  }
}

TEST_CASE("group_iou is 1 exactly for perfect matches and drops when a member leaves") {
  CHECK(hid::group_iou(ref_of({0, 1, 2}), ref_of({0, 1, 2})) == 1.0);
  // V != U can never reach 1
  CHECK(hid::group_iou(ref_of({0, 1, 2}), ref_of({0, 1})) < 1.0);
  CHECK(hid::group_iou(ref_of({0, 1, 2}), ref_of({0, 1, 2, 3})) < 1.0);
}

TEST_CASE("perfect predictions score 1 at every threshold") {
  std::vector<FrameGroundTruth> gt{make_gt("v", 900, 4, {{0, 1}, {2, 3}}),
                                   make_gt("v", 901, 4, {{0, 1, 2, 3}})};
  std::vector<FramePrediction> pred{
      make_pred("v", 900, 4, {{{0, 1}, 1.0}, {{2, 3}, 1.0}}),
      make_pred("v", 901, 4, {{{0, 1, 2, 3}, 1.0}})};
  const hid::APResult r = hid::evaluate_group_ap(gt, pred);
  for (const double ap : r.per_threshold) CHECK(ap == 1.0);
  CHECK(r.mean == 1.0);
  CHECK(r.num_gt_groups == 3);
  CHECK(r.num_pred_groups == 3);
}

TEST_CASE("a 0.75 overlap passes thresholds up to 0.7 only") {
  // U=4 vs V=3 with 3 matches: IoU^G = 3/(7-3) = 0.75
  std::vector<FrameGroundTruth> gt{make_gt("v", 900, 4, {{0, 1, 2, 3}})};
  std::vector<FramePrediction> pred{make_pred("v", 900, 3, {{{0, 1, 2}, 1.0}})};
  const hid::APResult r = hid::evaluate_group_ap(gt, pred);
  CHECK(r.per_threshold[0] == 1.0);  // 0.5
  CHECK(r.per_threshold[1] == 1.0);  // 0.6
  CHECK(r.per_threshold[2] == 1.0);  // 0.7
  CHECK(r.per_threshold[3] == 0.0);  // 0.8
  CHECK(r.per_threshold[4] == 0.0);  // 0.9
  CHECK(r.per_threshold[5] == 0.0);  // 1.0
  CHECK(r.mean == 0.5);
}

TEST_CASE("one perfect prediction against two gt groups gives AP 0.5") {
  std::vector<FrameGroundTruth> gt{make_gt("v", 900, 4, {{0, 1}, {2, 3}})};
  std::vector<FramePrediction> pred{make_pred("v", 900, 4, {{{0, 1}, 1.0}})};
  const hid::APResult r = hid::evaluate_group_ap(gt, pred);
  for (const double ap : r.per_threshold) CHECK(ap == 0.5);
  CHECK(r.mean == 0.5);
}

TEST_CASE("per-threshold AP never increases with the threshold") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    hid::ScenarioSpec spec;
    spec.seed = seed;
    spec.num_frames = 6;
    spec.people_per_frame = {4, 8};
    spec.groups_per_frame = {1, 3};
    spec.box_jitter = 0.04;
    spec.membership_corruption = 0.5;
    spec.score_noise = 0.6;
    const auto [gt, pred] = hid::generate(spec);
    const hid::APResult r = hid::evaluate_group_ap(gt.frames, pred.frames);
    for (std::size_t t = 1; t < r.per_threshold.size(); ++t)
      CHECK(r.per_threshold[t] <= r.per_threshold[t - 1]);
  }
}

TEST_CASE("deleting a true positive strictly lowers AP at every threshold") {
  hid::ScenarioSpec spec;
  spec.seed = 5;
  spec.num_frames = 5;
  spec.people_per_frame = {4, 8};
  spec.groups_per_frame = {1, 3};
  const auto [gt, pred_full] = hid::generate(spec);
  auto pred = pred_full;
  REQUIRE(!pred.frames.empty());
  std::size_t frame_with_group = pred.frames.size();
  for (std::size_t i = 0; i < pred.frames.size(); ++i)
    if (!pred.frames[i].groups.empty()) { frame_with_group = i; break; }
  REQUIRE(frame_with_group < pred.frames.size());
  pred.frames[frame_with_group].groups.pop_back();

  const hid::APResult full = hid::evaluate_group_ap(gt.frames, pred_full.frames);
  const hid::APResult degraded = hid::evaluate_group_ap(gt.frames, pred.frames);
  for (std::size_t t = 0; t < 6; ++t) {
    CHECK(full.per_threshold[t] == 1.0);
    CHECK(degraded.per_threshold[t] < full.per_threshold[t]);
  }
}

TEST_CASE("prediction frames without ground truth raise FrameKeyMismatch") {
  std::vector<FrameGroundTruth> gt{make_gt("v", 900, 4, {{0, 1}})};
  std::vector<FramePrediction> pred{make_pred("other", 900, 4, {{{0, 1}, 1.0}})};
  CHECK_THROWS_AS(hid::evaluate_group_ap(gt, pred), hid::FrameKeyMismatch);
  try {
    hid::evaluate_group_ap(gt, pred);
  } catch (const hid::FrameKeyMismatch& e) {
    REQUIRE(e.missing_keys().size() == 1);
    CHECK(e.missing_keys()[0] == "(other, 900)");
  }
}

TEST_CASE("gt frames without predictions count toward recall") {
  std::vector<FrameGroundTruth> gt{make_gt("v", 900, 4, {{0, 1}}),
                                   make_gt("v", 901, 4, {{2, 3}})};
  std::vector<FramePrediction> pred{make_pred("v", 900, 4, {{{0, 1}, 1.0}})};
  const hid::APResult r = hid::evaluate_group_ap(gt, pred);
  CHECK(r.num_gt_groups == 2);
  for (const double ap : r.per_threshold) CHECK(ap == 0.5);
}

TEST_CASE("workers do not change the result") {
  hid::ScenarioSpec spec;
  spec.seed = 17;
  spec.num_frames = 12;
  spec.people_per_frame = {4, 10};
  spec.groups_per_frame = {1, 4};
  spec.box_jitter = 0.03;
  spec.score_noise = 0.4;
  const auto [gt, pred] = hid::generate(spec);
  const hid::APResult one = hid::evaluate_group_ap(gt.frames, pred.frames, 1);
  const hid::APResult four = hid::evaluate_group_ap(gt.frames, pred.frames, 4);
  CHECK(one == four);
}

}  // TEST_SUITE
