// Acceptance runner: executes every acceptance criterion at its stated
// tolerance and prints one PASS/FAIL line per criterion. Exits nonzero if
// any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "hid/action_metrics.hpp"
#include "hid/dataio.hpp"
#include "hid/group_metrics.hpp"
#include "hid/matching.hpp"
#include "hid/merge.hpp"
#include "hid/synth.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using hid::BBox;
using hid::Matrix;

namespace {

std::string g_cli;
fs::path g_data;
fs::path g_tmp;

struct Check {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    ok = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
  void note(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

double uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<BBox> random_boxes(std::mt19937_64& rng, std::size_t n) {
  std::vector<BBox> boxes;
  for (std::size_t i = 0; i < n; ++i) {
    const double x1 = 0.8 * uniform(rng);
    const double y1 = 0.8 * uniform(rng);
    boxes.push_back({x1, y1, x1 + 0.05 + 0.14 * uniform(rng),
                     y1 + 0.05 + 0.14 * uniform(rng)});
  }
  return boxes;
}

struct CmdResult {
  int exit_code = -1;
  std::string output;
};

CmdResult run_cli(const std::string& args) {
  const std::string cmd = g_cli + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  CmdResult result;
  if (!pipe) return result;
  char buf[8192];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) result.output.append(buf, n);
  const int rc = pclose(pipe);
  result.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return result;
}

// ---------------------------------------------------------------------------
// Independent oracle path for criterion 5: group IoU by exhaustive injection
// enumeration, ranking and greedy matching re-coded from the metric
// definition, AP integration via brute_force_ap.

double oracle_group_iou(const std::vector<BBox>& gt, const std::vector<BBox>& pred) {
  const std::size_t u = gt.size(), v = pred.size();
  double best_cost = std::numeric_limits<double>::infinity();
  std::size_t best_r = 0;
  std::vector<int> chosen;
  const std::function<void(std::size_t, std::uint64_t, double, std::size_t)> rec =
      [&](std::size_t row, std::uint64_t used, double acc, std::size_t r) {
        const std::size_t assigned = static_cast<std::size_t>(
            std::popcount(used));
        const std::size_t need = std::min(u, v) - assigned;
        if (u - row < need) return;
        if (row == u || need == 0) {
          if (acc < best_cost) {
            best_cost = acc;
            best_r = r;
          }
          return;
        }
        rec(row + 1, used, acc, r);
        for (std::size_t c = 0; c < v; ++c) {
          if (used & (std::uint64_t{1} << c)) continue;
          const double overlap = hid::iou(gt[row], pred[c]);
          const double cost = overlap >= 0.5 ? -overlap : 1e6;
          rec(row + 1, used | (std::uint64_t{1} << c), acc + cost,
              r + (overlap >= 0.5 ? 1 : 0));
        }
      };
  rec(0, 0, 0.0, 0);
  const double r = static_cast<double>(best_r);
  return r / (static_cast<double>(u) + static_cast<double>(v) - r);
}

struct OracleRanked {
  double score;
  hid::FrameKey key;
  std::size_t group_idx;
  std::size_t frame;
  std::vector<double> ious;
};

std::array<double, 6> oracle_group_ap(
    const std::vector<hid::FrameGroundTruth>& gt,
    const std::vector<hid::FramePrediction>& pred) {
  std::map<hid::FrameKey, std::size_t> index;
  for (std::size_t i = 0; i < gt.size(); ++i) index[gt[i].key()] = i;

  std::size_t num_gt = 0;
  std::vector<std::vector<std::vector<BBox>>> gt_boxes(gt.size());
  for (std::size_t i = 0; i < gt.size(); ++i) {
    for (const auto& members : gt[i].groups) {
      std::vector<BBox> boxes;
      for (const std::size_t m : members) boxes.push_back(gt[i].persons[m].box);
      gt_boxes[i].push_back(std::move(boxes));
      ++num_gt;
    }
  }

  std::vector<OracleRanked> ranked;
  for (const auto& frame : pred) {
    const std::size_t gi = index.at(frame.key());
    for (std::size_t g = 0; g < frame.groups.size(); ++g) {
      OracleRanked rec;
      rec.score = frame.groups[g].score;
      rec.key = frame.key();
      rec.group_idx = g;
      rec.frame = gi;
      std::vector<BBox> boxes;
      for (const std::size_t m : frame.groups[g].members)
        boxes.push_back(frame.persons[m].box);
      for (const auto& gt_group : gt_boxes[gi])
        rec.ious.push_back(oracle_group_iou(gt_group, boxes));
      ranked.push_back(std::move(rec));
    }
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const OracleRanked& a, const OracleRanked& b) {
              if (a.score != b.score) return a.score > b.score;
              return std::tie(a.key, a.group_idx) < std::tie(b.key, b.group_idx);
            });

  std::array<double, 6> out{};
  for (std::size_t t = 0; t < hid::kGroupIouThresholds.size(); ++t) {
    const double delta = hid::kGroupIouThresholds[t];
    std::vector<std::vector<char>> used(gt.size());
    for (std::size_t i = 0; i < gt.size(); ++i)
      used[i].assign(gt_boxes[i].size(), 0);
    std::vector<bool> tp;
    for (const auto& rec : ranked) {
      std::size_t best = rec.ious.size();
      double best_iou = -1.0;
      for (std::size_t g = 0; g < rec.ious.size(); ++g) {
        if (used[rec.frame][g]) continue;
        if (rec.ious[g] > best_iou) {
          best_iou = rec.ious[g];
          best = g;
        }
      }
      const bool hit = best < rec.ious.size() && best_iou >= delta;
      if (hit) used[rec.frame][best] = 1;
      tp.push_back(hit);
    }
    out[t] = hid::brute_force_ap(tp, num_gt);
  }
  return out;
}

std::vector<double> oracle_person_ap(
    const std::vector<hid::FrameGroundTruth>& gt,
    const std::vector<hid::FramePrediction>& pred, int num_actions) {
  std::map<hid::FrameKey, std::size_t> index;
  for (std::size_t i = 0; i < gt.size(); ++i) index[gt[i].key()] = i;

  std::vector<double> out(static_cast<std::size_t>(num_actions), -1.0);
  for (int k = 0; k < num_actions; ++k) {
    std::size_t num_gt = 0;
    std::vector<std::vector<BBox>> targets(gt.size());
    for (std::size_t i = 0; i < gt.size(); ++i)
      for (const auto& person : gt[i].persons)
        if (std::find(person.actions.begin(), person.actions.end(), k) !=
            person.actions.end()) {
          targets[i].push_back(person.box);
          ++num_gt;
        }
    if (num_gt == 0) continue;

    struct Det {
      double score;
      hid::FrameKey key;
      std::size_t person;
      std::size_t frame;
      BBox box;
    };
    std::vector<Det> dets;
    for (const auto& frame : pred) {
      const std::size_t gi = index.at(frame.key());
      for (std::size_t p = 0; p < frame.persons.size(); ++p) {
        const double s =
            frame.persons[p].action_scores[static_cast<std::size_t>(k)];
        if (s > 0.0)
          dets.push_back({s, frame.key(), p, gi, frame.persons[p].box});
      }
    }
    std::sort(dets.begin(), dets.end(), [](const Det& a, const Det& b) {
      if (a.score != b.score) return a.score > b.score;
      return std::tie(a.key, a.person) < std::tie(b.key, b.person);
    });

    std::vector<std::vector<char>> used(gt.size());
    for (std::size_t i = 0; i < gt.size(); ++i)
      used[i].assign(targets[i].size(), 0);
    std::vector<bool> tp;
    for (const auto& det : dets) {
      std::size_t best = targets[det.frame].size();
      double best_iou = -1.0;
      for (std::size_t g = 0; g < targets[det.frame].size(); ++g) {
        if (used[det.frame][g]) continue;
        const double overlap = hid::iou(det.box, targets[det.frame][g]);
        if (overlap > best_iou) {
          best_iou = overlap;
          best = g;
        }
      }
      const bool hit = best < targets[det.frame].size() && best_iou >= 0.5;
      if (hit) used[det.frame][best] = 1;
      tp.push_back(hit);
    }
    out[static_cast<std::size_t>(k)] = hid::brute_force_ap(tp, num_gt);
  }
  return out;
}

// ---------------------------------------------------------------------------

Check criterion_hungarian_optimality() {
  Check c;
  std::mt19937_64 rng(20240501);
  const auto start = std::chrono::steady_clock::now();
  int exact = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t rows = 1 + rng() % 7;
    const std::size_t cols = 1 + rng() % 7;
    Matrix cost(rows, cols);
    for (double& v : cost.data)
      v = uniform(rng) < 0.25 ? 1e6 : -uniform(rng);
    const hid::Assignment a = hid::hungarian_min_cost(cost);
    const double total = hid::assignment_cost(cost, a);
    const double oracle = hid::brute_force_assignment(cost);
    if (total == oracle) {
      ++exact;
    } else {
      c.fail("trial " + std::to_string(trial) + ": " + std::to_string(total) +
             " != " + std::to_string(oracle));
      break;
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  c.note(std::to_string(exact) + "/1000 exact");
  if (secs >= 5.0) c.fail("runtime " + std::to_string(secs) + "s >= 5s");
  return c;
}

Check criterion_group_iou_spot_values() {
  Check c;
  const auto slot = [](std::size_t i) {
    const double x = static_cast<double>(i) * 0.1;
    return BBox{x, 0.0, x + 0.08, 0.1};
  };
  hid::GroupRef a{{slot(0), slot(1)}};
  if (hid::group_iou(a, a) != 1.0) c.fail("identical groups != 1.0");

  hid::GroupRef u3{{slot(0), slot(1), slot(2)}};
  hid::GroupRef v2{{slot(0), slot(1)}};
  if (hid::group_iou(u3, v2) != 2.0 / 3.0) c.fail("U=3,V=2,R=2 != 2/3");

  hid::GroupRef other{{slot(5), slot(6)}};
  if (hid::group_iou(a, other) != 0.0) c.fail("disjoint groups != 0");
  c.note("1.0, 2/3, 0.0 exact");
  return c;
}

Check criterion_cost_semantics() {
  Check c;
  std::mt19937_64 rng(77001);
  for (int trial = 0; trial < 1000 && c.ok; ++trial) {
    const auto gt = random_boxes(rng, 1 + rng() % 8);
    const auto pred = random_boxes(rng, 1 + rng() % 8);
    const Matrix cost = hid::build_cost_matrix(gt, pred);
    for (std::size_t i = 0; i < gt.size() && c.ok; ++i)
      for (std::size_t j = 0; j < pred.size(); ++j) {
        const double overlap = hid::iou(gt[i], pred[j]);
        const double expected = overlap >= 0.5 ? -overlap : 1e6;
        if (cost.at(i, j) != expected) {
          c.fail("entry mismatch at trial " + std::to_string(trial));
          break;
        }
      }
    const hid::Assignment kept = hid::filter_matches(
        hid::hungarian_min_cost(cost), gt, pred);
    for (const auto& [r, col] : kept.pairs)
      if (cost.at(r, col) == 1e6) {
        c.fail("epsilon pair survived filtering");
        break;
      }
  }
  c.note("1000 random frames");
  return c;
}

Check criterion_perfect_identity() {
  Check c;
  for (std::uint64_t seed : {1ULL, 22ULL, 333ULL}) {
    hid::ScenarioSpec spec;
    spec.seed = seed;
    spec.num_frames = 8;
    spec.people_per_frame = {2, 10};
    spec.groups_per_frame = {1, 4};
    const auto [gt, pred] = hid::generate(spec);
    const auto group = hid::evaluate_group_ap(gt.frames, pred.frames);
    for (const double ap : group.per_threshold)
      if (ap != 1.0) c.fail("seed " + std::to_string(seed) + ": AP^G != 1");
    if (group.mean != 1.0) c.fail("mean != 1");
    const auto person =
        hid::evaluate_person_ap(gt.frames, pred.frames, gt.meta.num_actions);
    if (person.mean_ap != 1.0) c.fail("mAP != 1");
  }
  c.note("3 zero-perturbation scenarios, exact 1.0");
  return c;
}

Check criterion_ap_oracle_equivalence() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  double max_err = 0.0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    hid::ScenarioSpec spec;
    spec.seed = 9000 + s;
    spec.num_frames = 1 + s % 20;
    spec.people_per_frame = {2, 8};
    spec.groups_per_frame = {1, 4};
    spec.box_jitter = 0.02 * static_cast<double>(s % 4);
    spec.membership_corruption = (s % 3 == 0) ? 0.5 : 0.0;
    spec.score_noise = 0.1 * static_cast<double>(s % 7);
    const auto [gt, pred] = hid::generate(spec);

    const auto impl = hid::evaluate_group_ap(gt.frames, pred.frames);
    const auto oracle = oracle_group_ap(gt.frames, pred.frames);
    for (std::size_t t = 0; t < 6; ++t) {
      const double err = std::fabs(impl.per_threshold[t] - oracle[t]);
      max_err = std::max(max_err, err);
      if (err > 1e-12) {
        c.fail("AP^G mismatch at seed " + std::to_string(spec.seed) +
               " delta index " + std::to_string(t) + " err " +
               std::to_string(err));
        return c;
      }
    }

    const auto impl_person =
        hid::evaluate_person_ap(gt.frames, pred.frames, gt.meta.num_actions);
    const auto oracle_person =
        oracle_person_ap(gt.frames, pred.frames, gt.meta.num_actions);
    for (std::size_t k = 0; k < oracle_person.size(); ++k) {
      if (oracle_person[k] < 0.0) continue;  // class absent from gt
      const double err = std::fabs(impl_person.per_class[k].ap - oracle_person[k]);
      max_err = std::max(max_err, err);
      if (err > 1e-12) {
        c.fail("class AP mismatch at seed " + std::to_string(spec.seed) +
               " class " + std::to_string(k));
        return c;
      }
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  char buf[96];
  std::snprintf(buf, sizeof(buf), "200 scenarios, max |err| %.2e, %.1fs",
                max_err, secs);
  c.note(buf);
  if (secs >= 10.0) c.fail("runtime >= 10s");
  return c;
}

Check criterion_blend_endpoints() {
  Check c;
  std::mt19937_64 rng(606);
  for (int trial = 0; trial < 50 && c.ok; ++trial) {
    const std::size_t u = 1 + rng() % 6, v = 1 + rng() % 6;
    Matrix sp(u, v), se(u, v);
    for (double& x : sp.data) x = uniform(rng);
    for (double& x : se.data) x = 2.0 * uniform(rng) - 1.0;
    const Matrix at0 = hid::blend(sp, se, 0.0);
    const Matrix at1 = hid::blend(sp, se, 1.0);
    for (std::size_t i = 0; i < se.data.size(); ++i) {
      if (std::bit_cast<std::uint64_t>(at0.data[i]) !=
          std::bit_cast<std::uint64_t>(se.data[i]))
        c.fail("alpha=0 not bit-exact");
      if (std::bit_cast<std::uint64_t>(at1.data[i]) !=
          std::bit_cast<std::uint64_t>(sp.data[i]))
        c.fail("alpha=1 not bit-exact");
    }
  }
  Matrix sp(1, 1), se(1, 1);
  sp.at(0, 0) = 1.0;
  se.at(0, 0) = 0.5;
  if (hid::blend(sp, se, 0.3).at(0, 0) != 0.65)
    c.fail("0.3 * (1.0, 0.5) != 0.65 exactly");
  c.note("endpoints bit-exact, 0.65 exact");
  return c;
}

Check criterion_partition_safety() {
  Check c;
  std::mt19937_64 rng(404040);
  std::size_t violations = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t u = 1 + rng() % 20;
    const std::size_t v = 1 + rng() % 8;
    Matrix theta(u, v);
    for (double& x : theta.data) x = 2.0 * uniform(rng) - 1.0;
    const auto assignment = hid::assign_groups(theta);
    if (assignment.size() != u) ++violations;
    std::vector<std::size_t> seen(u, 0);
    std::vector<std::vector<std::size_t>> groups(v);
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      if (assignment[i] >= v) ++violations;
      groups[assignment[i]].push_back(i);
      ++seen[i];
    }
    std::size_t total = 0;
    for (const auto& g : groups) total += g.size();
    if (total != u) ++violations;
    for (const std::size_t count : seen)
      if (count != 1) ++violations;
  }
  if (violations != 0)
    c.fail(std::to_string(violations) + " partition violations");
  c.note("10000 matrices, zero violations");
  return c;
}

Check criterion_greedy_baseline() {
  Check c;
  Matrix chain(3, 3, 0.0);
  chain.at(0, 1) = chain.at(1, 0) = 0.7;
  chain.at(1, 2) = chain.at(2, 1) = 0.7;
  chain.at(0, 2) = chain.at(2, 0) = 0.1;
  const auto closed = hid::greedy_pairwise_grouping(chain, 0.6);
  if (closed != std::vector<std::vector<std::size_t>>{{0, 1, 2}})
    c.fail("chain closure failed");

  std::mt19937_64 rng(515151);
  for (int trial = 0; trial < 1000 && c.ok; ++trial) {
    const std::size_t n = 2 + rng() % 9;
    Matrix scores(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        scores.at(i, j) = scores.at(j, i) = uniform(rng);
    const double lo = 0.8 * uniform(rng);
    const double hi = lo + (1.0 - lo) * uniform(rng);
    const auto coarse = hid::greedy_pairwise_grouping(scores, lo);
    const auto fine = hid::greedy_pairwise_grouping(scores, hi);
    std::vector<std::size_t> coarse_of(n);
    for (std::size_t g = 0; g < coarse.size(); ++g)
      for (const std::size_t m : coarse[g]) coarse_of[m] = g;
    for (const auto& component : fine)
      for (const std::size_t m : component)
        if (coarse_of[m] != coarse_of[component.front()]) {
          c.fail("raising the threshold merged separated components");
          break;
        }
  }
  c.note("chain closure + 1000 monotonicity trials");
  return c;
}

Check criterion_monotonic_degradation() {
  Check c;

  hid::ScenarioSpec perfect;
  perfect.seed = 42;
  perfect.num_frames = 8;
  perfect.people_per_frame = {4, 10};
  perfect.groups_per_frame = {1, 3};
  const auto [gt, pred] = hid::generate(perfect);
  auto degraded = pred;
  for (auto& frame : degraded.frames) {
    if (!frame.groups.empty()) {
      frame.groups.pop_back();
      break;
    }
  }
  const auto full = hid::evaluate_group_ap(gt.frames, pred.frames);
  const auto less = hid::evaluate_group_ap(gt.frames, degraded.frames);
  for (std::size_t t = 0; t < 6; ++t)
    if (!(less.per_threshold[t] < full.per_threshold[t]))
      c.fail("AP^G did not strictly drop at delta index " + std::to_string(t));

  std::string values;
  double previous = 2.0;
  for (const double sigma : {0.0, 0.02, 0.05, 0.1}) {
    hid::ScenarioSpec spec;
    spec.seed = 1000;
    spec.num_frames = 80;
    spec.people_per_frame = {4, 10};
    spec.groups_per_frame = {1, 3};
    spec.box_jitter = sigma;
    const auto [jgt, jpred] = hid::generate(spec);
    const auto result = hid::evaluate_group_ap(jgt.frames, jpred.frames);
    const double ap50 = result.per_threshold[0];
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%s%.4f", values.empty() ? "" : ", ", ap50);
    values += buf;
    if (ap50 > previous) c.fail("AP^G_50 increased under heavier jitter");
    previous = ap50;
  }
  c.note("AP^G_50 over sigma {0, 0.02, 0.05, 0.1}: " + values);
  return c;
}

Check criterion_throughput() {
  Check c;
  hid::ScenarioSpec spec;
  spec.seed = 31337;
  spec.num_frames = 10000;
  spec.people_per_frame = {2, 15};
  spec.groups_per_frame = {1, 4};
  spec.box_jitter = 0.03;
  spec.membership_corruption = 0.3;
  spec.score_noise = 0.5;
  const auto [gt, pred] = hid::generate(spec);

  fs::create_directories(g_tmp);
  const fs::path gt_path = g_tmp / "throughput_gt.jsonl";
  const fs::path pred_path = g_tmp / "throughput_pred.jsonl";
  {
    std::ofstream out(gt_path);
    hid::write_dataset(out, gt);
  }
  {
    std::ofstream out(pred_path);
    hid::write_dataset(out, pred);
  }

  const auto start = std::chrono::steady_clock::now();
  const CmdResult one = run_cli("evaluate " + gt_path.string() + " " +
                                pred_path.string() + " --workers 1");
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (one.exit_code != 0) c.fail("evaluate exited " + std::to_string(one.exit_code));
  if (secs >= 30.0) c.fail("single-worker runtime " + std::to_string(secs) + "s >= 30s");

  const CmdResult four = run_cli("evaluate " + gt_path.string() + " " +
                                 pred_path.string() + " --workers 4");
  if (four.exit_code != 0) c.fail("evaluate --workers 4 failed");
  json a = json::parse(one.output, nullptr, false);
  json b = json::parse(four.output, nullptr, false);
  if (a.is_discarded() || b.is_discarded()) {
    c.fail("report not parseable");
  } else {
    a["config"].erase("workers");
    b["config"].erase("workers");
    if (a != b) c.fail("reports differ between 1 and 4 workers");
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "10000 frames in %.1fs single-worker", secs);
  c.note(buf);
  return c;
}

Check criterion_roundtrip_and_validation() {
  Check c;
  hid::ScenarioSpec spec;
  spec.seed = 246810;
  spec.num_frames = 1000;
  spec.people_per_frame = {2, 12};
  spec.groups_per_frame = {1, 4};
  spec.box_jitter = 0.05;
  spec.membership_corruption = 0.4;
  spec.score_noise = 0.7;
  const auto [gt, pred] = hid::generate(spec);

  std::ostringstream gt_text, pred_text;
  hid::write_dataset(gt_text, gt);
  hid::write_dataset(pred_text, pred);
  std::istringstream gt_in(gt_text.str()), pred_in(pred_text.str());
  const auto gt2 = hid::parse_ground_truth(gt_in);
  const auto pred2 = hid::parse_predictions(pred_in);
  if (gt2.frames != gt.frames) c.fail("ground-truth round trip changed frames");
  if (pred2.frames != pred.frames) c.fail("prediction round trip changed frames");
  std::ostringstream gt_text2;
  hid::write_dataset(gt_text2, gt2);
  if (gt_text2.str() != gt_text.str()) c.fail("re-serialization not byte-stable");

  const struct {
    const char* file;
    const char* rule;
  } fixtures[] = {
      {"invalid_overlapping_groups.jsonl", "groups_overlap"},
      {"invalid_singleton_group.jsonl", "group_too_small"},
      {"invalid_bad_index.jsonl", "index_out_of_range"},
  };
  for (const auto& fixture : fixtures) {
    const CmdResult r = run_cli("validate " + (g_data / fixture.file).string());
    if (r.exit_code != 1) {
      c.fail(std::string(fixture.file) + " exited " +
             std::to_string(r.exit_code) + " != 1");
      continue;
    }
    const json report = json::parse(r.output, nullptr, false);
    if (report.is_discarded() ||
        report["violations"].empty() ||
        report["violations"][0]["rule"] != fixture.rule)
      c.fail(std::string(fixture.file) + " did not report " + fixture.rule);
  }

  const CmdResult strict = run_cli(
      "evaluate " + (g_data / "invalid_overlapping_groups.jsonl").string() +
      " /dev/null");
  if (strict.exit_code != 2)
    c.fail("evaluate on invalid gt exited " + std::to_string(strict.exit_code) +
           " != 2");
  c.note("1000-frame round trip + 3 fixtures");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--cli") g_cli = argv[i + 1];
    else if (flag == "--data") g_data = argv[i + 1];
    else if (flag == "--tmp") g_tmp = argv[i + 1];
  }
  if (g_cli.empty() || g_data.empty() || g_tmp.empty()) {
    std::cerr << "usage: hid_acceptance --cli <hid binary> --data <fixtures dir> "
                 "--tmp <scratch dir>\n";
    return 2;
  }

  const struct {
    const char* name;
    Check (*fn)();
  } criteria[] = {
      {"hungarian-optimality", criterion_hungarian_optimality},
      {"group-iou-spot-values", criterion_group_iou_spot_values},
      {"cost-matrix-semantics", criterion_cost_semantics},
      {"perfect-prediction-identity", criterion_perfect_identity},
      {"ap-oracle-equivalence", criterion_ap_oracle_equivalence},
      {"blend-endpoints", criterion_blend_endpoints},
      {"partition-safety", criterion_partition_safety},
      {"greedy-baseline-semantics", criterion_greedy_baseline},
      {"monotonic-degradation", criterion_monotonic_degradation},
      {"throughput", criterion_throughput},
      {"roundtrip-and-validation", criterion_roundtrip_and_validation},
  };

  int failures = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Check result;
    try {
      result = fn();
    } catch (const std::exception& e) {
      result.fail(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] C%02d %s: %s (%.2fs)\n", result.ok ? "PASS" : "FAIL",
                index, name, result.detail.c_str(), secs);
    std::fflush(stdout);
    if (!result.ok) ++failures;
  }
  if (failures > 0) {
    std::printf("%d of %d criteria failed\n", failures,
                static_cast<int>(std::size(criteria)));
    return 1;
  }
  std::printf("all %d criteria passed\n", static_cast<int>(std::size(criteria)));
  return 0;
}
