#include "hid/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>

#include "hid/geometry.hpp"

namespace hid {
namespace {

// People are laid out on a k x k grid with one box per cell, so ground-truth
// boxes never overlap. 15 x 15 bounds the crowd a frame can hold.
constexpr std::size_t kMaxPeoplePerFrame = 225;
constexpr std::size_t kMaxGroupSize = 13;  // AVA-I regime
constexpr std::size_t kFramesPerVideo = 25;
constexpr std::int64_t kTimestampBase = 900;

// mt19937_64 with hand-rolled draws; std::uniform_* distributions are not
// bit-portable across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::uint64_t below(std::uint64_t n) {  // [0, n), multiply-shift
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(engine_()) * n) >> 64);
  }
  std::size_t in_range(const SizeRange& r) {
    return r.lo + static_cast<std::size_t>(below(r.hi - r.lo + 1));
  }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

std::string video_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "synth_%04zu", index);
  return buf;
}

BBox jitter_box(const BBox& box, double sigma, Rng& rng) {
  if (sigma == 0.0) return box;
  const double dx = rng.uniform(-sigma, sigma);
  const double dy = rng.uniform(-sigma, sigma);
  const double sw = 1.0 + rng.uniform(-sigma, sigma);
  const double sh = 1.0 + rng.uniform(-sigma, sigma);
  const double cx = 0.5 * (box.x1 + box.x2) + dx;
  const double cy = 0.5 * (box.y1 + box.y2) + dy;
  const double hw = std::max(5e-4, 0.5 * box.width() * sw);
  const double hh = std::max(5e-4, 0.5 * box.height() * sh);
  BBox out{cx - hw, cy - hh, cx + hw, cy + hh};
  out.x1 = std::clamp(out.x1, 0.0, 1.0 - 1e-3);
  out.y1 = std::clamp(out.y1, 0.0, 1.0 - 1e-3);
  out.x2 = std::clamp(out.x2, out.x1 + 1e-3, 1.0);
  out.y2 = std::clamp(out.y2, out.y1 + 1e-3, 1.0);
  return out;
}

std::vector<int> draw_actions(Rng& rng, int num_actions, std::size_t count) {
  std::vector<int> actions;
  count = std::min<std::size_t>(count, static_cast<std::size_t>(num_actions));
  while (actions.size() < count) {
    const int id = static_cast<int>(rng.below(static_cast<std::uint64_t>(num_actions)));
    if (std::find(actions.begin(), actions.end(), id) == actions.end())
      actions.push_back(id);
  }
  std::sort(actions.begin(), actions.end());
  return actions;
}

void validate_spec(const ScenarioSpec& spec) {
  if (!spec.people_per_frame.valid() || !spec.groups_per_frame.valid())
    throw std::invalid_argument("generate: empty people or groups range");
  if (spec.people_per_frame.hi > kMaxPeoplePerFrame)
    throw std::invalid_argument(
        "generate: too many non-overlapping people requested (max " +
        std::to_string(kMaxPeoplePerFrame) + ")");
  const auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(spec.box_jitter) || !unit(spec.membership_corruption) ||
      !unit(spec.score_noise))
    throw std::invalid_argument("generate: rates must lie in [0,1]");
  if (spec.num_actions <= 0)
    throw std::invalid_argument("generate: num_actions must be positive");
}

}  // namespace

std::pair<GroundTruthDataset, PredictionDataset> generate(const ScenarioSpec& spec) {
  validate_spec(spec);
  Rng rng(spec.seed);

  GroundTruthDataset gt;
  PredictionDataset pred;
  gt.meta.num_actions = spec.num_actions;
  pred.meta.num_actions = spec.num_actions;

  for (std::size_t f = 0; f < spec.num_frames; ++f) {
    FrameGroundTruth frame;
    frame.video_id = video_name(f / kFramesPerVideo);
    frame.timestamp = kTimestampBase + static_cast<std::int64_t>(f % kFramesPerVideo);

    const std::size_t people = rng.in_range(spec.people_per_frame);
    const std::size_t grid = static_cast<std::size_t>(
        std::ceil(std::sqrt(static_cast<double>(people))));
    std::vector<std::size_t> cells(grid * grid);
    for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = i;
    rng.shuffle(cells);

    const double cell = 1.0 / static_cast<double>(grid);
    for (std::size_t p = 0; p < people; ++p) {
      const std::size_t cx = cells[p] % grid;
      const std::size_t cy = cells[p] / grid;
      const double w = cell * (0.55 + 0.15 * rng.uniform());
      const double h = cell * (0.55 + 0.15 * rng.uniform());
      const double ox = rng.uniform() * (cell - w);
      const double oy = rng.uniform() * (cell - h);
      PersonGT person;
      person.box = {static_cast<double>(cx) * cell + ox,
                    static_cast<double>(cy) * cell + oy,
                    static_cast<double>(cx) * cell + ox + w,
                    static_cast<double>(cy) * cell + oy + h};
      frame.persons.push_back(std::move(person));
    }

    // Partition: between 2*G and all people end up grouped, sizes >= 2.
    const std::size_t groups_wanted = rng.in_range(spec.groups_per_frame);
    const std::size_t num_groups = std::min(groups_wanted, people / 2);
    if (num_groups > 0) {
      std::vector<std::size_t> sizes(num_groups, 2);
      std::size_t grouped = 2 * num_groups;
      const std::size_t target =
          grouped + static_cast<std::size_t>(rng.below(people - grouped + 1));
      while (grouped < target) {
        const std::size_t g = static_cast<std::size_t>(rng.below(num_groups));
        if (sizes[g] >= kMaxGroupSize) {
          if (*std::min_element(sizes.begin(), sizes.end()) >= kMaxGroupSize) break;
          continue;
        }
        ++sizes[g];
        ++grouped;
      }
      std::vector<std::size_t> order(people);
      for (std::size_t i = 0; i < people; ++i) order[i] = i;
      rng.shuffle(order);
      std::size_t cursor = 0;
      for (std::size_t g = 0; g < num_groups; ++g) {
        std::vector<std::size_t> members(order.begin() + cursor,
                                         order.begin() + cursor + sizes[g]);
        std::sort(members.begin(), members.end());
        frame.groups.push_back(std::move(members));
        cursor += sizes[g];
      }
      std::sort(frame.groups.begin(), frame.groups.end());
    }

    // Grouped people always carry actions; loners may have none.
    std::vector<char> grouped_flag(frame.persons.size(), 0);
    for (const auto& g : frame.groups)
      for (const std::size_t m : g) grouped_flag[m] = 1;
    for (std::size_t p = 0; p < frame.persons.size(); ++p) {
      if (grouped_flag[p]) {
        frame.persons[p].actions =
            draw_actions(rng, spec.num_actions, 1 + rng.below(3));
      } else if (rng.uniform() < 0.5) {
        frame.persons[p].actions =
            draw_actions(rng, spec.num_actions, 1 + rng.below(2));
      }
    }

    // Prediction: perturbed copy of the ground truth.
    FramePrediction pframe;
    pframe.video_id = frame.video_id;
    pframe.timestamp = frame.timestamp;
    for (const auto& person : frame.persons) {
      PersonPrediction pp;
      pp.box = jitter_box(person.box, spec.box_jitter, rng);
      pp.score = spec.score_noise == 0.0
                     ? 1.0
                     : 1.0 - 0.5 * spec.score_noise * rng.uniform();
      pp.action_scores.assign(static_cast<std::size_t>(spec.num_actions), 0.0);
      for (const int a : person.actions)
        pp.action_scores[static_cast<std::size_t>(a)] =
            spec.score_noise == 0.0
                ? 1.0
                : 1.0 - 0.5 * spec.score_noise * rng.uniform();
      if (spec.score_noise > 0.0) {
        for (double& s : pp.action_scores)
          if (s == 0.0 && rng.uniform() < 0.3)
            s = 0.3 * spec.score_noise * rng.uniform();
      }
      pframe.persons.push_back(std::move(pp));
    }

    std::vector<std::vector<std::size_t>> memberships = frame.groups;
    if (spec.membership_corruption > 0.0 && !memberships.empty() &&
        rng.uniform() < spec.membership_corruption) {
      if (memberships.size() >= 2) {
        const std::size_t src = static_cast<std::size_t>(rng.below(memberships.size()));
        std::size_t dst = static_cast<std::size_t>(rng.below(memberships.size() - 1));
        if (dst >= src) ++dst;
        auto& from = memberships[src];
        auto& to = memberships[dst];
        const std::size_t mi = static_cast<std::size_t>(rng.below(from.size()));
        to.push_back(from[mi]);
        std::sort(to.begin(), to.end());
        from.erase(from.begin() + static_cast<std::ptrdiff_t>(mi));
      } else {
        auto& only = memberships.front();
        const std::size_t mi = static_cast<std::size_t>(rng.below(only.size()));
        only.erase(only.begin() + static_cast<std::ptrdiff_t>(mi));
      }
    }
    for (const auto& members : memberships) {
      if (members.empty()) continue;
      GroupPrediction pg;
      pg.members = members;
      pg.score = spec.score_noise == 0.0
                     ? 1.0
                     : 1.0 - 0.5 * spec.score_noise * rng.uniform();
      std::vector<BBox> boxes;
      boxes.reserve(members.size());
      for (const std::size_t m : members) boxes.push_back(pframe.persons[m].box);
      pg.box = enclosing_box(boxes);
      pframe.groups.push_back(std::move(pg));
    }

    gt.frames.push_back(std::move(frame));
    pred.frames.push_back(std::move(pframe));
  }
  return {std::move(gt), std::move(pred)};
}

double brute_force_assignment(const Matrix& cost) {
  if (cost.rows == 0 || cost.cols == 0) return 0.0;
  if (std::min(cost.rows, cost.cols) > 8)
    throw std::invalid_argument("brute_force_assignment: size over limit (min(U,V) > 8)");
  if (cost.cols > 63)
    throw std::invalid_argument("brute_force_assignment: too many columns");

  const std::size_t need_total = std::min(cost.rows, cost.cols);
  double best = std::numeric_limits<double>::infinity();
  // Recurse over rows in ascending order so the accumulated sum is built in
  // the same order as assignment_cost over a row-sorted pair list.
  const auto recurse = [&](auto&& self, std::size_t row, std::size_t need,
                           std::uint64_t used, double acc) -> void {
    if (need == 0) {
      best = std::min(best, acc);
      return;
    }
    if (cost.rows - row < need) return;
    self(self, row + 1, need, used, acc);  // leave this row unassigned
    for (std::size_t c = 0; c < cost.cols; ++c) {
      if (used & (std::uint64_t{1} << c)) continue;
      self(self, row + 1, need - 1, used | (std::uint64_t{1} << c),
           acc + cost.at(row, c));
    }
  };
  recurse(recurse, 0, need_total, 0, 0.0);
  return best;
}

double brute_force_ap(const std::vector<bool>& ranked_is_tp, std::size_t num_gt) {
  if (ranked_is_tp.size() > 1000)
    throw std::invalid_argument("brute_force_ap: ranked list over limit (1000)");
  if (num_gt == 0) return 0.0;

  const std::size_t n = ranked_is_tp.size();
  std::vector<double> precision(n), recall(n);
  std::size_t tp = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (ranked_is_tp[k]) ++tp;
    precision[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
    recall[k] = static_cast<double>(tp) / static_cast<double>(num_gt);
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!ranked_is_tp[k]) continue;
    double peak = 0.0;  // best precision at or beyond this recall level
    for (std::size_t j = k; j < n; ++j) peak = std::max(peak, precision[j]);
    ap += (recall[k] - prev_recall) * peak;
    prev_recall = recall[k];
  }
  return ap;
}

}  // namespace hid
