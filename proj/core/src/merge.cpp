#include "hid/merge.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace hid {
namespace {

const std::vector<double>& require_embedding(
    const std::optional<std::vector<double>>& e) {
  if (!e.has_value() || e->empty())
    throw std::invalid_argument("semantic merging requires embeddings");
  return *e;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Union-find with path halving.
struct DisjointSet {
  std::vector<std::size_t> parent;

  explicit DisjointSet(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

SimilarityMatrix spatial_similarity(const InstanceSet& instances,
                                    const GroupSet& groups) {
  if (instances.items.empty() || groups.items.empty())
    throw std::invalid_argument("spatial_similarity: empty instance or group set");
  SimilarityMatrix theta(instances.items.size(), groups.items.size());
  for (std::size_t i = 0; i < instances.items.size(); ++i)
    for (std::size_t j = 0; j < groups.items.size(); ++j)
      theta.at(i, j) = iof(instances.items[i].box, groups.items[j].box);
  return theta;
}

SimilarityMatrix semantic_similarity_inner_product(const InstanceSet& instances,
                                                   const GroupSet& groups) {
  if (instances.items.empty() || groups.items.empty())
    throw std::invalid_argument("semantic_similarity: empty instance or group set");
  SimilarityMatrix theta(instances.items.size(), groups.items.size());
  for (std::size_t i = 0; i < instances.items.size(); ++i) {
    const auto& a = require_embedding(instances.items[i].embedding);
    const double na = norm(a);
    if (na == 0.0)
      throw std::invalid_argument("semantic_similarity: zero-norm embedding");
    for (std::size_t j = 0; j < groups.items.size(); ++j) {
      const auto& b = require_embedding(groups.items[j].embedding);
      if (b.size() != a.size())
        throw std::invalid_argument("semantic_similarity: embedding dimension mismatch");
      const double nb = norm(b);
      if (nb == 0.0)
        throw std::invalid_argument("semantic_similarity: zero-norm embedding");
      theta.at(i, j) = dot(a, b) / (na * nb);
    }
  }
  return theta;
}

SimilarityMatrix semantic_similarity_linear(const InstanceSet& instances,
                                            const GroupSet& groups,
                                            const AffineScorer& scorer) {
  if (instances.items.empty() || groups.items.empty())
    throw std::invalid_argument("semantic_similarity: empty instance or group set");
  SimilarityMatrix theta(instances.items.size(), groups.items.size());
  for (std::size_t i = 0; i < instances.items.size(); ++i) {
    const auto& a = require_embedding(instances.items[i].embedding);
    for (std::size_t j = 0; j < groups.items.size(); ++j) {
      const auto& b = require_embedding(groups.items[j].embedding);
      if (scorer.weights.size() != a.size() + b.size())
        throw std::invalid_argument(
            "semantic_similarity_linear: weights dimension mismatch");
      double z = scorer.bias;
      z += dot(std::span(scorer.weights).first(a.size()), a);
      z += dot(std::span(scorer.weights).subspan(a.size()), b);
      theta.at(i, j) = sigmoid(z);
    }
  }
  return theta;
}

SimilarityMatrix clamp_semantic_to_unit(const SimilarityMatrix& semantic) {
  SimilarityMatrix out = semantic;
  for (double& v : out.data) v = (v + 1.0) * 0.5;
  return out;
}

SimilarityMatrix blend(const SimilarityMatrix& spatial,
                       const SimilarityMatrix& semantic, double alpha) {
  if (!spatial.same_shape(semantic))
    throw std::invalid_argument("blend: shape mismatch");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("blend: alpha must be in [0,1]");
  if (alpha == 0.0) return semantic;
  if (alpha == 1.0) return spatial;
  SimilarityMatrix out = semantic;
  for (std::size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = semantic.data[i] + alpha * (spatial.data[i] - semantic.data[i]);
  return out;
}

std::vector<std::size_t> assign_groups(const SimilarityMatrix& theta_hat) {
  if (theta_hat.rows == 0 || theta_hat.cols == 0)
    throw std::invalid_argument("assign_groups: empty similarity matrix");
  std::vector<std::size_t> assignment(theta_hat.rows, 0);
  for (std::size_t i = 0; i < theta_hat.rows; ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < theta_hat.cols; ++j)
      if (theta_hat.at(i, j) > theta_hat.at(i, best)) best = j;
    assignment[i] = best;
  }
  return assignment;
}

FramePrediction build_hid_prediction(const InstanceSet& instances,
                                     const GroupSet& groups,
                                     std::span<const std::size_t> assignment,
                                     const MergeConfig& config,
                                     const FrameKey& key) {
  if (assignment.size() != instances.items.size())
    throw std::invalid_argument("build_hid_prediction: assignment length mismatch");

  FramePrediction out;
  out.video_id = key.video_id;
  out.timestamp = key.timestamp;

  std::vector<std::size_t> new_index(instances.items.size(),
                                     instances.items.size());
  for (std::size_t i = 0; i < instances.items.size(); ++i) {
    const Instance& inst = instances.items[i];
    if (inst.person_score < config.person_score_threshold) continue;
    new_index[i] = out.persons.size();
    out.persons.push_back({inst.box, inst.person_score, inst.action_scores});
  }

  for (std::size_t j = 0; j < groups.items.size(); ++j) {
    const GroupDetection& group = groups.items[j];
    if (group.group_score < config.group_score_threshold) continue;
    GroupPrediction pred;
    pred.score = group.group_score;
    pred.box = group.box;
    for (std::size_t i = 0; i < assignment.size(); ++i)
      if (assignment[i] == j && new_index[i] < instances.items.size())
        pred.members.push_back(new_index[i]);
    if (pred.members.size() < config.min_group_size) continue;
    out.groups.push_back(std::move(pred));
  }
  return out;
}

std::vector<std::vector<std::size_t>> greedy_pairwise_grouping(
    const Matrix& pair_scores, double threshold) {
  if (pair_scores.rows != pair_scores.cols)
    throw std::invalid_argument("greedy_pairwise_grouping: matrix not square");
  const std::size_t n = pair_scores.rows;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!(pair_scores.at(i, j) == pair_scores.at(j, i)))
        throw std::invalid_argument("greedy_pairwise_grouping: asymmetric matrix");

  DisjointSet sets(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (pair_scores.at(i, j) >= threshold) sets.unite(i, j);

  std::vector<std::vector<std::size_t>> components(n);
  for (std::size_t i = 0; i < n; ++i) components[sets.find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& members : components)
    if (!members.empty()) out.push_back(std::move(members));
  return out;
}

DeduplicatedInstances match_instances_across_pairs(
    std::span<const PairDetection> pair_detections, double iou_threshold) {
  DeduplicatedInstances out;

  const auto merge_actions = [&](std::size_t id, std::span<const double> scores) {
    auto& dst = out.action_scores[id];
    if (dst.size() < scores.size()) dst.resize(scores.size(), 0.0);
    for (std::size_t k = 0; k < scores.size(); ++k)
      dst[k] = std::max(dst[k], scores[k]);
  };

  // Identity of a box: the highest-IoU representative above the (strict)
  // threshold, else a fresh identity with this box as representative.
  const auto identify = [&](const BBox& box,
                            std::span<const double> actions) -> std::size_t {
    std::size_t best = out.boxes.size();
    double best_iou = iou_threshold;
    for (std::size_t r = 0; r < out.boxes.size(); ++r) {
      const double overlap = iou(box, out.boxes[r]);
      if (overlap > best_iou) {
        best_iou = overlap;
        best = r;
      }
    }
    if (best == out.boxes.size()) {
      out.boxes.push_back(box);
      out.action_scores.emplace_back();
    }
    merge_actions(best, actions);
    return best;
  };

  std::vector<std::pair<std::pair<std::size_t, std::size_t>, double>> edges;
  for (const PairDetection& pair : pair_detections) {
    const std::size_t a = identify(pair.box_a, pair.actions_a);
    const std::size_t b = identify(pair.box_b, pair.actions_b);
    if (a != b) edges.push_back({{a, b}, pair.score});
  }

  const std::size_t n = out.boxes.size();
  out.pair_scores = Matrix(n, n, 0.0);
  for (const auto& [pair, score] : edges) {
    const auto [a, b] = pair;
    out.pair_scores.at(a, b) = std::max(out.pair_scores.at(a, b), score);
    out.pair_scores.at(b, a) = out.pair_scores.at(a, b);
  }
  return out;
}

}  // namespace hid
