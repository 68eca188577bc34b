#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hid/dataio.hpp"
#include "hid/geometry.hpp"
#include "hid/matrix.hpp"

namespace hid {

/// Pre-designated spatial/semantic blend weight; 0.3723 is the learned
/// alternative reported alongside it.
inline constexpr double kDefaultAlpha = 0.3;
inline constexpr double kLearnedAlpha = 0.3723;

struct Instance {
  BBox box;
  double person_score = 1.0;
  std::vector<double> action_scores;
  std::optional<std::vector<double>> embedding;  // already transformed r^P
};

struct InstanceSet {
  std::vector<Instance> items;
};

struct GroupDetection {
  BBox box;
  double group_score = 1.0;
  std::optional<std::vector<double>> embedding;  // already transformed r^G
};

struct GroupSet {
  std::vector<GroupDetection> items;
};

struct MergeConfig {
  double alpha = kDefaultAlpha;
  double person_score_threshold = 0.0;
  double group_score_threshold = 0.0;
  std::size_t min_group_size = 1;
};

/// Affine map from the concatenated (person, group) embedding pair to a
/// scalar; weights.size() must equal 2d.
struct AffineScorer {
  std::vector<double> weights;
  double bias = 0.0;
};

/// theta'_ij = IoF(person box i, group box j); entries in [0,1].
SimilarityMatrix spatial_similarity(const InstanceSet& instances,
                                    const GroupSet& groups);

/// Cosine similarity of instance/group embeddings; entries in [-1,1]. Throws
/// when an embedding is missing, dimensions differ, or a vector has zero norm.
SimilarityMatrix semantic_similarity_inner_product(const InstanceSet& instances,
                                                   const GroupSet& groups);

/// sigmoid(weights . concat(r^P_i, r^G_j) + bias); entries in (0,1).
SimilarityMatrix semantic_similarity_linear(const InstanceSet& instances,
                                            const GroupSet& groups,
                                            const AffineScorer& scorer);

/// Maps cosine range [-1,1] onto [0,1] via (x+1)/2 for range-matched blending.
SimilarityMatrix clamp_semantic_to_unit(const SimilarityMatrix& semantic);

/// theta_hat = alpha * spatial + (1 - alpha) * semantic, elementwise. The
/// endpoints alpha = 0 and alpha = 1 reproduce the inputs bit-exactly.
SimilarityMatrix blend(const SimilarityMatrix& spatial,
                       const SimilarityMatrix& semantic, double alpha);

/// Per-instance argmax over groups, ties to the lowest group index. The
/// result is a total map, so the induced groups always partition instances.
std::vector<std::size_t> assign_groups(const SimilarityMatrix& theta_hat);

/// Packages instances + groups + assignment into a schema-valid prediction,
/// applying the config's score thresholds and minimum group size.
FramePrediction build_hid_prediction(const InstanceSet& instances,
                                     const GroupSet& groups,
                                     std::span<const std::size_t> assignment,
                                     const MergeConfig& config,
                                     const FrameKey& key);

/// Baseline grouping: connect i,j when pair score >= threshold, components
/// via union-find. Singletons stay singleton groups. Components are listed by
/// smallest member, members ascending. Throws on an asymmetric matrix.
std::vector<std::vector<std::size_t>> greedy_pairwise_grouping(
    const Matrix& pair_scores, double threshold = 0.6);

/// One pairwise interaction detection from a pair-based model: two person
/// boxes, an interaction score, optional per-side action scores.
struct PairDetection {
  BBox box_a;
  BBox box_b;
  double score = 0.0;
  std::vector<double> actions_a;
  std::vector<double> actions_b;
};

struct DeduplicatedInstances {
  std::vector<BBox> boxes;                       // one representative per identity
  std::vector<std::vector<double>> action_scores;  // elementwise max over pairs
  Matrix pair_scores;                            // symmetric, max-aggregated
};

/// Merges boxes whose IoU exceeds iou_threshold (strictly) into identities;
/// the first occurrence is the representative. Emits the induced pairwise
/// interaction score matrix for greedy_pairwise_grouping.
DeduplicatedInstances match_instances_across_pairs(
    std::span<const PairDetection> pair_detections, double iou_threshold = 0.8);

/// One frame of split-stage outputs awaiting merging: detected people and
/// detected groups, no memberships yet. JSONL schema is the prediction
/// format with group boxes required and "members" absent.
struct DetectionFrame {
  FrameKey key;
  InstanceSet instances;
  GroupSet groups;
};

struct DetectionDataset {
  DatasetMeta meta;
  std::vector<DetectionFrame> frames;
  std::vector<std::string> warnings;
};

DetectionDataset parse_detections(const std::string& path);
DetectionDataset parse_detections(std::istream& in);

/// Per-frame embeddings, or a precomputed similarity matrix that bypasses
/// the embedding math. JSONL, one record per frame:
///   {"video_id", "timestamp", "instance_embeddings": [[d]...],
///    "group_embeddings": [[d]...], "theta": [[u x v]]?}
struct EmbeddingRecord {
  FrameKey key;
  std::vector<std::vector<double>> instance_embeddings;
  std::vector<std::vector<double>> group_embeddings;
  std::optional<Matrix> theta;
};

std::vector<EmbeddingRecord> parse_embeddings(const std::string& path);
std::vector<EmbeddingRecord> parse_embeddings(std::istream& in);

/// Weight file for the linear semantic variant: {"weights": [2d], "bias": b}.
AffineScorer load_affine_scorer(const std::string& path);

}  // namespace hid
