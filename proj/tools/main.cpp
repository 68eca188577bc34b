#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "hid/action_metrics.hpp"
#include "hid/dataio.hpp"
#include "hid/errors.hpp"
#include "hid/group_metrics.hpp"
#include "hid/merge.hpp"
#include "hid/report.hpp"
#include "hid/synth.hpp"
#include "json.hpp"

namespace {

using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitInputError = 2;
constexpr int kExitKeyMismatch = 3;

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

struct EvaluateArgs {
  std::string gt_path;
  std::string pred_path;
  double iou_threshold = 0.5;
  std::string score_mode = "action";
  double person_score_threshold = 0.0;
  double group_score_threshold = 0.0;
  std::size_t workers = 1;
};

int run_evaluate(const EvaluateArgs& args) {
  const auto gt = hid::parse_ground_truth(args.gt_path);
  auto pred = hid::parse_predictions(args.pred_path);
  print_warnings(gt.warnings);
  print_warnings(pred.warnings);
  if (gt.meta.num_actions != pred.meta.num_actions)
    throw hid::ParseError("num_actions differs between ground truth (" +
                          std::to_string(gt.meta.num_actions) +
                          ") and predictions (" +
                          std::to_string(pred.meta.num_actions) + ")");

  if (args.person_score_threshold > 0.0 || args.group_score_threshold > 0.0) {
    for (auto& frame : pred.frames)
      frame = hid::filter_prediction(frame, args.person_score_threshold,
                                     args.group_score_threshold, 1);
  }

  hid::EvalReport report;
  report.config.person_iou_threshold = args.iou_threshold;
  report.config.score_mode = args.score_mode == "action"
                                 ? hid::ScoreMode::action
                                 : hid::ScoreMode::action_times_person;
  report.config.person_score_threshold = args.person_score_threshold;
  report.config.group_score_threshold = args.group_score_threshold;
  report.config.workers = args.workers;

  report.group_ap = hid::evaluate_group_ap(gt.frames, pred.frames, args.workers);
  report.person_ap =
      hid::evaluate_person_ap(gt.frames, pred.frames, gt.meta.num_actions,
                              args.iou_threshold, report.config.score_mode,
                              args.workers);

  report.counts.num_frames = gt.frames.size();
  for (const auto& f : gt.frames)
    report.counts.num_gt_persons += f.persons.size();
  for (const auto& f : pred.frames)
    report.counts.num_pred_persons += f.persons.size();

  std::cout << hid::to_json_string(report) << "\n";
  std::cerr << hid::format_summary_table(report);
  return kExitOk;
}

int run_validate(const std::string& gt_path) {
  const auto ds = hid::parse_ground_truth(gt_path, hid::ParseMode::lenient);
  print_warnings(ds.warnings);
  const hid::ValidationReport report = hid::validate_ground_truth(ds.frames);

  json j;
  j["ok"] = report.ok();
  j["num_frames"] = ds.frames.size();
  j["violations"] = json::array();
  for (const auto& v : report.violations) {
    json jv;
    jv["rule"] = hid::gt_rule_name(v.rule);
    jv["frame"] = v.frame.str();
    jv["message"] = v.message;
    j["violations"].push_back(std::move(jv));
  }
  j["warnings"] = json::array();
  for (const auto& w : report.warnings) {
    json jw;
    jw["code"] = w.code;
    jw["frame"] = w.frame.str();
    jw["message"] = w.message;
    j["warnings"].push_back(std::move(jw));
  }
  std::cout << j.dump(2) << "\n";
  std::cerr << (report.ok() ? "validation OK" : "validation FAILED") << " ("
            << report.violations.size() << " violations, "
            << report.warnings.size() << " warnings)\n";
  for (const auto& v : report.violations)
    std::cerr << "  [" << hid::gt_rule_name(v.rule) << "] " << v.message << "\n";
  return report.ok() ? kExitOk : kExitValidationFailure;
}

int run_stats(const std::string& gt_path) {
  const auto ds = hid::parse_ground_truth(gt_path);
  print_warnings(ds.warnings);
  const hid::DatasetStats stats = hid::dataset_stats(ds.frames);
  json j;
  j["num_frames"] = stats.num_frames;
  j["num_groups_total"] = stats.num_groups_total;
  j["num_interaction_categories_present"] =
      stats.num_interaction_categories_present;
  j["max_groups_per_frame"] = stats.max_groups_per_frame;
  j["max_people_per_group"] = stats.max_people_per_group;
  j["mean_people_per_group"] = stats.mean_people_per_group;
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

struct MergeArgs {
  std::string detections_path;
  std::string embeddings_path;
  std::string weights_path;
  std::string output_path;
  std::string mode = "blend";
  std::string semantic_op = "cosine";
  double alpha = hid::kDefaultAlpha;
  bool clamp_semantic = false;
  double person_score_threshold = 0.0;
  double group_score_threshold = 0.0;
  std::size_t min_group_size = 1;
};

int run_merge(const MergeArgs& args) {
  const auto detections = hid::parse_detections(args.detections_path);
  print_warnings(detections.warnings);

  const bool needs_semantic = args.mode != "spatial";

  std::map<hid::FrameKey, hid::EmbeddingRecord> embeddings;
  if (!args.embeddings_path.empty()) {
    for (auto& rec : hid::parse_embeddings(args.embeddings_path)) {
      const hid::FrameKey key = rec.key;
      if (!embeddings.emplace(key, std::move(rec)).second)
        throw hid::ParseError("duplicate embedding record for frame " + key.str());
    }
  }
  std::optional<hid::AffineScorer> scorer;
  if (args.semantic_op == "linear") {
    if (args.weights_path.empty())
      throw hid::ParseError("--semantic-op linear requires --weights");
    scorer = hid::load_affine_scorer(args.weights_path);
  }

  hid::MergeConfig config;
  config.alpha = args.alpha;
  config.person_score_threshold = args.person_score_threshold;
  config.group_score_threshold = args.group_score_threshold;
  config.min_group_size = args.min_group_size;

  std::ofstream file_out;
  if (!args.output_path.empty()) {
    file_out.open(args.output_path);
    if (!file_out)
      throw hid::ParseError("cannot open output file: " + args.output_path);
  }
  std::ostream& out = args.output_path.empty() ? std::cout : file_out;

  hid::PredictionDataset result;
  result.meta = detections.meta;
  for (const auto& frame : detections.frames) {
    const std::size_t u = frame.instances.items.size();
    const std::size_t v = frame.groups.items.size();
    if (u == 0 || v == 0) {
      // Nothing to merge; emit surviving people with no groups.
      hid::FramePrediction empty;
      empty.video_id = frame.key.video_id;
      empty.timestamp = frame.key.timestamp;
      for (const auto& inst : frame.instances.items)
        if (inst.person_score >= config.person_score_threshold)
          empty.persons.push_back(
              {inst.box, inst.person_score, inst.action_scores});
      result.frames.push_back(std::move(empty));
      continue;
    }

    hid::InstanceSet instances = frame.instances;
    hid::GroupSet groups = frame.groups;

    hid::SimilarityMatrix semantic;
    if (needs_semantic) {
      const auto it = embeddings.find(frame.key);
      if (it == embeddings.end())
        throw hid::ParseError(
            "semantic merging needs an embedding record for frame " +
            frame.key.str());
      const hid::EmbeddingRecord& rec = it->second;
      if (rec.theta.has_value()) {
        semantic = *rec.theta;
        if (semantic.rows != u || semantic.cols != v)
          throw hid::ParseError("theta shape mismatch at frame " +
                                frame.key.str());
      } else {
        if (rec.instance_embeddings.size() != u ||
            rec.group_embeddings.size() != v)
          throw hid::ParseError("embedding counts mismatch at frame " +
                                frame.key.str());
        for (std::size_t i = 0; i < u; ++i)
          instances.items[i].embedding = rec.instance_embeddings[i];
        for (std::size_t j = 0; j < v; ++j)
          groups.items[j].embedding = rec.group_embeddings[j];
        semantic = scorer.has_value()
                       ? hid::semantic_similarity_linear(instances, groups,
                                                         *scorer)
                       : hid::semantic_similarity_inner_product(instances,
                                                                groups);
      }
      if (args.clamp_semantic) semantic = hid::clamp_semantic_to_unit(semantic);
    }

    hid::SimilarityMatrix theta_hat;
    if (args.mode == "spatial") {
      theta_hat = hid::spatial_similarity(instances, groups);
    } else if (args.mode == "semantic") {
      theta_hat = std::move(semantic);
    } else {
      const hid::SimilarityMatrix spatial =
          hid::spatial_similarity(instances, groups);
      theta_hat = hid::blend(spatial, semantic, config.alpha);
    }

    const std::vector<std::size_t> assignment = hid::assign_groups(theta_hat);
    result.frames.push_back(hid::build_hid_prediction(instances, groups,
                                                      assignment, config,
                                                      frame.key));
  }
  hid::write_dataset(out, result);
  return kExitOk;
}

struct SynthArgs {
  hid::ScenarioSpec spec;
  std::string gt_path;
  std::string pred_path;
};

int run_synth(const SynthArgs& args) {
  const auto [gt, pred] = hid::generate(args.spec);
  std::ofstream gt_out(args.gt_path);
  if (!gt_out) throw hid::ParseError("cannot open output file: " + args.gt_path);
  hid::write_dataset(gt_out, gt);
  std::ofstream pred_out(args.pred_path);
  if (!pred_out)
    throw hid::ParseError("cannot open output file: " + args.pred_path);
  hid::write_dataset(pred_out, pred);
  std::cerr << "wrote " << gt.frames.size() << " frames to " << args.gt_path
            << " and " << args.pred_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "HID evaluation toolkit: group/person detection metrics, annotation "
      "validation, and the similarity-based merging stage"};
  app.require_subcommand(1);

  EvaluateArgs eval_args;
  auto* eval_cmd = app.add_subcommand(
      "evaluate",
      "Group AP and per-person action mAP for predictions vs ground truth");
  eval_cmd->add_option("gt", eval_args.gt_path, "ground-truth JSONL")->required();
  eval_cmd->add_option("pred", eval_args.pred_path, "prediction JSONL")->required();
  eval_cmd->add_option("--iou-threshold", eval_args.iou_threshold,
                       "box IoU threshold for person AP (default 0.5)");
  eval_cmd
      ->add_option("--score-mode", eval_args.score_mode,
                   "per-class detection score")
      ->check(CLI::IsMember({"action", "action*person"}));
  eval_cmd->add_option("--person-score-threshold",
                       eval_args.person_score_threshold,
                       "drop predicted persons below this s^P (default 0)");
  eval_cmd->add_option("--group-score-threshold",
                       eval_args.group_score_threshold,
                       "drop predicted groups below this s^G (default 0)");
  eval_cmd
      ->add_option("--workers", eval_args.workers,
                   "frame-parallel workers; output is independent of N")
      ->envname("HID_EVAL_WORKERS")
      ->check(CLI::Range(std::size_t{1}, std::size_t{256}));

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand(
      "validate", "Check annotation invariants of a ground-truth file");
  validate_cmd->add_option("gt", validate_path, "ground-truth JSONL")->required();

  std::string stats_path;
  auto* stats_cmd = app.add_subcommand("stats", "Dataset statistics");
  stats_cmd->add_option("gt", stats_path, "ground-truth JSONL")->required();

  MergeArgs merge_args;
  auto* merge_cmd = app.add_subcommand(
      "merge", "Assign detected people to detected groups by similarity");
  merge_cmd
      ->add_option("--detections", merge_args.detections_path,
                   "split-stage detections JSONL")
      ->required();
  merge_cmd->add_option("--embeddings", merge_args.embeddings_path,
                        "embeddings / precomputed-theta JSONL");
  merge_cmd->add_option("--mode", merge_args.mode, "similarity source")
      ->check(CLI::IsMember({"spatial", "semantic", "blend"}));
  merge_cmd
      ->add_option("--semantic-op", merge_args.semantic_op,
                   "semantic similarity form")
      ->check(CLI::IsMember({"cosine", "linear"}));
  merge_cmd->add_option("--weights", merge_args.weights_path,
                        "affine weights JSON for --semantic-op linear");
  merge_cmd
      ->add_option("--alpha", merge_args.alpha,
                   "spatial/semantic blend weight (default 0.3)")
      ->check(CLI::Range(0.0, 1.0));
  merge_cmd->add_flag("--clamp-semantic", merge_args.clamp_semantic,
                      "map semantic similarity to [0,1] via (x+1)/2");
  merge_cmd->add_option("--person-score-threshold",
                        merge_args.person_score_threshold);
  merge_cmd->add_option("--group-score-threshold",
                        merge_args.group_score_threshold);
  merge_cmd
      ->add_option("--min-group-size", merge_args.min_group_size,
                   "drop output groups smaller than this (default 1)")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000}));
  merge_cmd->add_option("--output,-o", merge_args.output_path,
                        "output path (default stdout)");

  SynthArgs synth_args;
  std::size_t people_min = 2, people_max = 8, groups_min = 1, groups_max = 4;
  auto* synth_cmd = app.add_subcommand(
      "synth", "Generate a deterministic synthetic ground-truth/prediction pair");
  synth_cmd->add_option("--gt", synth_args.gt_path, "output ground-truth path")
      ->required();
  synth_cmd->add_option("--pred", synth_args.pred_path, "output prediction path")
      ->required();
  synth_cmd->add_option("--seed", synth_args.spec.seed);
  synth_cmd->add_option("--frames", synth_args.spec.num_frames);
  synth_cmd->add_option("--people-min", people_min);
  synth_cmd->add_option("--people-max", people_max);
  synth_cmd->add_option("--groups-min", groups_min);
  synth_cmd->add_option("--groups-max", groups_max);
  synth_cmd->add_option("--jitter", synth_args.spec.box_jitter,
                        "box perturbation sigma in normalized units");
  synth_cmd->add_option("--corruption", synth_args.spec.membership_corruption,
                        "per-frame probability of a membership change");
  synth_cmd->add_option("--score-noise", synth_args.spec.score_noise);
  synth_cmd->add_option("--num-actions", synth_args.spec.num_actions);

  CLI11_PARSE(app, argc, argv);

  try {
    if (eval_cmd->parsed()) return run_evaluate(eval_args);
    if (validate_cmd->parsed()) return run_validate(validate_path);
    if (stats_cmd->parsed()) return run_stats(stats_path);
    if (merge_cmd->parsed()) return run_merge(merge_args);
    if (synth_cmd->parsed()) {
      synth_args.spec.people_per_frame = {people_min, people_max};
      synth_args.spec.groups_per_frame = {groups_min, groups_max};
      return run_synth(synth_args);
    }
  } catch (const hid::FrameKeyMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitKeyMismatch;
  } catch (const hid::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}
