#include "hid/report.hpp"

#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace hid {
namespace {

using json = nlohmann::json;

constexpr const char* kThresholdKeys[6] = {"0.5", "0.6", "0.7",
                                           "0.8", "0.9", "1.0"};

const char* score_mode_name(ScoreMode mode) {
  return mode == ScoreMode::action ? "action" : "action*person";
}

ScoreMode score_mode_from(const std::string& name) {
  if (name == "action") return ScoreMode::action;
  if (name == "action*person") return ScoreMode::action_times_person;
  throw std::invalid_argument("unknown score mode: " + name);
}

}  // namespace

std::string to_json_string(const EvalReport& report, int indent) {
  json j;
  j["version"] = report.version;

  json& cfg = j["config"];
  cfg["person_iou_threshold"] = report.config.person_iou_threshold;
  cfg["score_mode"] = score_mode_name(report.config.score_mode);
  cfg["person_score_threshold"] = report.config.person_score_threshold;
  cfg["group_score_threshold"] = report.config.group_score_threshold;
  cfg["workers"] = report.config.workers;

  json& counts = j["counts"];
  counts["num_frames"] = report.counts.num_frames;
  counts["num_gt_persons"] = report.counts.num_gt_persons;
  counts["num_pred_persons"] = report.counts.num_pred_persons;

  json& group = j["group_ap"];
  for (std::size_t t = 0; t < 6; ++t)
    group["per_threshold"][kThresholdKeys[t]] = report.group_ap.per_threshold[t];
  group["mean"] = report.group_ap.mean;
  group["num_gt_groups"] = report.group_ap.num_gt_groups;
  group["num_pred_groups"] = report.group_ap.num_pred_groups;

  json& person = j["person_ap"];
  person["mAP"] = report.person_ap.mean_ap;
  person["per_class"] = json::array();
  for (const ClassAP& c : report.person_ap.per_class) {
    json jc;
    jc["class_id"] = c.class_id;
    jc["ap"] = c.ap;
    jc["num_gt"] = c.num_gt;
    person["per_class"].push_back(std::move(jc));
  }
  return j.dump(indent);
}

EvalReport eval_report_from_json(const std::string& json_text) {
  const json j = json::parse(json_text);
  EvalReport report;
  report.version = j.at("version").get<std::string>();

  const json& cfg = j.at("config");
  report.config.person_iou_threshold = cfg.at("person_iou_threshold").get<double>();
  report.config.score_mode = score_mode_from(cfg.at("score_mode").get<std::string>());
  report.config.person_score_threshold =
      cfg.at("person_score_threshold").get<double>();
  report.config.group_score_threshold =
      cfg.at("group_score_threshold").get<double>();
  report.config.workers = cfg.at("workers").get<std::size_t>();

  const json& counts = j.at("counts");
  report.counts.num_frames = counts.at("num_frames").get<std::size_t>();
  report.counts.num_gt_persons = counts.at("num_gt_persons").get<std::size_t>();
  report.counts.num_pred_persons = counts.at("num_pred_persons").get<std::size_t>();

  const json& group = j.at("group_ap");
  for (std::size_t t = 0; t < 6; ++t)
    report.group_ap.per_threshold[t] =
        group.at("per_threshold").at(kThresholdKeys[t]).get<double>();
  report.group_ap.mean = group.at("mean").get<double>();
  report.group_ap.num_gt_groups = group.at("num_gt_groups").get<std::size_t>();
  report.group_ap.num_pred_groups = group.at("num_pred_groups").get<std::size_t>();

  const json& person = j.at("person_ap");
  report.person_ap.mean_ap = person.at("mAP").get<double>();
  for (const json& jc : person.at("per_class"))
    report.person_ap.per_class.push_back(ClassAP{jc.at("class_id").get<int>(),
                                                 jc.at("ap").get<double>(),
                                                 jc.at("num_gt").get<std::size_t>()});
  return report;
}

std::string format_summary_table(const EvalReport& report) {
  char line[160];
  std::string out;
  std::snprintf(line, sizeof(line), "HID evaluation (v%s)\n",
                report.version.c_str());
  out += line;
  std::snprintf(line, sizeof(line),
                "  frames: %zu   gt persons: %zu   pred persons: %zu\n",
                report.counts.num_frames, report.counts.num_gt_persons,
                report.counts.num_pred_persons);
  out += line;
  out += "  delta     ";
  for (const char* key : {"0.5", "0.6", "0.7", "0.8", "0.9", "1.0"}) {
    std::snprintf(line, sizeof(line), "%8s", key);
    out += line;
  }
  out += "\n  AP^G      ";
  for (std::size_t t = 0; t < 6; ++t) {
    std::snprintf(line, sizeof(line), "%8.4f", report.group_ap.per_threshold[t]);
    out += line;
  }
  out += "\n";
  std::snprintf(line, sizeof(line),
                "  AP^G mean %.4f   (gt groups: %zu, pred groups: %zu)\n",
                report.group_ap.mean, report.group_ap.num_gt_groups,
                report.group_ap.num_pred_groups);
  out += line;
  std::size_t with_gt = 0;
  for (const ClassAP& c : report.person_ap.per_class)
    if (c.num_gt > 0) ++with_gt;
  std::snprintf(line, sizeof(line),
                "  person mAP %.4f @IoU %.2f  (classes with gt: %zu/%zu)\n",
                report.person_ap.mean_ap, report.config.person_iou_threshold,
                with_gt, report.person_ap.per_class.size());
  out += line;
  return out;
}

}  // namespace hid
