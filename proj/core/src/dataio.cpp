#include "hid/dataio.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "hid/errors.hpp"
#include "json.hpp"

namespace hid {
namespace {

using json = nlohmann::json;

json parse_json_line(const std::string& line, std::size_t lineno) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ParseError("malformed JSON", lineno);
  if (!j.is_object()) throw ParseError("expected a JSON object", lineno);
  return j;
}

double require_number(const json& j, const char* field, std::size_t lineno) {
  if (!j.is_number()) throw ParseError(std::string(field) + " must be a number", lineno);
  const double v = j.get<double>();
  if (!std::isfinite(v))
    throw ParseError(std::string(field) + " must be finite", lineno);
  return v;
}

double require_unit_score(const json& j, const char* field, std::size_t lineno) {
  const double v = require_number(j, field, lineno);
  if (v < 0.0 || v > 1.0)
    throw ParseError(std::string(field) + " out of [0,1]", lineno);
  return v;
}

BBox parse_box(const json& j, const char* field, std::size_t lineno,
               std::vector<std::string>* warnings) {
  if (!j.is_array() || j.size() != 4)
    throw ParseError(std::string(field) + " must be [x1,y1,x2,y2]", lineno);
  double c[4];
  for (std::size_t i = 0; i < 4; ++i) c[i] = require_number(j[i], field, lineno);
  bool clamped = false;
  for (double& v : c) {
    const double before = v;
    v = std::clamp(v, 0.0, 1.0);
    clamped |= v != before;
  }
  if (clamped && warnings)
    warnings->push_back("line " + std::to_string(lineno) + ": " + field +
                        " clamped to [0,1]");
  const BBox box{c[0], c[1], c[2], c[3]};
  if (!(box.x1 < box.x2 && box.y1 < box.y2))
    throw ParseError(std::string(field) + " has zero or negative area", lineno);
  return box;
}

DatasetMeta parse_meta(const json& j, std::size_t lineno) {
  DatasetMeta meta;
  const json& m = j.at("meta");
  if (!m.is_object()) throw ParseError("meta must be an object", lineno);
  if (m.contains("num_actions")) {
    if (!m["num_actions"].is_number_integer() || m["num_actions"].get<int>() <= 0)
      throw ParseError("meta.num_actions must be a positive integer", lineno);
    meta.num_actions = m["num_actions"].get<int>();
  }
  if (m.contains("labels")) {
    if (!m["labels"].is_array())
      throw ParseError("meta.labels must be an array of strings", lineno);
    for (const auto& l : m["labels"]) {
      if (!l.is_string())
        throw ParseError("meta.labels must be an array of strings", lineno);
      meta.labels.push_back(l.get<std::string>());
    }
    if (static_cast<int>(meta.labels.size()) != meta.num_actions)
      throw ParseError("meta.labels length differs from num_actions", lineno);
  }
  return meta;
}

void parse_frame_header(const json& j, std::size_t lineno, std::string* video_id,
                        std::int64_t* timestamp) {
  if (!j.contains("video_id") || !j["video_id"].is_string() ||
      j["video_id"].get<std::string>().empty())
    throw ParseError("video_id must be a non-empty string", lineno);
  if (!j.contains("timestamp") || !j["timestamp"].is_number_integer())
    throw ParseError("timestamp must be an integer", lineno);
  *video_id = j["video_id"].get<std::string>();
  *timestamp = j["timestamp"].get<std::int64_t>();
}

std::vector<std::size_t> parse_member_list(const json& j, std::size_t lineno) {
  if (!j.is_array()) throw ParseError("group members must be an array", lineno);
  std::vector<std::size_t> members;
  members.reserve(j.size());
  for (const auto& m : j) {
    if (!m.is_number_integer() || m.get<std::int64_t>() < 0)
      throw ParseError("group member index must be a non-negative integer", lineno);
    members.push_back(m.get<std::size_t>());
  }
  return members;
}

// Per-frame annotation rules shared by the strict parser and the validator.
std::vector<GtViolation> frame_violations(const FrameGroundTruth& frame) {
  std::vector<GtViolation> out;
  const FrameKey key = frame.key();

  std::map<std::size_t, std::size_t> owner;  // member -> first group
  for (std::size_t g = 0; g < frame.groups.size(); ++g) {
    const auto& members = frame.groups[g];
    if (members.size() < 2)
      out.push_back({GtRule::group_too_small, key,
                     "group " + std::to_string(g) + " has " +
                         std::to_string(members.size()) + " member(s)"});
    for (const std::size_t m : members) {
      if (m >= frame.persons.size()) {
        out.push_back({GtRule::index_out_of_range, key,
                       "group " + std::to_string(g) + " references person " +
                           std::to_string(m) + " but frame has " +
                           std::to_string(frame.persons.size()) + " persons"});
        continue;
      }
      const auto [it, inserted] = owner.emplace(m, g);
      if (!inserted)
        out.push_back({GtRule::groups_overlap, key,
                       "groups not disjoint at frame " + key.str() + ": person " +
                           std::to_string(m) + " in groups " +
                           std::to_string(it->second) + " and " +
                           std::to_string(g)});
      if (frame.persons[m].actions.empty())
        out.push_back({GtRule::grouped_person_without_actions, key,
                       "person " + std::to_string(m) + " in group " +
                           std::to_string(g) + " has no action labels"});
    }
  }
  return out;
}

}  // namespace

const char* gt_rule_name(GtRule rule) {
  switch (rule) {
    case GtRule::groups_overlap: return "groups_overlap";
    case GtRule::group_too_small: return "group_too_small";
    case GtRule::index_out_of_range: return "index_out_of_range";
    case GtRule::duplicate_frame_key: return "duplicate_frame_key";
    case GtRule::grouped_person_without_actions:
      return "grouped_person_without_actions";
  }
  return "unknown";
}

GroundTruthDataset parse_ground_truth(std::istream& in, ParseMode mode) {
  GroundTruthDataset ds;
  std::set<FrameKey> seen;
  std::string line;
  std::size_t lineno = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = parse_json_line(line, lineno);
    if (j.contains("meta")) {
      if (!first_content_line)
        throw ParseError("meta line must be the first line", lineno);
      ds.meta = parse_meta(j, lineno);
      first_content_line = false;
      continue;
    }
    first_content_line = false;

    FrameGroundTruth frame;
    parse_frame_header(j, lineno, &frame.video_id, &frame.timestamp);

    if (!j.contains("persons") || !j["persons"].is_array())
      throw ParseError("persons must be an array", lineno);
    for (const auto& jp : j["persons"]) {
      if (!jp.is_object() || !jp.contains("box"))
        throw ParseError("person must be an object with a box", lineno);
      PersonGT person;
      person.box = parse_box(jp["box"], "person box", lineno, &ds.warnings);
      if (jp.contains("actions")) {
        if (!jp["actions"].is_array())
          throw ParseError("actions must be an array", lineno);
        for (const auto& a : jp["actions"]) {
          if (!a.is_number_integer())
            throw ParseError("action id must be an integer", lineno);
          const int id = a.get<int>();
          if (id < 0 || id >= ds.meta.num_actions)
            throw ParseError("action id " + std::to_string(id) +
                                 " out of range [0," +
                                 std::to_string(ds.meta.num_actions) +
                                 ") at frame " + frame.key().str(),
                             lineno);
          person.actions.push_back(id);
        }
        std::sort(person.actions.begin(), person.actions.end());
        person.actions.erase(
            std::unique(person.actions.begin(), person.actions.end()),
            person.actions.end());
      }
      frame.persons.push_back(std::move(person));
    }

    if (!j.contains("groups") || !j["groups"].is_array())
      throw ParseError("groups must be an array", lineno);
    for (const auto& jg : j["groups"])
      frame.groups.push_back(parse_member_list(jg, lineno));

    if (mode == ParseMode::strict) {
      const auto violations = frame_violations(frame);
      if (!violations.empty()) throw ParseError(violations.front().message, lineno);
      if (!seen.insert(frame.key()).second)
        throw ParseError("duplicate frame key " + frame.key().str(), lineno);
    }
    ds.frames.push_back(std::move(frame));
  }
  return ds;
}

GroundTruthDataset parse_ground_truth(const std::string& path, ParseMode mode) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  return parse_ground_truth(in, mode);
}

PredictionDataset parse_predictions(std::istream& in) {
  PredictionDataset ds;
  std::set<FrameKey> seen;
  std::string line;
  std::size_t lineno = 0;
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = parse_json_line(line, lineno);
    if (j.contains("meta")) {
      if (!first_content_line)
        throw ParseError("meta line must be the first line", lineno);
      ds.meta = parse_meta(j, lineno);
      first_content_line = false;
      continue;
    }
    first_content_line = false;

    FramePrediction frame;
    parse_frame_header(j, lineno, &frame.video_id, &frame.timestamp);

    if (!j.contains("persons") || !j["persons"].is_array())
      throw ParseError("persons must be an array", lineno);
    for (const auto& jp : j["persons"]) {
      if (!jp.is_object() || !jp.contains("box") || !jp.contains("score") ||
          !jp.contains("action_scores"))
        throw ParseError("predicted person needs box, score and action_scores",
                         lineno);
      PersonPrediction person;
      person.box = parse_box(jp["box"], "person box", lineno, &ds.warnings);
      person.score = require_unit_score(jp["score"], "person score", lineno);
      if (!jp["action_scores"].is_array() ||
          static_cast<int>(jp["action_scores"].size()) != ds.meta.num_actions)
        throw ParseError("action_scores must hold " +
                             std::to_string(ds.meta.num_actions) +
                             " values at frame " + frame.key().str(),
                         lineno);
      for (const auto& s : jp["action_scores"])
        person.action_scores.push_back(
            require_unit_score(s, "action score", lineno));
      frame.persons.push_back(std::move(person));
    }

    if (!j.contains("groups") || !j["groups"].is_array())
      throw ParseError("groups must be an array", lineno);
    std::set<std::size_t> owned;
    for (const auto& jg : j["groups"]) {
      if (!jg.is_object() || !jg.contains("members") || !jg.contains("score"))
        throw ParseError("predicted group needs members and score", lineno);
      GroupPrediction group;
      group.members = parse_member_list(jg["members"], lineno);
      if (group.members.empty())
        throw ParseError("predicted group has no members at frame " +
                             frame.key().str(),
                         lineno);
      for (const std::size_t m : group.members) {
        if (m >= frame.persons.size())
          throw ParseError("group member index " + std::to_string(m) +
                               " out of range at frame " + frame.key().str(),
                           lineno);
        if (!owned.insert(m).second)
          throw ParseError("groups not disjoint at frame " + frame.key().str(),
                           lineno);
      }
      group.score = require_unit_score(jg["score"], "group score", lineno);
      if (jg.contains("box") && !jg["box"].is_null())
        group.box = parse_box(jg["box"], "group box", lineno, &ds.warnings);
      frame.groups.push_back(std::move(group));
    }

    if (!seen.insert(frame.key()).second)
      throw ParseError("duplicate frame key " + frame.key().str(), lineno);
    ds.frames.push_back(std::move(frame));
  }
  return ds;
}

PredictionDataset parse_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  return parse_predictions(in);
}

std::string serialize_frame(const FrameGroundTruth& frame) {
  json j;
  j["video_id"] = frame.video_id;
  j["timestamp"] = frame.timestamp;
  j["persons"] = json::array();
  for (const auto& p : frame.persons) {
    json jp;
    jp["box"] = {p.box.x1, p.box.y1, p.box.x2, p.box.y2};
    jp["actions"] = p.actions;
    j["persons"].push_back(std::move(jp));
  }
  j["groups"] = json::array();
  for (const auto& g : frame.groups) j["groups"].push_back(g);
  return j.dump();
}

std::string serialize_frame(const FramePrediction& frame) {
  json j;
  j["video_id"] = frame.video_id;
  j["timestamp"] = frame.timestamp;
  j["persons"] = json::array();
  for (const auto& p : frame.persons) {
    json jp;
    jp["box"] = {p.box.x1, p.box.y1, p.box.x2, p.box.y2};
    jp["score"] = p.score;
    jp["action_scores"] = p.action_scores;
    j["persons"].push_back(std::move(jp));
  }
  j["groups"] = json::array();
  for (const auto& g : frame.groups) {
    json jg;
    jg["members"] = g.members;
    jg["score"] = g.score;
    if (g.box.has_value())
      jg["box"] = {g.box->x1, g.box->y1, g.box->x2, g.box->y2};
    else
      jg["box"] = nullptr;
    j["groups"].push_back(std::move(jg));
  }
  return j.dump();
}

std::string serialize_meta(const DatasetMeta& meta) {
  json j;
  j["meta"]["num_actions"] = meta.num_actions;
  if (!meta.labels.empty()) j["meta"]["labels"] = meta.labels;
  return j.dump();
}

void write_dataset(std::ostream& out, const GroundTruthDataset& ds) {
  out << serialize_meta(ds.meta) << '\n';
  for (const auto& frame : ds.frames) out << serialize_frame(frame) << '\n';
}

void write_dataset(std::ostream& out, const PredictionDataset& ds) {
  out << serialize_meta(ds.meta) << '\n';
  for (const auto& frame : ds.frames) out << serialize_frame(frame) << '\n';
}

ValidationReport validate_ground_truth(const std::vector<FrameGroundTruth>& frames) {
  ValidationReport report;
  std::map<FrameKey, std::size_t> seen;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const FrameGroundTruth& frame = frames[i];
    const FrameKey key = frame.key();

    auto violations = frame_violations(frame);
    report.violations.insert(report.violations.end(), violations.begin(),
                             violations.end());

    const auto [it, inserted] = seen.emplace(key, i);
    if (!inserted)
      report.violations.push_back(
          {GtRule::duplicate_frame_key, key,
           "frame key " + key.str() + " already used by frame " +
               std::to_string(it->second)});

    // Scenario 1: single-person frames carry no interaction annotation.
    if (frame.persons.size() == 1 && !frame.groups.empty())
      report.warnings.push_back(
          {"scenario1", key,
           "frame with a single person should contain no groups"});

    // Scenario 2: two labeled people and no group looks like a missed
    // annotation; two-person frames may still contain non-interacting people.
    if (frame.persons.size() == 2 && frame.groups.empty() &&
        !frame.persons[0].actions.empty() && !frame.persons[1].actions.empty())
      report.warnings.push_back(
          {"scenario2", key,
           "two labeled persons but no interactive group recorded"});
  }
  return report;
}

DatasetStats dataset_stats(const std::vector<FrameGroundTruth>& frames) {
  DatasetStats stats;
  stats.num_frames = frames.size();
  std::set<int> categories;
  std::size_t member_sum = 0;
  for (const auto& frame : frames) {
    stats.max_groups_per_frame =
        std::max(stats.max_groups_per_frame, frame.groups.size());
    stats.num_groups_total += frame.groups.size();
    for (const auto& group : frame.groups) {
      stats.max_people_per_group =
          std::max(stats.max_people_per_group, group.size());
      member_sum += group.size();
    }
    for (const auto& person : frame.persons)
      categories.insert(person.actions.begin(), person.actions.end());
  }
  stats.num_interaction_categories_present = categories.size();
  stats.mean_people_per_group =
      stats.num_groups_total == 0
          ? 0.0
          : static_cast<double>(member_sum) /
                static_cast<double>(stats.num_groups_total);
  return stats;
}

FramePrediction filter_prediction(const FramePrediction& frame, double person_thr,
                                  double group_thr, std::size_t min_group_size) {
  FramePrediction out;
  out.video_id = frame.video_id;
  out.timestamp = frame.timestamp;
  std::vector<std::size_t> new_index(frame.persons.size(), frame.persons.size());
  for (std::size_t i = 0; i < frame.persons.size(); ++i) {
    if (frame.persons[i].score < person_thr) continue;
    new_index[i] = out.persons.size();
    out.persons.push_back(frame.persons[i]);
  }
  for (const auto& group : frame.groups) {
    if (group.score < group_thr) continue;
    GroupPrediction kept;
    kept.score = group.score;
    kept.box = group.box;
    for (const std::size_t m : group.members)
      if (m < new_index.size() && new_index[m] < frame.persons.size())
        kept.members.push_back(new_index[m]);
    if (kept.members.size() < min_group_size) continue;
    out.groups.push_back(std::move(kept));
  }
  return out;
}

}  // namespace hid
