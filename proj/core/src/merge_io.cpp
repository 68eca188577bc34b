#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hid/errors.hpp"
#include "hid/merge.hpp"
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

double number_at(const json& j, const char* field, std::size_t lineno) {
  if (!j.is_number()) throw ParseError(std::string(field) + " must be a number", lineno);
  const double v = j.get<double>();
  if (!std::isfinite(v))
    throw ParseError(std::string(field) + " must be finite", lineno);
  return v;
}

BBox box_at(const json& j, const char* field, std::size_t lineno,
            std::vector<std::string>* warnings) {
  if (!j.is_array() || j.size() != 4)
    throw ParseError(std::string(field) + " must be [x1,y1,x2,y2]", lineno);
  double c[4];
  for (std::size_t i = 0; i < 4; ++i) c[i] = number_at(j[i], field, lineno);
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

FrameKey key_at(const json& j, std::size_t lineno) {
  if (!j.contains("video_id") || !j["video_id"].is_string() ||
      j["video_id"].get<std::string>().empty())
    throw ParseError("video_id must be a non-empty string", lineno);
  if (!j.contains("timestamp") || !j["timestamp"].is_number_integer())
    throw ParseError("timestamp must be an integer", lineno);
  return {j["video_id"].get<std::string>(), j["timestamp"].get<std::int64_t>()};
}

std::vector<std::vector<double>> vectors_at(const json& j, const char* field,
                                            std::size_t lineno) {
  if (!j.is_array())
    throw ParseError(std::string(field) + " must be an array of vectors", lineno);
  std::vector<std::vector<double>> out;
  for (const auto& row : j) {
    if (!row.is_array())
      throw ParseError(std::string(field) + " must be an array of vectors", lineno);
    std::vector<double> v;
    v.reserve(row.size());
    for (const auto& x : row) v.push_back(number_at(x, field, lineno));
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

DetectionDataset parse_detections(std::istream& in) {
  DetectionDataset ds;
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
      const json& m = j["meta"];
      if (m.contains("num_actions")) {
        if (!m["num_actions"].is_number_integer() || m["num_actions"].get<int>() <= 0)
          throw ParseError("meta.num_actions must be a positive integer", lineno);
        ds.meta.num_actions = m["num_actions"].get<int>();
      }
      first_content_line = false;
      continue;
    }
    first_content_line = false;

    DetectionFrame frame;
    frame.key = key_at(j, lineno);

    if (!j.contains("persons") || !j["persons"].is_array())
      throw ParseError("persons must be an array", lineno);
    for (const auto& jp : j["persons"]) {
      if (!jp.is_object() || !jp.contains("box") || !jp.contains("score"))
        throw ParseError("detected person needs box and score", lineno);
      Instance inst;
      inst.box = box_at(jp["box"], "person box", lineno, &ds.warnings);
      inst.person_score = number_at(jp["score"], "person score", lineno);
      if (jp.contains("action_scores")) {
        if (!jp["action_scores"].is_array() ||
            static_cast<int>(jp["action_scores"].size()) != ds.meta.num_actions)
          throw ParseError("action_scores must hold " +
                               std::to_string(ds.meta.num_actions) + " values",
                           lineno);
        for (const auto& s : jp["action_scores"])
          inst.action_scores.push_back(number_at(s, "action score", lineno));
      } else {
        inst.action_scores.assign(static_cast<std::size_t>(ds.meta.num_actions),
                                  0.0);
      }
      frame.instances.items.push_back(std::move(inst));
    }

    if (!j.contains("groups") || !j["groups"].is_array())
      throw ParseError("groups must be an array", lineno);
    for (const auto& jg : j["groups"]) {
      if (!jg.is_object() || !jg.contains("box") || !jg.contains("score"))
        throw ParseError("detected group needs box and score", lineno);
      GroupDetection det;
      det.box = box_at(jg["box"], "group box", lineno, &ds.warnings);
      det.group_score = number_at(jg["score"], "group score", lineno);
      frame.groups.items.push_back(std::move(det));
    }
    ds.frames.push_back(std::move(frame));
  }
  return ds;
}

DetectionDataset parse_detections(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  return parse_detections(in);
}

std::vector<EmbeddingRecord> parse_embeddings(std::istream& in) {
  std::vector<EmbeddingRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = parse_json_line(line, lineno);

    EmbeddingRecord rec;
    rec.key = key_at(j, lineno);
    if (j.contains("instance_embeddings"))
      rec.instance_embeddings =
          vectors_at(j["instance_embeddings"], "instance_embeddings", lineno);
    if (j.contains("group_embeddings"))
      rec.group_embeddings =
          vectors_at(j["group_embeddings"], "group_embeddings", lineno);
    if (j.contains("theta") && !j["theta"].is_null()) {
      const auto rows = vectors_at(j["theta"], "theta", lineno);
      Matrix theta(rows.size(), rows.empty() ? 0 : rows.front().size());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != theta.cols)
          throw ParseError("theta rows differ in length", lineno);
        for (std::size_t c = 0; c < theta.cols; ++c)
          theta.at(r, c) = rows[r][c];
      }
      rec.theta = std::move(theta);
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<EmbeddingRecord> parse_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  return parse_embeddings(in);
}

AffineScorer load_affine_scorer(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  json j = json::parse(buffer.str(), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object() || !j.contains("weights") ||
      !j["weights"].is_array())
    throw ParseError("weight file must be {\"weights\": [...], \"bias\": b}");
  AffineScorer scorer;
  for (const auto& w : j["weights"])
    scorer.weights.push_back(number_at(w, "weights", 0));
  if (j.contains("bias")) scorer.bias = number_at(j["bias"], "bias", 0);
  return scorer;
}

}  // namespace hid
