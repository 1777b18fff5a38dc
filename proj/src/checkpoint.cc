// confnet/checkpoint.cc

// Copyright 2026  The Confnet-DST Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "confnet/checkpoint.h"

#include <fstream>

#include "confnet/errors.h"

namespace confnet {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;
constexpr const char* kFormatName = "confnet-dst-checkpoint";

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw ValidationError("checkpoint: '" + what + "' must be a 2-D array");
  }
  const size_t rows = j.size();
  const size_t cols = j[0].size();
  Mat m(rows, cols);
  for (size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) {
      throw ValidationError("checkpoint: ragged rows in '" + what + "'");
    }
    for (size_t c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

json vec_to_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Vec vec_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) {
    throw ValidationError("checkpoint: '" + what + "' must be an array");
  }
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

}  // namespace

json ontology_to_json(const Ontology& ontology) {
  json slots = json::array();
  for (const Ontology::Slot& s : ontology.slots()) {
    slots.push_back({{"name", s.name}, {"values", s.values}});
  }
  return json{{"slots", std::move(slots)}};
}

Ontology ontology_from_json(const json& j) {
  if (!j.is_object() || !j.contains("slots") || !j["slots"].is_array()) {
    throw ValidationError("ontology: missing 'slots' array");
  }
  std::vector<Ontology::Slot> slots;
  for (const json& sj : j["slots"]) {
    if (!sj.is_object() || !sj.contains("name") || !sj.contains("values")) {
      throw ValidationError("ontology: slot needs 'name' and 'values'");
    }
    slots.push_back(Ontology::Slot{
        sj["name"].get<std::string>(),
        sj["values"].get<std::vector<std::string>>()});
  }
  return Ontology(std::move(slots));
}

Ontology load_ontology(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("load_ontology: cannot read '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("load_ontology: malformed JSON in '" + path +
                          "': " + e.what());
  }
  return ontology_from_json(j);
}

void save_ontology(const Ontology& ontology, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("save_ontology: cannot write '" + path + "'");
  out << ontology_to_json(ontology).dump(2) << "\n";
}

json checkpoint_to_json(const Checkpoint& ckpt) {
  json scorers = json::array();
  const auto& pairs = ckpt.ontology.scored_pairs();
  for (size_t k = 0; k < pairs.size(); ++k) {
    scorers.push_back({{"slot", pairs[k].first},
                       {"value", pairs[k].second},
                       {"w", vec_to_json(ckpt.model.scorer_w[k])},
                       {"b", ckpt.model.scorer_b(k)}});
  }
  return json{
      {"format", kFormatName},
      {"version", kFormatVersion},
      {"variant", variant_name(ckpt.encoder.variant)},
      {"emb_dim", ckpt.table.dim()},
      {"hidden_dim", ckpt.model.hidden()},
      {"lambda", ckpt.model.lambda},
      {"max_arcs", ckpt.max_arcs},
      {"ontology", ontology_to_json(ckpt.ontology)},
      {"vocab", ckpt.table.vocab().tokens()},
      {"embedding", mat_to_json(ckpt.table.matrix())},
      {"encoder",
       {{"w1", mat_to_json(ckpt.encoder.w1)},
        {"w2", vec_to_json(ckpt.encoder.w2)}}},
      {"model",
       {{"wf", mat_to_json(ckpt.model.wf)},
        {"bf", vec_to_json(ckpt.model.bf)},
        {"scorers", std::move(scorers)}}}};
}

Checkpoint checkpoint_from_json(const json& j) {
  if (!j.is_object() || j.value("format", "") != kFormatName) {
    throw ValidationError("checkpoint: not a " + std::string(kFormatName) +
                          " document");
  }
  if (j.value("version", -1) != kFormatVersion) {
    throw ValidationError("checkpoint: unsupported version");
  }
  for (const char* key :
       {"variant", "ontology", "vocab", "embedding", "encoder", "model",
        "lambda", "max_arcs"}) {
    if (!j.contains(key)) {
      throw ValidationError(std::string("checkpoint: missing '") + key + "'");
    }
  }

  Ontology ontology = ontology_from_json(j["ontology"]);
  Vocabulary vocab(j["vocab"].get<std::vector<std::string>>());
  EmbeddingTable table(std::move(vocab),
                       mat_from_json(j["embedding"], "embedding"));

  EncoderParams enc;
  enc.variant = variant_from_name(j["variant"].get<std::string>());
  enc.w1 = mat_from_json(j["encoder"]["w1"], "encoder.w1");
  enc.w2 = vec_from_json(j["encoder"]["w2"], "encoder.w2");

  ModelParams model;
  model.lambda = j["lambda"].get<double>();
  model.wf = mat_from_json(j["model"]["wf"], "model.wf");
  model.bf = vec_from_json(j["model"]["bf"], "model.bf");
  const json& scorers = j["model"]["scorers"];
  const auto& pairs = ontology.scored_pairs();
  if (!scorers.is_array() || scorers.size() != pairs.size()) {
    throw ValidationError("checkpoint: scorer count does not match ontology");
  }
  model.scorer_w.resize(pairs.size());
  model.scorer_b = Vec::Zero(pairs.size());
  for (size_t k = 0; k < pairs.size(); ++k) {
    const json& sk = scorers[k];
    if (sk.value("slot", "") != pairs[k].first ||
        sk.value("value", "") != pairs[k].second) {
      throw ValidationError("checkpoint: scorer order does not match ontology");
    }
    model.scorer_w[k] = vec_from_json(sk["w"], "scorer w");
    model.scorer_b(k) = sk["b"].get<double>();
  }

  const int max_arcs = j["max_arcs"].get<int>();
  Checkpoint ckpt(std::move(ontology), std::move(table), std::move(enc),
                  std::move(model), max_arcs);

  if (ckpt.encoder.dim() != ckpt.table.dim() ||
      ckpt.model.input_dim() != ckpt.table.dim()) {
    throw ValidationError("checkpoint: inconsistent dimensions");
  }
  return ckpt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw ValidationError("save_checkpoint: cannot write '" + path + "'");
  }
  out << checkpoint_to_json(ckpt).dump() << "\n";
  if (!out) {
    throw ValidationError("save_checkpoint: write failed for '" + path + "'");
  }
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("load_checkpoint: cannot read '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ValidationError("load_checkpoint: malformed JSON in '" + path +
                          "': " + e.what());
  }
  return checkpoint_from_json(j);
}

}  // namespace confnet
