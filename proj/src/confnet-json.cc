// confnet/confnet-json.cc

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

#include "confnet/confnet-json.h"

#include <sstream>

#include "confnet/errors.h"

namespace confnet {

using nlohmann::json;

ConfusionNetwork confnet_from_json(const json& doc) {
  if (!doc.is_object()) throw ValidationError("confnet: document is not an object");
  if (!doc.contains("positions") || !doc["positions"].is_array()) {
    throw ValidationError("confnet: missing 'positions' array");
  }
  ConfusionNetwork net;
  if (doc.contains("utterance_id")) {
    if (!doc["utterance_id"].is_string()) {
      throw ValidationError("confnet: 'utterance_id' must be a string");
    }
    net.utterance_id = doc["utterance_id"].get<std::string>();
  }
  size_t index = 0;
  for (const json& pos : doc["positions"]) {
    std::ostringstream where;
    where << "confnet position " << index;
    if (!pos.is_array() || pos.empty()) {
      throw ValidationError(where.str() + ": expected a non-empty arc array");
    }
    std::vector<Arc> arcs;
    for (const json& aj : pos) {
      if (!aj.is_object() || !aj.contains("token") || !aj.contains("score") ||
          !aj["token"].is_string() || !aj["score"].is_number()) {
        throw ValidationError(where.str() +
                              ": arc must be {\"token\": str, \"score\": num}");
      }
      arcs.push_back(Arc{aj["token"].get<std::string>(),
                         aj["score"].get<double>()});
    }
    try {
      net.positions.emplace_back(std::move(arcs));
    } catch (const ValidationError& e) {
      throw ValidationError(where.str() + ": " + e.what());
    }
    ++index;
  }
  return net;
}

ConfusionNetwork parse_confnet(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("confnet: malformed JSON: ") + e.what());
  }
  return confnet_from_json(doc);
}

json confnet_to_json(const ConfusionNetwork& net) {
  json positions = json::array();
  for (const ArcSet& pos : net.positions) {
    json arcs = json::array();
    for (const Arc& a : pos.arcs()) {
      arcs.push_back({{"token", a.token}, {"score", a.score}});
    }
    positions.push_back(std::move(arcs));
  }
  return json{{"utterance_id", net.utterance_id},
              {"positions", std::move(positions)}};
}

std::string confnet_to_jsonl(const ConfusionNetwork& net) {
  return confnet_to_json(net).dump();
}

}  // namespace confnet
