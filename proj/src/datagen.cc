// confnet/datagen.cc

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

#include "confnet/datagen.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "confnet/confnet-json.h"
#include "confnet/errors.h"

namespace confnet {

using nlohmann::json;

namespace {

const std::vector<std::string>& template_words() {
  static const std::vector<std::string> kWords = {
      "i", "need", "want", "looking", "for", "what", "about",
      "is", "the", "please", "tell", "me", "something"};
  return kWords;
}

const std::vector<std::string>& slot_name_pool() {
  static const std::vector<std::string> kNames = {
      "food", "area", "pricerange", "rating", "size", "color", "kind",
      "brand"};
  return kNames;
}

const std::vector<std::string>& value_pool() {
  static const std::vector<std::string> kValues = {
      "alfa",     "bravo",    "charlie",  "delta",   "echo",     "foxtrot",
      "golf",     "hotel",    "india",    "juliett", "kilo",     "lima",
      "mike",     "november", "oscar",    "papa",    "quebec",   "romeo",
      "sierra",   "tango",    "uniform",  "victor",  "whiskey",  "xray",
      "yankee",   "zulu",     "amber",    "azure",   "beige",    "coral",
      "crimson",  "cyan",     "indigo",   "ivory",   "jade",     "lavender",
      "magenta",  "maroon",   "navy",     "ochre",   "olive",    "pearl",
      "plum",     "rose",     "ruby",     "sage",    "salmon",   "scarlet",
      "teal",     "violet",   "italian",  "chinese", "indian",   "thai",
      "french",   "mexican",  "spanish",  "greek",   "turkish",  "korean",
      "japanese", "basque",   "bronze",   "copper",  "silver",   "golden"};
  return kValues;
}

}  // namespace

Ontology default_ontology(int n_slots, int values_per_slot) {
  if (n_slots < 1 || values_per_slot < 1) {
    throw ValidationError("default_ontology: need at least one slot and value");
  }
  if (static_cast<size_t>(n_slots) > slot_name_pool().size() ||
      static_cast<size_t>(n_slots * values_per_slot) > value_pool().size()) {
    throw ValidationError("default_ontology: requested size exceeds word pool");
  }
  std::vector<Ontology::Slot> slots;
  for (int s = 0; s < n_slots; ++s) {
    Ontology::Slot slot;
    slot.name = slot_name_pool()[s];
    for (int v = 0; v < values_per_slot; ++v) {
      slot.values.push_back(value_pool()[s * values_per_slot + v]);
    }
    slots.push_back(std::move(slot));
  }
  return Ontology(std::move(slots));
}

std::vector<std::string> generator_token_pool(const Ontology& ontology) {
  std::set<std::string> pool(template_words().begin(), template_words().end());
  for (const Ontology::Slot& s : ontology.slots()) {
    pool.insert(s.name);
    pool.insert(s.values.begin(), s.values.end());
  }
  return {pool.begin(), pool.end()};
}

namespace {

// One position of synthetic confusion.  Draw order is fixed so corpora
// are reproducible per seed: substitute? -> drop truth? -> alternative
// count -> alternative tokens -> scores.
ArcSet confuse_position(const std::string& truth,
                        const std::vector<std::string>& pool,
                        const NoiseModel& noise, Rng& rng) {
  if (rng.uniform() >= noise.substitution_prob) {
    return ArcSet({{truth, 1.0}});
  }
  const bool drop_truth = rng.uniform() < noise.truth_drop_prob;
  const int n_alt = 1 + static_cast<int>(rng.uniform_int(
                            static_cast<uint64_t>(noise.max_confusions)));
  std::vector<std::string> tokens;
  std::set<std::string> used = {truth};
  while (static_cast<int>(tokens.size()) < n_alt &&
         used.size() < pool.size() + 1) {
    const std::string& cand = pool[rng.uniform_int(pool.size())];
    if (used.insert(cand).second) tokens.push_back(cand);
  }
  if (!drop_truth) tokens.push_back(truth);

  if (tokens.size() == 1) {
    return ArcSet({{tokens[0], 1.0}});
  }
  std::vector<double> raw(tokens.size());
  double sum = 0.0;
  for (double& r : raw) {
    do {
      r = rng.uniform();
    } while (r <= 0.0);
    sum += r;
  }
  std::vector<Arc> arcs;
  for (size_t i = 0; i < tokens.size(); ++i) {
    arcs.push_back({tokens[i], raw[i] / sum});
  }
  return ArcSet(std::move(arcs));
}

struct TurnDraft {
  std::vector<std::string> transcript;
  std::set<std::pair<std::string, std::string>> informs;
  std::set<std::string> requests;
};

void add_inform(TurnDraft* draft, const Ontology& ontology, Rng& rng) {
  const Ontology::Slot& slot =
      ontology.slots()[rng.uniform_int(ontology.slots().size())];
  const std::string& value = slot.values[rng.uniform_int(slot.values.size())];
  if (rng.uniform_int(2) == 0) {
    draft->transcript.insert(draft->transcript.end(),
                             {"i", "need", value, slot.name});
  } else {
    draft->transcript.insert(draft->transcript.end(), {"what", "about", value});
  }
  draft->informs.insert({slot.name, value});
}

void add_request(TurnDraft* draft, const Ontology& ontology, Rng& rng) {
  const Ontology::Slot& slot =
      ontology.slots()[rng.uniform_int(ontology.slots().size())];
  if (rng.uniform_int(2) == 0) {
    draft->transcript.insert(draft->transcript.end(),
                             {"what", "is", "the", slot.name});
  } else {
    draft->transcript.insert(draft->transcript.end(),
                             {"please", "tell", "me", "the", slot.name});
  }
  draft->requests.insert(slot.name);
}

}  // namespace

std::vector<Dialogue> generate_corpus(const Ontology& ontology,
                                      int n_dialogues,
                                      const NoiseModel& noise, Rng& rng) {
  if (n_dialogues < 1) {
    throw ValidationError("generate_corpus: n_dialogues must be >= 1");
  }
  if (ontology.slots().empty()) {
    throw ValidationError("generate_corpus: empty ontology");
  }
  if (noise.substitution_prob < 0.0 || noise.substitution_prob > 1.0 ||
      noise.truth_drop_prob < 0.0 || noise.truth_drop_prob > 1.0 ||
      noise.max_confusions < 1) {
    throw ValidationError("generate_corpus: noise model out of range");
  }
  const std::vector<std::string> pool = generator_token_pool(ontology);

  std::vector<Dialogue> corpus;
  corpus.reserve(n_dialogues);
  for (int di = 0; di < n_dialogues; ++di) {
    Dialogue d;
    std::ostringstream id;
    id << "dlg-" << di;
    d.dialogue_id = id.str();

    std::map<std::string, std::string> goal;
    const int n_turns = 1 + static_cast<int>(rng.uniform_int(5));
    for (int ti = 0; ti < n_turns; ++ti) {
      TurnDraft draft;
      const double act = rng.uniform();
      if (act < 0.60) {
        add_inform(&draft, ontology, rng);
      } else if (act < 0.70) {
        add_inform(&draft, ontology, rng);
        add_inform(&draft, ontology, rng);
      } else if (act < 0.90) {
        add_request(&draft, ontology, rng);
      } else {
        add_inform(&draft, ontology, rng);
        add_request(&draft, ontology, rng);
      }

      Turn turn;
      turn.transcript = draft.transcript;
      std::ostringstream uid;
      uid << d.dialogue_id << "-t" << ti;
      turn.confnet.utterance_id = uid.str();
      for (const std::string& tok : draft.transcript) {
        turn.confnet.positions.push_back(
            confuse_position(tok, pool, noise, rng));
      }
      turn.turn_inform.assign(draft.informs.begin(), draft.informs.end());
      turn.turn_request.assign(draft.requests.begin(), draft.requests.end());
      for (const auto& [slot, value] : draft.informs) goal[slot] = value;
      turn.gold_goal = goal;
      d.turns.push_back(std::move(turn));
    }
    corpus.push_back(std::move(d));
  }
  return corpus;
}

std::vector<Dialogue> augment(const std::vector<Dialogue>& corpus) {
  if (corpus.empty()) throw ValidationError("augment: empty corpus");
  std::vector<Dialogue> out = corpus;
  out.reserve(2 * corpus.size());
  for (const Dialogue& d : corpus) {
    Dialogue clean;
    clean.dialogue_id = d.dialogue_id + "-clean";
    clean.turns.reserve(d.turns.size());
    for (const Turn& t : d.turns) {
      Turn ct = t;
      ct.confnet =
          from_transcript(t.transcript, t.confnet.utterance_id + "-clean");
      clean.turns.push_back(std::move(ct));
    }
    out.push_back(std::move(clean));
  }
  return out;
}

namespace {

json turn_to_json(const Turn& t) {
  json informs = json::array();
  for (const auto& [s, v] : t.turn_inform) {
    informs.push_back(json::array({s, v}));
  }
  json goal = json::object();
  for (const auto& [s, v] : t.gold_goal) goal[s] = v;
  return json{{"transcript", t.transcript},
              {"confnet", confnet_to_json(t.confnet)},
              {"turn_inform", std::move(informs)},
              {"turn_request", t.turn_request},
              {"gold_goal", std::move(goal)}};
}

Turn turn_from_json(const json& j) {
  if (!j.is_object() || !j.contains("transcript") || !j.contains("confnet") ||
      !j.contains("turn_inform") || !j.contains("turn_request") ||
      !j.contains("gold_goal")) {
    throw ValidationError("turn: missing required field");
  }
  Turn t;
  t.transcript = j["transcript"].get<std::vector<std::string>>();
  t.confnet = confnet_from_json(j["confnet"]);
  for (const json& pair : j["turn_inform"]) {
    if (!pair.is_array() || pair.size() != 2) {
      throw ValidationError("turn: turn_inform entries must be [slot, value]");
    }
    t.turn_inform.emplace_back(pair[0].get<std::string>(),
                               pair[1].get<std::string>());
  }
  t.turn_request = j["turn_request"].get<std::vector<std::string>>();
  for (const auto& [slot, value] : j["gold_goal"].items()) {
    t.gold_goal[slot] = value.get<std::string>();
  }
  std::sort(t.turn_inform.begin(), t.turn_inform.end());
  std::sort(t.turn_request.begin(), t.turn_request.end());
  return t;
}

}  // namespace

std::vector<Dialogue> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("load_corpus: cannot read '" + path + "'");
  std::vector<Dialogue> corpus;
  std::set<std::string> ids;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::ostringstream where;
    where << "load_corpus: " << path << " line " << lineno << ": ";
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ValidationError(where.str() + "malformed JSON: " + e.what());
    }
    try {
      if (!j.is_object() || !j.contains("dialogue_id") ||
          !j.contains("turns") || !j["turns"].is_array()) {
        throw ValidationError("missing 'dialogue_id' or 'turns'");
      }
      Dialogue d;
      d.dialogue_id = j["dialogue_id"].get<std::string>();
      if (!ids.insert(d.dialogue_id).second) {
        throw ValidationError("duplicate dialogue_id '" + d.dialogue_id + "'");
      }
      for (const json& tj : j["turns"]) d.turns.push_back(turn_from_json(tj));
      if (d.turns.empty()) throw ValidationError("dialogue has no turns");
      corpus.push_back(std::move(d));
    } catch (const ValidationError& e) {
      throw ValidationError(where.str() + e.what());
    } catch (const json::exception& e) {
      throw ValidationError(where.str() + e.what());
    }
  }
  return corpus;
}

void save_corpus(const std::vector<Dialogue>& corpus,
                 const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("save_corpus: cannot write '" + path + "'");
  for (const Dialogue& d : corpus) {
    json turns = json::array();
    for (const Turn& t : d.turns) turns.push_back(turn_to_json(t));
    out << json{{"dialogue_id", d.dialogue_id}, {"turns", std::move(turns)}}
               .dump()
        << "\n";
  }
  if (!out) throw ValidationError("save_corpus: write failed for '" + path + "'");
}

std::vector<std::string> corpus_tokens(const std::vector<Dialogue>& corpus) {
  std::set<std::string> tokens;
  for (const Dialogue& d : corpus) {
    for (const Turn& t : d.turns) {
      tokens.insert(t.transcript.begin(), t.transcript.end());
      for (const ArcSet& pos : t.confnet.positions) {
        for (const Arc& a : pos.arcs()) tokens.insert(a.token);
      }
    }
  }
  return {tokens.begin(), tokens.end()};
}

std::vector<double> gold_vector(const Ontology& ontology, const Turn& turn) {
  std::vector<double> gold(ontology.num_pairs(), 0.0);
  for (const auto& [slot, value] : turn.turn_inform) {
    gold[ontology.pair_index(slot, value)] = 1.0;
  }
  for (const std::string& slot : turn.turn_request) {
    gold[ontology.pair_index(kRequestSlot, slot)] = 1.0;
  }
  return gold;
}

}  // namespace confnet
