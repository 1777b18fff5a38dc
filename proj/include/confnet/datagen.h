// confnet/datagen.h

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

#ifndef CONFNET_DATAGEN_H_
#define CONFNET_DATAGEN_H_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "confnet/confusion-network.h"
#include "confnet/model.h"
#include "confnet/numerics.h"

namespace confnet {

/// One user turn: the clean transcript, its (possibly noisy) confnet, and
/// the gold dialogue-state labels.  gold_goal is the accumulated user
/// goal after this turn (last write wins per slot).
struct Turn {
  std::vector<std::string> transcript;
  ConfusionNetwork confnet;
  std::vector<std::pair<std::string, std::string>> turn_inform;  // sorted
  std::vector<std::string> turn_request;                         // sorted
  std::map<std::string, std::string> gold_goal;

  friend bool operator==(const Turn& a, const Turn& b) {
    return a.transcript == b.transcript && a.confnet == b.confnet &&
           a.turn_inform == b.turn_inform && a.turn_request == b.turn_request &&
           a.gold_goal == b.gold_goal;
  }
};

struct Dialogue {
  std::string dialogue_id;
  std::vector<Turn> turns;

  friend bool operator==(const Dialogue& a, const Dialogue& b) {
    return a.dialogue_id == b.dialogue_id && a.turns == b.turns;
  }
};

/// Synthetic ASR confusion: each transcript position is independently
/// substituted with probability substitution_prob by a set of up to
/// max_confusions alternative arcs with random scores summing to 1; the
/// true token is excluded from that set with probability truth_drop_prob.
struct NoiseModel {
  double substitution_prob = 0.0;
  int max_confusions = 1;
  double truth_drop_prob = 0.0;
};

/// Fixed small ontology for desk-scale experiments: n_slots slots with
/// values_per_slot single-token values each, drawn from a built-in word
/// pool.
Ontology default_ontology(int n_slots, int values_per_slot);

/// Every token the generator can emit for the given ontology (template
/// words, slot names, values).  Confusion alternatives are sampled from
/// this pool.
std::vector<std::string> generator_token_pool(const Ontology& ontology);

/// Template-generated dialogues of 1-5 turns each, deterministic per
/// seed.
std::vector<Dialogue> generate_corpus(const Ontology& ontology,
                                      int n_dialogues,
                                      const NoiseModel& noise, Rng& rng);

/// Transcript augmentation: the original dialogues followed by copies
/// whose confnets are the transcripts lifted to single-arc networks.
/// Output size is exactly twice the input; copies get "-clean" appended
/// to their dialogue ids.
std::vector<Dialogue> augment(const std::vector<Dialogue>& corpus);

// JSONL corpus I/O, one dialogue per line:
//   {"dialogue_id": str,
//    "turns": [{"transcript": [str], "confnet": {...},
//               "turn_inform": [[slot, value]], "turn_request": [slot],
//               "gold_goal": {slot: value}}]}
std::vector<Dialogue> load_corpus(const std::string& path);
void save_corpus(const std::vector<Dialogue>& corpus, const std::string& path);

/// Sorted unique tokens over all transcripts and confnet arcs.
std::vector<std::string> corpus_tokens(const std::vector<Dialogue>& corpus);

/// Gold labels for one turn as a 0/1 vector aligned with
/// Ontology::scored_pairs().  Throws if a label is not in the ontology.
std::vector<double> gold_vector(const Ontology& ontology, const Turn& turn);

}  // namespace confnet

#endif  // CONFNET_DATAGEN_H_
