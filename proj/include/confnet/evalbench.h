// confnet/evalbench.h

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

#ifndef CONFNET_EVALBENCH_H_
#define CONFNET_EVALBENCH_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "confnet/checkpoint.h"
#include "confnet/datagen.h"

namespace confnet {

struct EvalReport {
  double joint_goal = 0.0;
  double turn_inform = 0.0;
  double turn_request = 0.0;
  int n_turns = 0;
  std::map<std::string, double> timing;  // mode -> seconds per batch
};

nlohmann::json eval_report_to_json(const EvalReport& r);
EvalReport eval_report_from_json(const nlohmann::json& j);

/// Inference mode: "confnet" (checkpoint's truncation), "confnet-K"
/// (truncate to K arcs), or "asr-N" (N-best-list aggregation).
struct EvalMode {
  enum class Kind { kConfnet, kAsrN };
  Kind kind = Kind::kConfnet;
  int asr_n = 1;
  std::optional<int> max_arcs_override;
};

EvalMode parse_eval_mode(const std::string& mode);

struct EvalOptions {
  double threshold = 0.5;
  int threads = 1;
};

/// Turn-level dialogue-state metrics.
///
/// Per turn, the predicted inform set is every informable pair with
/// probability above the threshold, the predicted request set likewise
/// over the request scorers, and the predicted goal accumulates across
/// turns last-write-wins (per slot, the highest-probability value above
/// threshold, ties by ontology order).  turn_inform / turn_request are
/// exact-set-match fractions; joint_goal is the fraction of turns whose
/// accumulated goal map equals gold.
EvalReport evaluate(const Checkpoint& ckpt,
                    const std::vector<Dialogue>& corpus, const EvalMode& mode,
                    const EvalOptions& opts = {});

struct SeedAggregate {
  struct Stat {
    double mean = 0.0;
    double se = 0.0;  // sample standard deviation / sqrt(runs)
  };
  Stat joint_goal;
  Stat turn_inform;
  Stat turn_request;
  int runs = 0;
};

/// Mean and standard error over >= 2 per-seed reports.
SeedAggregate aggregate_seeds(const std::vector<EvalReport>& reports);

nlohmann::json seed_aggregate_to_json(const SeedAggregate& agg);

/// Median wall-clock seconds per batch for each mode, over `repetitions`
/// timed passes after one warm-up pass.  Hypothesis-list extraction and
/// arc truncation are dataset preparation and happen outside the timed
/// region; the timed region is the model inference itself.  Single
/// threaded so modes compare like for like.
std::map<std::string, double> bench_inference(
    const Checkpoint& ckpt, const std::vector<Dialogue>& corpus,
    const std::vector<std::string>& modes, int batch_size, int repetitions);

/// Attention heat map as CSV: one column per position, rows are arcs
/// sorted by ASR score descending (row 1 is the best pass through the
/// network), each cell "token:weight".  Ragged columns pad with empty
/// cells.  Requires an attention variant (V3/V4).
std::string dump_attention(const Checkpoint& ckpt,
                           const ConfusionNetwork& net);

}  // namespace confnet

#endif  // CONFNET_EVALBENCH_H_
