// confnet/trainer.h

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

#ifndef CONFNET_TRAINER_H_
#define CONFNET_TRAINER_H_

#include <string>
#include <vector>

#include "confnet/checkpoint.h"
#include "confnet/datagen.h"
#include "confnet/evalbench.h"

namespace confnet {

/// Training regimes:
///   kNonAug        - noisy confnets only.
///   kAug           - noisy confnets plus every transcript lifted to a
///                    single-arc confnet (each dialogue used twice).
///   kJoint         - noisy confnets with the similarity loss pairing
///                    each turn against its own transcript (JCnet).
///   kAsrNBaseline  - N-best hypothesis lists lifted to single-arc
///                    confnets (plus transcripts), evaluated by weighted
///                    probability aggregation.
enum class Regime { kNonAug, kAug, kJoint, kAsrNBaseline };

std::string regime_name(Regime r);
Regime regime_from_name(const std::string& name);

struct TrainConfig {
  Regime regime = Regime::kNonAug;
  Variant variant = Variant::kV1;
  int max_arcs = 5;
  int asr_list_size = 5;  // baseline regime only
  double learning_rate = 0.01;
  int batch_size = 50;
  double dropout = 0.2;
  double lambda = 0.5;  // joint regime only
  int epochs = 10;
  uint64_t seed = 1;
  int emb_dim = 32;
  int hidden_dim = 32;
  std::string embeddings_path;  // optional external word vectors
  L1Branch l1_branch = L1Branch::kConfnet;
  double decision_threshold = 0.5;
};

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  EvalReport dev;
};

struct TrainReport {
  std::vector<EpochStats> epochs;
  size_t examples_per_epoch = 0;
  int best_epoch = 0;  // 0 means the seeded init (epochs == 0)
  EvalReport final_dev;
  double wall_seconds = 0.0;
  std::string checkpoint_path;
};

/// Timing lives under a separate "timing" key so reproducibility checks
/// can strip it.
nlohmann::json train_report_to_json(const TrainReport& report);

struct TrainResult {
  Checkpoint checkpoint;
  TrainReport report;
};

/// Mini-batch gradient training (Adam on the batch-mean gradients) over
/// the regime's example set.  The embedding table is frozen; w1/w2/wf/bf
/// and the scorers are updated.  Dropout is applied to the confnet
/// branch's position embeddings during training only.  Deterministic per
/// seed.  Throws NumericError (with epoch and batch) if the loss or any
/// parameter goes non-finite.
TrainResult train(const TrainConfig& config,
                  const std::vector<Dialogue>& train_corpus,
                  const std::vector<Dialogue>& dev_corpus,
                  const Ontology& ontology);

}  // namespace confnet

#endif  // CONFNET_TRAINER_H_
