// confnet/model.h

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

#ifndef CONFNET_MODEL_H_
#define CONFNET_MODEL_H_

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "confnet/encoder.h"
#include "confnet/numerics.h"

namespace confnet {

// Slot name reserved for the requestable-slot scorers: the pair
// ("request", s) scores whether slot s is requested this turn, mirroring
// the DSTC-2 ontology convention.
inline constexpr const char* kRequestSlot = "request";

/// The informable slots and their candidate values.  The model scores
/// one binary classifier per informable (slot, value) pair plus one per
/// ("request", slot) pair.
class Ontology {
 public:
  struct Slot {
    std::string name;
    std::vector<std::string> values;
  };

  explicit Ontology(std::vector<Slot> slots);

  const std::vector<Slot>& slots() const { return slots_; }

  /// All scored pairs in scoring order: informable (slot, value) pairs
  /// first, then ("request", slot) pairs.
  const std::vector<std::pair<std::string, std::string>>& scored_pairs()
      const {
    return pairs_;
  }
  size_t num_pairs() const { return pairs_.size(); }

  bool has_pair(const std::string& slot, const std::string& value) const;
  /// Index into scored_pairs(); throws ValidationError for unknown pairs.
  size_t pair_index(const std::string& slot, const std::string& value) const;

  friend bool operator==(const Ontology& a, const Ontology& b);

 private:
  std::vector<Slot> slots_;
  std::vector<std::pair<std::string, std::string>> pairs_;
  std::unordered_map<std::string, size_t> pair_index_;
};

/// Trainable classifier parameters: the shared context encoder f
/// (wf, bf) and one (score vector, bias) per scored ontology pair.
struct ModelParams {
  Mat wf;                     // h x d
  Vec bf;                     // h
  std::vector<Vec> scorer_w;  // per pair, length h
  Vec scorer_b;               // per pair
  double lambda = 0.5;

  int hidden() const { return static_cast<int>(bf.size()); }
  int input_dim() const { return static_cast<int>(wf.cols()); }
};

ModelParams init_model_params(const Ontology& ontology, int emb_dim,
                              int hidden_dim, double lambda, Rng& rng);

/// Per-pair probabilities, aligned with Ontology::scored_pairs().
struct Prediction {
  std::vector<double> probs;

  double prob(const Ontology& ontology, const std::string& slot,
              const std::string& value) const;
};

/// The shared utterance-context map f: mean over positions of
/// tanh(wf * e_t + bf).  Both the confnet branch and the transcript
/// branch go through this same function.
Vec context(const ModelParams& params, const std::vector<Vec>& encs);
Vec context(const ModelParams& params,
            const std::vector<PositionEncoding>& encs);

Prediction predict(const ModelParams& params, const std::vector<Vec>& encs);
Prediction predict(const ModelParams& params,
                   const std::vector<PositionEncoding>& encs);

/// Mean binary cross-entropy over all scored pairs, probabilities clamped
/// to [1e-12, 1 - 1e-12] before the logs.  gold is aligned with
/// scored_pairs() and must be the same length as the prediction.
double bce_loss(const Prediction& pred, const std::vector<double>& gold);

/// Squared euclidean distance between the two branch context vectors.
double similarity_loss(const Vec& c_transcript, const Vec& c_confnet);

/// L = L1 + lambda * L2.
double combined_loss(double l1, double l2, double lambda);

/// ASR-N-list baseline: encodes each hypothesis as a single-arc confnet,
/// predicts per hypothesis, and mixes the probabilities with the
/// hypotheses' normalized path scores.
Prediction predict_asr_nlist(const ModelParams& params,
                             const EncoderParams& encoder,
                             const EmbeddingTable& table,
                             const std::vector<Path>& hyps);

struct ModelGrads {
  Mat wf;
  Vec bf;
  std::vector<Vec> scorer_w;
  Vec scorer_b;
};

ModelGrads zero_model_grads(const ModelParams& params);

/// Which branch feeds the classification loss in joint training.
enum class L1Branch { kConfnet, kBoth };

/// Forward + analytic backward for one turn.
///
/// Computes L1 on the confnet branch (and, for L1Branch::kBoth, averaged
/// with the transcript branch), L2 between the two branch contexts when
/// transcript encodings are given, and L = L1 + lambda * L2.  Model-
/// parameter gradients are accumulated into *grads when non-null; the
/// returned confnet_enc_grads feed the encoder's backward pass.  The
/// transcript branch contributes gradients only through f (its encoder
/// path is the parameter-free V1 lift over a frozen table).
struct TurnLoss {
  double l1 = 0.0;
  double l2 = 0.0;
  double loss = 0.0;
  Prediction prediction;
  std::vector<Vec> confnet_enc_grads;
};

TurnLoss model_backward(const ModelParams& params,
                        const std::vector<Vec>& confnet_encs,
                        const std::vector<Vec>& transcript_encs,
                        const std::vector<double>& gold, double lambda,
                        L1Branch l1_branch, ModelGrads* grads);

}  // namespace confnet

#endif  // CONFNET_MODEL_H_
