// confnet/encoder.h

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

#ifndef CONFNET_ENCODER_H_
#define CONFNET_ENCODER_H_

#include <optional>
#include <string>
#include <vector>

#include "confnet/confusion-network.h"
#include "confnet/embeddings.h"
#include "confnet/numerics.h"

namespace confnet {

/// The four ways of pooling a position's parallel arcs into one vector.
///
///   V1: score-weighted sum of embeddings.
///   V2: score-weighted sum of tanh(W1 * embedding).
///   V3: self-attention over tanh(W1 * embedding); ASR scores unused.
///   V4: self-attention over tanh(W1 * (score * embedding)); ASR scores
///       enter as a feature.
enum class Variant { kV1, kV2, kV3, kV4 };

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& name);

/// Trainable encoder parameters.  V1 reads neither w1 nor w2, V2 reads
/// only w1, V3/V4 read both; unused parameters are stored but never read.
struct EncoderParams {
  Variant variant = Variant::kV1;
  Mat w1;  // d x d
  Vec w2;  // d

  int dim() const { return static_cast<int>(w2.size()); }
};

/// Seeded init: entries of w1 and w2 uniform in [-1/sqrt(d), 1/sqrt(d)].
EncoderParams init_encoder_params(Variant variant, int dim, Rng& rng);

/// One encoded position: the pooled embedding, plus the per-arc attention
/// weights for the attention variants (V3/V4).  Attention rows follow the
/// position's arc order (score descending).
struct PositionEncoding {
  Vec embedding;
  std::optional<Vec> attention;
};

PositionEncoding encode_position(const EncoderParams& params,
                                 const EmbeddingTable& table,
                                 const ArcSet& pos);

/// Encodes the whole network as a 1-D sequence, one encoding per
/// position.  Output length always equals the position count.
std::vector<PositionEncoding> encode_network(const EncoderParams& params,
                                             const EmbeddingTable& table,
                                             const ConfusionNetwork& net);

struct EncoderGrads {
  Mat w1;
  Vec w2;
};

/// Analytic gradients of sum_t upstream[t] . e_t with respect to w1 and
/// w2.  The embedding table is frozen and receives no gradient.  V1 has
/// no trainable parameters and returns zeros.
EncoderGrads encode_backward(const EncoderParams& params,
                             const EmbeddingTable& table,
                             const ConfusionNetwork& net,
                             const std::vector<Vec>& upstream);

}  // namespace confnet

#endif  // CONFNET_ENCODER_H_
