// confnet/encoder.cc

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

#include "confnet/encoder.h"

#include <cmath>

#include "confnet/errors.h"

namespace confnet {

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::kV1: return "v1";
    case Variant::kV2: return "v2";
    case Variant::kV3: return "v3";
    case Variant::kV4: return "v4";
  }
  return "v1";
}

Variant variant_from_name(const std::string& name) {
  if (name == "v1") return Variant::kV1;
  if (name == "v2") return Variant::kV2;
  if (name == "v3") return Variant::kV3;
  if (name == "v4") return Variant::kV4;
  throw ValidationError("unknown encoder variant '" + name + "'");
}

EncoderParams init_encoder_params(Variant variant, int dim, Rng& rng) {
  if (dim < 2) throw ValidationError("init_encoder_params: dim must be >= 2");
  const double bound = 1.0 / std::sqrt(static_cast<double>(dim));
  EncoderParams p;
  p.variant = variant;
  p.w1.resize(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      p.w1(r, c) = rng.uniform(-bound, bound);
    }
  }
  p.w2.resize(dim);
  for (Eigen::Index i = 0; i < dim; ++i) p.w2(i) = rng.uniform(-bound, bound);
  return p;
}

namespace {

void check_dims(const EncoderParams& params, const EmbeddingTable& table) {
  if (params.w1.rows() != params.w1.cols() ||
      params.w1.rows() != params.w2.size()) {
    throw ValidationError("encoder: w1/w2 dimensions disagree");
  }
  if (table.dim() != params.dim()) {
    throw ValidationError("encoder: embedding dim does not match parameters");
  }
}

}  // namespace

PositionEncoding encode_position(const EncoderParams& params,
                                 const EmbeddingTable& table,
                                 const ArcSet& pos) {
  check_dims(params, table);
  const int d = params.dim();
  const size_t n = pos.size();

  PositionEncoding out;
  switch (params.variant) {
    case Variant::kV1: {
      Vec e = Vec::Zero(d);
      for (const Arc& a : pos.arcs()) e += a.score * table.lookup(a.token);
      out.embedding = std::move(e);
      break;
    }
    case Variant::kV2: {
      Vec e = Vec::Zero(d);
      for (const Arc& a : pos.arcs()) {
        e += a.score * (params.w1 * table.lookup(a.token)).array().tanh().matrix();
      }
      out.embedding = std::move(e);
      break;
    }
    case Variant::kV3:
    case Variant::kV4: {
      // q_i = tanh(W1 x_i) with x_i the raw embedding for V3 and the
      // score-weighted embedding for V4.
      std::vector<Vec> q(n);
      Vec logits(n);
      for (size_t i = 0; i < n; ++i) {
        const Arc& a = pos.arcs()[i];
        Vec x = table.lookup(a.token);
        if (params.variant == Variant::kV4) x *= a.score;
        q[i] = (params.w1 * x).array().tanh().matrix();
        logits(static_cast<Eigen::Index>(i)) = params.w2.dot(q[i]);
      }
      Vec alpha = softmax(logits);
      Vec e = Vec::Zero(d);
      for (size_t i = 0; i < n; ++i) {
        e += alpha(static_cast<Eigen::Index>(i)) * q[i];
      }
      out.embedding = std::move(e);
      out.attention = std::move(alpha);
      break;
    }
  }
  return out;
}

std::vector<PositionEncoding> encode_network(const EncoderParams& params,
                                             const EmbeddingTable& table,
                                             const ConfusionNetwork& net) {
  std::vector<PositionEncoding> out;
  out.reserve(net.positions.size());
  for (const ArcSet& pos : net.positions) {
    out.push_back(encode_position(params, table, pos));
  }
  return out;
}

EncoderGrads encode_backward(const EncoderParams& params,
                             const EmbeddingTable& table,
                             const ConfusionNetwork& net,
                             const std::vector<Vec>& upstream) {
  check_dims(params, table);
  if (upstream.size() != net.positions.size()) {
    throw ValidationError("encode_backward: upstream length != position count");
  }
  const int d = params.dim();
  EncoderGrads g;
  g.w1 = Mat::Zero(d, d);
  g.w2 = Vec::Zero(d);
  if (params.variant == Variant::kV1) return g;

  for (size_t t = 0; t < net.positions.size(); ++t) {
    const ArcSet& pos = net.positions[t];
    const Vec& gu = upstream[t];
    if (gu.size() != d) {
      throw ValidationError("encode_backward: upstream gradient has wrong dim");
    }

    if (params.variant == Variant::kV2) {
      // e = sum_i pi_i tanh(W1 x_i)
      for (const Arc& a : pos.arcs()) {
        Vec x = table.lookup(a.token);
        Vec h = (params.w1 * x).array().tanh().matrix();
        Vec du = a.score * gu.cwiseProduct((1.0 - h.array().square()).matrix());
        g.w1.noalias() += du * x.transpose();
      }
      continue;
    }

    // V3/V4: e = sum_i alpha_i q_i, alpha = softmax(w2 . q).
    const size_t n = pos.size();
    std::vector<Vec> x(n), q(n);
    Vec logits(n);
    for (size_t i = 0; i < n; ++i) {
      const Arc& a = pos.arcs()[i];
      x[i] = table.lookup(a.token);
      if (params.variant == Variant::kV4) x[i] *= a.score;
      q[i] = (params.w1 * x[i]).array().tanh().matrix();
      logits(static_cast<Eigen::Index>(i)) = params.w2.dot(q[i]);
    }
    Vec alpha = softmax(logits);

    // d(loss)/d(alpha_i) and softmax jacobian transpose.
    Vec dalpha(n);
    for (size_t i = 0; i < n; ++i) {
      dalpha(static_cast<Eigen::Index>(i)) = gu.dot(q[i]);
    }
    const double mixed = alpha.dot(dalpha);
    Vec dlogits = alpha.cwiseProduct((dalpha.array() - mixed).matrix());

    for (size_t i = 0; i < n; ++i) {
      const Eigen::Index ei = static_cast<Eigen::Index>(i);
      Vec dq = alpha(ei) * gu + dlogits(ei) * params.w2;
      Vec du = dq.cwiseProduct((1.0 - q[i].array().square()).matrix());
      g.w1.noalias() += du * x[i].transpose();
      g.w2.noalias() += dlogits(ei) * q[i];
    }
  }
  return g;
}

}  // namespace confnet
