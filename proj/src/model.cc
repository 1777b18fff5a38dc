// confnet/model.cc

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

#include "confnet/model.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "confnet/errors.h"

namespace confnet {

namespace {

constexpr double kProbClamp = 1e-12;

std::string pair_key(const std::string& slot, const std::string& value) {
  return slot + "\x1f" + value;
}

std::vector<Vec> embeddings_of(const std::vector<PositionEncoding>& encs) {
  std::vector<Vec> out;
  out.reserve(encs.size());
  for (const PositionEncoding& e : encs) out.push_back(e.embedding);
  return out;
}

}  // namespace

Ontology::Ontology(std::vector<Slot> slots) : slots_(std::move(slots)) {
  std::set<std::string> names;
  for (const Slot& s : slots_) {
    if (s.name.empty()) throw ValidationError("Ontology: empty slot name");
    if (s.name == kRequestSlot) {
      throw ValidationError(
          "Ontology: slot name 'request' is reserved for request scorers");
    }
    if (!names.insert(s.name).second) {
      throw ValidationError("Ontology: duplicate slot '" + s.name + "'");
    }
    if (s.values.empty()) {
      throw ValidationError("Ontology: slot '" + s.name + "' has no values");
    }
    std::set<std::string> vals;
    for (const std::string& v : s.values) {
      if (v.empty() || !vals.insert(v).second) {
        throw ValidationError("Ontology: bad value list for slot '" + s.name +
                              "'");
      }
    }
  }
  for (const Slot& s : slots_) {
    for (const std::string& v : s.values) pairs_.emplace_back(s.name, v);
  }
  for (const Slot& s : slots_) pairs_.emplace_back(kRequestSlot, s.name);
  for (size_t i = 0; i < pairs_.size(); ++i) {
    pair_index_.emplace(pair_key(pairs_[i].first, pairs_[i].second), i);
  }
}

bool Ontology::has_pair(const std::string& slot,
                        const std::string& value) const {
  return pair_index_.count(pair_key(slot, value)) != 0;
}

size_t Ontology::pair_index(const std::string& slot,
                            const std::string& value) const {
  auto it = pair_index_.find(pair_key(slot, value));
  if (it == pair_index_.end()) {
    throw ValidationError("Ontology: unknown pair (" + slot + ", " + value +
                          ")");
  }
  return it->second;
}

bool operator==(const Ontology& a, const Ontology& b) {
  if (a.slots_.size() != b.slots_.size()) return false;
  for (size_t i = 0; i < a.slots_.size(); ++i) {
    if (a.slots_[i].name != b.slots_[i].name ||
        a.slots_[i].values != b.slots_[i].values) {
      return false;
    }
  }
  return true;
}

ModelParams init_model_params(const Ontology& ontology, int emb_dim,
                              int hidden_dim, double lambda, Rng& rng) {
  if (emb_dim < 2 || hidden_dim < 1) {
    throw ValidationError("init_model_params: bad dimensions");
  }
  ModelParams p;
  p.lambda = lambda;
  const double in_bound = 1.0 / std::sqrt(static_cast<double>(emb_dim));
  p.wf.resize(hidden_dim, emb_dim);
  for (Eigen::Index r = 0; r < p.wf.rows(); ++r) {
    for (Eigen::Index c = 0; c < p.wf.cols(); ++c) {
      p.wf(r, c) = rng.uniform(-in_bound, in_bound);
    }
  }
  p.bf = Vec::Zero(hidden_dim);
  const double h_bound = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  p.scorer_w.resize(ontology.num_pairs());
  for (Vec& w : p.scorer_w) {
    w.resize(hidden_dim);
    for (Eigen::Index i = 0; i < hidden_dim; ++i) {
      w(i) = rng.uniform(-h_bound, h_bound);
    }
  }
  p.scorer_b = Vec::Zero(ontology.num_pairs());
  return p;
}

double Prediction::prob(const Ontology& ontology, const std::string& slot,
                        const std::string& value) const {
  return probs.at(ontology.pair_index(slot, value));
}

Vec context(const ModelParams& params, const std::vector<Vec>& encs) {
  if (encs.empty()) throw ValidationError("context: empty encoding sequence");
  Vec c = Vec::Zero(params.hidden());
  for (const Vec& e : encs) {
    if (e.size() != params.input_dim()) {
      throw ValidationError("context: encoding dim does not match wf");
    }
    c += ((params.wf * e + params.bf).array().tanh()).matrix();
  }
  return c / static_cast<double>(encs.size());
}

Vec context(const ModelParams& params,
            const std::vector<PositionEncoding>& encs) {
  return context(params, embeddings_of(encs));
}

namespace {

Prediction predict_from_context(const ModelParams& params, const Vec& c) {
  Prediction out;
  out.probs.resize(params.scorer_w.size());
  for (size_t k = 0; k < params.scorer_w.size(); ++k) {
    out.probs[k] = sigmoid(c.dot(params.scorer_w[k]) + params.scorer_b(k));
  }
  return out;
}

}  // namespace

Prediction predict(const ModelParams& params, const std::vector<Vec>& encs) {
  return predict_from_context(params, context(params, encs));
}

Prediction predict(const ModelParams& params,
                   const std::vector<PositionEncoding>& encs) {
  return predict(params, embeddings_of(encs));
}

double bce_loss(const Prediction& pred, const std::vector<double>& gold) {
  if (pred.probs.size() != gold.size()) {
    throw ValidationError("bce_loss: gold labels do not cover every pair");
  }
  if (pred.probs.empty()) throw ValidationError("bce_loss: empty prediction");
  double sum = 0.0;
  for (size_t k = 0; k < pred.probs.size(); ++k) {
    const double p =
        std::clamp(pred.probs[k], kProbClamp, 1.0 - kProbClamp);
    sum += -(gold[k] * std::log(p) + (1.0 - gold[k]) * std::log(1.0 - p));
  }
  return sum / static_cast<double>(pred.probs.size());
}

double similarity_loss(const Vec& c_transcript, const Vec& c_confnet) {
  if (c_transcript.size() != c_confnet.size()) {
    throw ValidationError("similarity_loss: dimension mismatch");
  }
  return (c_transcript - c_confnet).squaredNorm();
}

double combined_loss(double l1, double l2, double lambda) {
  if (!std::isfinite(l1) || !std::isfinite(l2) || !std::isfinite(lambda)) {
    throw NumericError("combined_loss: non-finite input");
  }
  return l1 + lambda * l2;
}

Prediction predict_asr_nlist(const ModelParams& params,
                             const EncoderParams& encoder,
                             const EmbeddingTable& table,
                             const std::vector<Path>& hyps) {
  if (hyps.empty()) throw ValidationError("predict_asr_nlist: empty list");
  double wsum = 0.0;
  for (const Path& h : hyps) wsum += h.score;
  if (!(wsum > 0.0)) {
    throw ValidationError("predict_asr_nlist: hypothesis scores sum to zero");
  }
  Prediction out;
  out.probs.assign(params.scorer_w.size(), 0.0);
  for (const Path& h : hyps) {
    // An all-epsilon hypothesis has no tokens; encode it as a lone null
    // arc so the context map still has one position to pool.
    const std::vector<std::string>& toks =
        h.tokens.empty() ? std::vector<std::string>{kEpsToken} : h.tokens;
    Prediction p =
        predict(params, encode_network(encoder, table, from_transcript(toks)));
    const double w = h.score / wsum;
    for (size_t k = 0; k < out.probs.size(); ++k) {
      out.probs[k] += w * p.probs[k];
    }
  }
  return out;
}

ModelGrads zero_model_grads(const ModelParams& params) {
  ModelGrads g;
  g.wf = Mat::Zero(params.wf.rows(), params.wf.cols());
  g.bf = Vec::Zero(params.bf.size());
  g.scorer_w.assign(params.scorer_w.size(), Vec::Zero(params.hidden()));
  g.scorer_b = Vec::Zero(params.scorer_b.size());
  return g;
}

namespace {

struct BranchCache {
  std::vector<Vec> tanh_u;  // tanh(wf e_t + bf) per position
  Vec c;
};

BranchCache branch_forward(const ModelParams& params,
                           const std::vector<Vec>& encs) {
  if (encs.empty()) throw ValidationError("context: empty encoding sequence");
  BranchCache cache;
  cache.tanh_u.reserve(encs.size());
  Vec c = Vec::Zero(params.hidden());
  for (const Vec& e : encs) {
    if (e.size() != params.input_dim()) {
      throw ValidationError("context: encoding dim does not match wf");
    }
    cache.tanh_u.push_back(
        ((params.wf * e + params.bf).array().tanh()).matrix());
    c += cache.tanh_u.back();
  }
  cache.c = c / static_cast<double>(encs.size());
  return cache;
}

// Backpropagates dc through the mean-pooled tanh projection; accumulates
// wf/bf gradients and (optionally) the per-position encoding gradients.
void branch_backward(const ModelParams& params, const std::vector<Vec>& encs,
                     const BranchCache& cache, const Vec& dc,
                     ModelGrads* grads, std::vector<Vec>* enc_grads) {
  const double inv_t = 1.0 / static_cast<double>(encs.size());
  for (size_t t = 0; t < encs.size(); ++t) {
    Vec du = inv_t * dc.cwiseProduct(
                         (1.0 - cache.tanh_u[t].array().square()).matrix());
    if (grads != nullptr) {
      grads->wf.noalias() += du * encs[t].transpose();
      grads->bf += du;
    }
    if (enc_grads != nullptr) {
      (*enc_grads)[t] = params.wf.transpose() * du;
    }
  }
}

// BCE forward and the d(loss)/dz logits gradient.  The clamp zeroes the
// gradient where it is active.
double bce_with_logit_grads(const ModelParams& params, const Vec& c,
                            const std::vector<double>& gold, double scale,
                            Prediction* pred_out, Vec* dz_out) {
  const size_t n_pairs = params.scorer_w.size();
  if (gold.size() != n_pairs) {
    throw ValidationError("bce_loss: gold labels do not cover every pair");
  }
  Prediction pred = predict_from_context(params, c);
  Vec dz = Vec::Zero(n_pairs);
  double sum = 0.0;
  for (size_t k = 0; k < n_pairs; ++k) {
    const double p = pred.probs[k];
    const double pc = std::clamp(p, kProbClamp, 1.0 - kProbClamp);
    sum += -(gold[k] * std::log(pc) + (1.0 - gold[k]) * std::log(1.0 - pc));
    const bool clamped = p < kProbClamp || p > 1.0 - kProbClamp;
    if (!clamped) {
      dz(static_cast<Eigen::Index>(k)) =
          scale * (p - gold[k]) / static_cast<double>(n_pairs);
    }
  }
  if (pred_out != nullptr) *pred_out = std::move(pred);
  if (dz_out != nullptr) *dz_out = std::move(dz);
  return sum / static_cast<double>(n_pairs);
}

}  // namespace

TurnLoss model_backward(const ModelParams& params,
                        const std::vector<Vec>& confnet_encs,
                        const std::vector<Vec>& transcript_encs,
                        const std::vector<double>& gold, double lambda,
                        L1Branch l1_branch, ModelGrads* grads) {
  TurnLoss out;
  const bool joint = !transcript_encs.empty();
  const bool both = joint && l1_branch == L1Branch::kBoth;

  BranchCache conf = branch_forward(params, confnet_encs);
  BranchCache trans;
  if (joint) trans = branch_forward(params, transcript_encs);

  const double l1_scale = both ? 0.5 : 1.0;
  Vec dz_conf, dz_trans;
  Prediction pred;
  double l1 = bce_with_logit_grads(params, conf.c, gold, l1_scale, &pred,
                                   &dz_conf);
  if (both) {
    l1 = 0.5 * (l1 + bce_with_logit_grads(params, trans.c, gold, l1_scale,
                                          nullptr, &dz_trans));
  }
  const double l2 = joint ? similarity_loss(trans.c, conf.c) : 0.0;

  out.l1 = l1;
  out.l2 = l2;
  out.loss = joint ? combined_loss(l1, l2, lambda) : l1;
  out.prediction = std::move(pred);

  // Context gradients.
  Vec dc_conf = Vec::Zero(params.hidden());
  Vec dc_trans = Vec::Zero(params.hidden());
  for (size_t k = 0; k < params.scorer_w.size(); ++k) {
    const Eigen::Index ek = static_cast<Eigen::Index>(k);
    if (dz_conf(ek) != 0.0) {
      dc_conf += dz_conf(ek) * params.scorer_w[k];
      if (grads != nullptr) {
        grads->scorer_w[k] += dz_conf(ek) * conf.c;
        grads->scorer_b(ek) += dz_conf(ek);
      }
    }
    if (both && dz_trans(ek) != 0.0) {
      dc_trans += dz_trans(ek) * params.scorer_w[k];
      if (grads != nullptr) {
        grads->scorer_w[k] += dz_trans(ek) * trans.c;
        grads->scorer_b(ek) += dz_trans(ek);
      }
    }
  }
  if (joint) {
    dc_conf += lambda * 2.0 * (conf.c - trans.c);
    dc_trans += lambda * 2.0 * (trans.c - conf.c);
  }

  out.confnet_enc_grads.assign(confnet_encs.size(), Vec());
  branch_backward(params, confnet_encs, conf, dc_conf, grads,
                  &out.confnet_enc_grads);
  if (joint) {
    branch_backward(params, transcript_encs, trans, dc_trans, grads, nullptr);
  }
  return out;
}

}  // namespace confnet
