// confnet/gradcheck.cc

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

#include "confnet/gradcheck.h"

#include <algorithm>
#include <string>
#include <vector>

#include "confnet/errors.h"

namespace confnet {

namespace {

Vocabulary gradcheck_vocab() {
  std::vector<std::string> tokens;
  for (int i = 0; i < 10; ++i) tokens.push_back("w" + std::to_string(i));
  return Vocabulary(std::move(tokens));
}

// Check instances keep embedding entries and arc scores bounded away
// from zero.  Central differences at step 1e-5 carry ~1e-11 of rounding
// noise; coordinates whose true gradient sits near that floor would
// drown in it even though the analytic value is correct.
EmbeddingTable gradcheck_table(int dim, Rng& rng) {
  Vocabulary vocab = gradcheck_vocab();
  Mat m(vocab.size(), dim);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double mag = 0.05 + 0.45 * rng.uniform();
      m(r, c) = rng.uniform() < 0.5 ? -mag : mag;
    }
  }
  m.row(vocab.eps_index()).setZero();
  return EmbeddingTable(std::move(vocab), std::move(m));
}

ConfusionNetwork random_net(const Vocabulary& vocab, int max_positions,
                            int max_arcs, Rng& rng) {
  ConfusionNetwork net;
  const int n_pos = 1 + static_cast<int>(rng.uniform_int(max_positions));
  for (int t = 0; t < n_pos; ++t) {
    const int width =
        std::min<int>(1 + static_cast<int>(rng.uniform_int(max_arcs)),
                      static_cast<int>(vocab.size()));
    std::vector<size_t> ids;
    while (static_cast<int>(ids.size()) < width) {
      const size_t id = rng.uniform_int(vocab.size());
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    }
    std::vector<double> raw(width);
    double sum = 0.0;
    for (double& r : raw) {
      r = 0.25 + 0.75 * rng.uniform();
      sum += r;
    }
    std::vector<Arc> arcs;
    for (int i = 0; i < width; ++i) {
      arcs.push_back({vocab.token(ids[i]), raw[i] / sum});
    }
    net.positions.emplace_back(std::move(arcs));
  }
  return net;
}

Vec flatten_encoder(const EncoderParams& p) {
  const int d = p.dim();
  Vec out(d * d + d);
  int at = 0;
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) out(at++) = p.w1(r, c);
  }
  for (int i = 0; i < d; ++i) out(at++) = p.w2(i);
  return out;
}

void unflatten_encoder(const Vec& x, EncoderParams* p) {
  const int d = p->dim();
  int at = 0;
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) p->w1(r, c) = x(at++);
  }
  for (int i = 0; i < d; ++i) p->w2(i) = x(at++);
}

Vec flatten_model(const ModelParams& m) {
  const int h = m.hidden();
  const int d = m.input_dim();
  const int k = static_cast<int>(m.scorer_w.size());
  Vec out(h * d + h + k * h + k);
  int at = 0;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < d; ++c) out(at++) = m.wf(r, c);
  }
  for (int i = 0; i < h; ++i) out(at++) = m.bf(i);
  for (int s = 0; s < k; ++s) {
    for (int i = 0; i < h; ++i) out(at++) = m.scorer_w[s](i);
  }
  for (int s = 0; s < k; ++s) out(at++) = m.scorer_b(s);
  return out;
}

void unflatten_model(const Vec& x, int offset, ModelParams* m) {
  const int h = m->hidden();
  const int d = m->input_dim();
  const int k = static_cast<int>(m->scorer_w.size());
  int at = offset;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < d; ++c) m->wf(r, c) = x(at++);
  }
  for (int i = 0; i < h; ++i) m->bf(i) = x(at++);
  for (int s = 0; s < k; ++s) {
    for (int i = 0; i < h; ++i) m->scorer_w[s](i) = x(at++);
  }
  for (int s = 0; s < k; ++s) m->scorer_b(s) = x(at++);
}

std::vector<Vec> plain_embeddings(const std::vector<PositionEncoding>& encs) {
  std::vector<Vec> out;
  out.reserve(encs.size());
  for (const PositionEncoding& e : encs) out.push_back(e.embedding);
  return out;
}

}  // namespace

double encoder_grad_check(Variant variant, uint64_t seed,
                          const GradCheckConfig& config) {
  double worst = 0.0;
  for (int inst = 0; inst < config.instances; ++inst) {
    Rng rng(seed + 1000003ull * static_cast<uint64_t>(inst));
    EmbeddingTable table = gradcheck_table(config.emb_dim, rng);
    EncoderParams params = init_encoder_params(variant, config.emb_dim, rng);
    ConfusionNetwork net =
        random_net(table.vocab(), config.max_positions, config.max_arcs, rng);
    std::vector<Vec> upstream(net.size());
    for (Vec& u : upstream) {
      u.resize(config.emb_dim);
      for (int i = 0; i < config.emb_dim; ++i) u(i) = rng.uniform(-1.0, 1.0);
    }

    const EncoderGrads grads = encode_backward(params, table, net, upstream);
    Vec analytic(flatten_encoder(params).size());
    {
      EncoderParams tmp = params;
      tmp.w1 = grads.w1;
      tmp.w2 = grads.w2;
      analytic = flatten_encoder(tmp);
    }

    auto objective = [&](const Vec& x) {
      EncoderParams probe = params;
      unflatten_encoder(x, &probe);
      const std::vector<PositionEncoding> encs =
          encode_network(probe, table, net);
      double loss = 0.0;
      for (size_t t = 0; t < encs.size(); ++t) {
        loss += upstream[t].dot(encs[t].embedding);
      }
      return loss;
    };
    worst = std::max(
        worst, grad_check(objective, flatten_encoder(params), analytic,
                          config.step));
  }
  return worst;
}

double full_model_grad_check(Variant variant, uint64_t seed,
                             const GradCheckConfig& config) {
  Ontology ontology(
      {{"slota", {"vala", "valb"}}, {"slotb", {"valc", "vald"}}});
  double worst = 0.0;
  for (int inst = 0; inst < config.instances; ++inst) {
    Rng rng(seed + 7777777ull * static_cast<uint64_t>(inst));
    EmbeddingTable table = gradcheck_table(config.emb_dim, rng);
    EncoderParams enc = init_encoder_params(variant, config.emb_dim, rng);
    ModelParams model = init_model_params(ontology, config.emb_dim,
                                          config.hidden_dim, config.lambda,
                                          rng);
    ConfusionNetwork net =
        random_net(table.vocab(), config.max_positions, config.max_arcs, rng);
    std::vector<std::string> transcript = best_path(net).tokens;
    if (transcript.empty()) transcript = {kEpsToken};
    std::vector<double> gold(ontology.num_pairs());
    for (double& g : gold) g = static_cast<double>(rng.uniform_int(2));

    EncoderParams v1;
    v1.variant = Variant::kV1;
    v1.w1 = Mat::Zero(config.emb_dim, config.emb_dim);
    v1.w2 = Vec::Zero(config.emb_dim);
    const std::vector<Vec> trans_vecs = plain_embeddings(
        encode_network(v1, table, from_transcript(transcript)));

    // Analytic gradients.
    ModelGrads mg = zero_model_grads(model);
    TurnLoss turn = model_backward(
        model, plain_embeddings(encode_network(enc, table, net)), trans_vecs,
        gold, config.lambda, L1Branch::kConfnet, &mg);
    const EncoderGrads eg =
        encode_backward(enc, table, net, turn.confnet_enc_grads);

    Vec analytic(flatten_encoder(enc).size() + flatten_model(model).size());
    {
      EncoderParams etmp = enc;
      etmp.w1 = eg.w1;
      etmp.w2 = eg.w2;
      ModelParams mtmp = model;
      mtmp.wf = mg.wf;
      mtmp.bf = mg.bf;
      mtmp.scorer_w = mg.scorer_w;
      mtmp.scorer_b = mg.scorer_b;
      analytic << flatten_encoder(etmp), flatten_model(mtmp);
    }

    Vec x0(analytic.size());
    x0 << flatten_encoder(enc), flatten_model(model);

    auto objective = [&](const Vec& x) {
      EncoderParams eprobe = enc;
      unflatten_encoder(x, &eprobe);
      ModelParams mprobe = model;
      unflatten_model(x, static_cast<int>(flatten_encoder(enc).size()),
                      &mprobe);
      const std::vector<Vec> conf_vecs =
          plain_embeddings(encode_network(eprobe, table, net));
      const TurnLoss t = model_backward(mprobe, conf_vecs, trans_vecs, gold,
                                        config.lambda, L1Branch::kConfnet,
                                        nullptr);
      return t.loss;
    };
    worst = std::max(worst, grad_check(objective, x0, analytic, config.step));
  }
  return worst;
}

}  // namespace confnet
