// confnet/trainer.cc

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

#include "confnet/trainer.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

#include "confnet/errors.h"

namespace confnet {

using nlohmann::json;

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::kNonAug: return "nonaug";
    case Regime::kAug: return "aug";
    case Regime::kJoint: return "joint";
    case Regime::kAsrNBaseline: return "asr-n";
  }
  return "nonaug";
}

Regime regime_from_name(const std::string& name) {
  if (name == "nonaug") return Regime::kNonAug;
  if (name == "aug") return Regime::kAug;
  if (name == "joint") return Regime::kJoint;
  if (name == "asr-n") return Regime::kAsrNBaseline;
  throw ValidationError("unknown training regime '" + name + "'");
}

json train_report_to_json(const TrainReport& report) {
  json epochs = json::array();
  for (const EpochStats& e : report.epochs) {
    epochs.push_back({{"epoch", e.epoch},
                      {"train_loss", e.train_loss},
                      {"dev", eval_report_to_json(e.dev)}});
  }
  return json{{"epochs", std::move(epochs)},
              {"examples_per_epoch", report.examples_per_epoch},
              {"best_epoch", report.best_epoch},
              {"final_dev", eval_report_to_json(report.final_dev)},
              {"checkpoint_path", report.checkpoint_path},
              {"timing", {{"wall_seconds", report.wall_seconds}}}};
}

namespace {

struct TrainExample {
  ConfusionNetwork confnet;
  std::vector<std::string> transcript;
  std::vector<double> gold;
};

// Adam with the standard constants.  Deterministic: the update is pure
// arithmetic on the accumulated batch gradients.
constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

template <typename T>
void adam_update(T& param, const T& grad, T& m, T& v, double lr, double bc1,
                 double bc2) {
  m = kBeta1 * m + (1.0 - kBeta1) * grad;
  v = (kBeta2 * v.array() + (1.0 - kBeta2) * grad.array().square()).matrix();
  param.array() -=
      lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + kAdamEps);
}

struct AdamState {
  Mat w1_m, w1_v;
  Vec w2_m, w2_v;
  Mat wf_m, wf_v;
  Vec bf_m, bf_v;
  std::vector<Vec> sw_m, sw_v;
  Vec sb_m, sb_v;
  long steps = 0;

  AdamState(const EncoderParams& enc, const ModelParams& model) {
    w1_m = Mat::Zero(enc.w1.rows(), enc.w1.cols());
    w1_v = w1_m;
    w2_m = Vec::Zero(enc.w2.size());
    w2_v = w2_m;
    wf_m = Mat::Zero(model.wf.rows(), model.wf.cols());
    wf_v = wf_m;
    bf_m = Vec::Zero(model.bf.size());
    bf_v = bf_m;
    sw_m.assign(model.scorer_w.size(), Vec::Zero(model.hidden()));
    sw_v = sw_m;
    sb_m = Vec::Zero(model.scorer_b.size());
    sb_v = sb_m;
  }
};

void validate_config(const TrainConfig& c) {
  if (c.learning_rate <= 0.0) throw ValidationError("train: learning rate must be positive");
  if (c.batch_size < 1) throw ValidationError("train: batch size must be >= 1");
  if (c.epochs < 0) throw ValidationError("train: epochs must be >= 0");
  if (c.dropout < 0.0 || c.dropout >= 1.0) {
    throw ValidationError("train: dropout must be in [0, 1)");
  }
  if (c.max_arcs < 1) throw ValidationError("train: max_arcs must be >= 1");
  if (c.asr_list_size < 1) throw ValidationError("train: asr list size must be >= 1");
}

std::vector<TrainExample> build_examples(const TrainConfig& config,
                                         const std::vector<Dialogue>& corpus,
                                         const Ontology& ontology) {
  std::vector<const Dialogue*> source;
  std::vector<Dialogue> augmented;
  if (config.regime == Regime::kAug) {
    augmented = augment(corpus);
    for (const Dialogue& d : augmented) source.push_back(&d);
  } else {
    for (const Dialogue& d : corpus) source.push_back(&d);
  }

  std::vector<TrainExample> examples;
  for (const Dialogue* d : source) {
    for (const Turn& turn : d->turns) {
      std::vector<double> gold = gold_vector(ontology, turn);
      if (config.regime == Regime::kAsrNBaseline) {
        // Baseline training set: the N best hypotheses of each turn as
        // single-arc confnets, plus the clean transcript (the baseline
        // is trained on the augmented hypothesis data).
        for (const Path& hyp :
             n_best_paths(turn.confnet, config.asr_list_size)) {
          TrainExample ex;
          ex.transcript =
              hyp.tokens.empty() ? std::vector<std::string>{kEpsToken}
                                 : hyp.tokens;
          ex.confnet = from_transcript(ex.transcript);
          ex.gold = gold;
          examples.push_back(std::move(ex));
        }
        TrainExample clean;
        clean.transcript = turn.transcript;
        clean.confnet = from_transcript(turn.transcript);
        clean.gold = gold;
        examples.push_back(std::move(clean));
      } else {
        TrainExample ex;
        ex.transcript = turn.transcript;
        ex.confnet = truncate_arcs(turn.confnet, config.max_arcs);
        ex.gold = std::move(gold);
        examples.push_back(std::move(ex));
      }
    }
  }
  if (examples.empty()) throw ValidationError("train: no training examples");
  return examples;
}

}  // namespace

TrainResult train(const TrainConfig& config,
                  const std::vector<Dialogue>& train_corpus,
                  const std::vector<Dialogue>& dev_corpus,
                  const Ontology& ontology) {
  validate_config(config);
  if (train_corpus.empty() || dev_corpus.empty()) {
    throw ValidationError("train: corpora must be non-empty");
  }
  const auto t_start = std::chrono::steady_clock::now();

  Rng rng(config.seed);
  Vocabulary vocab(corpus_tokens(train_corpus));
  EmbeddingTable table =
      config.embeddings_path.empty()
          ? EmbeddingTable::random(std::move(vocab), config.emb_dim, rng)
          : EmbeddingTable::from_file(config.embeddings_path, std::move(vocab),
                                      config.emb_dim, rng);
  EncoderParams enc = init_encoder_params(config.variant, config.emb_dim, rng);
  ModelParams model = init_model_params(ontology, config.emb_dim,
                                        config.hidden_dim, config.lambda, rng);

  // The transcript branch is always the parameter-free V1 lift.
  EncoderParams transcript_enc;
  transcript_enc.variant = Variant::kV1;
  transcript_enc.w1 = Mat::Zero(config.emb_dim, config.emb_dim);
  transcript_enc.w2 = Vec::Zero(config.emb_dim);

  std::vector<TrainExample> examples =
      build_examples(config, train_corpus, ontology);

  const EvalMode dev_mode = parse_eval_mode(
      config.regime == Regime::kAsrNBaseline
          ? "asr-" + std::to_string(config.asr_list_size)
          : "confnet");
  EvalOptions dev_opts;
  dev_opts.threshold = config.decision_threshold;

  auto make_checkpoint = [&]() {
    return Checkpoint(ontology, table, enc, model, config.max_arcs);
  };
  auto dev_eval = [&](const Checkpoint& ckpt) {
    return evaluate(ckpt, dev_corpus, dev_mode, dev_opts);
  };

  TrainReport report;
  report.examples_per_epoch = examples.size();

  const bool joint = config.regime == Regime::kJoint;
  const int n = static_cast<int>(examples.size());
  std::vector<size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  AdamState optimizer(enc, model);

  double best_joint_goal = -1.0;
  int best_epoch = 0;
  std::optional<Checkpoint> best;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    int batch_index = 0;
    for (int start = 0; start < n; start += config.batch_size, ++batch_index) {
      const int count = std::min(config.batch_size, n - start);
      ModelGrads mg = zero_model_grads(model);
      EncoderGrads eg{Mat::Zero(config.emb_dim, config.emb_dim),
                      Vec::Zero(config.emb_dim)};
      double batch_loss = 0.0;

      for (int b = 0; b < count; ++b) {
        const TrainExample& ex = examples[order[start + b]];
        const std::vector<PositionEncoding> encoded =
            encode_network(enc, table, ex.confnet);

        std::vector<Vec> conf_vecs(encoded.size());
        std::vector<Vec> masks;
        if (config.dropout > 0.0) {
          masks.resize(encoded.size());
          const double keep_scale = 1.0 / (1.0 - config.dropout);
          for (size_t t = 0; t < encoded.size(); ++t) {
            masks[t].resize(config.emb_dim);
            for (int i = 0; i < config.emb_dim; ++i) {
              masks[t](i) = rng.uniform() < config.dropout ? 0.0 : keep_scale;
            }
            conf_vecs[t] = masks[t].cwiseProduct(encoded[t].embedding);
          }
        } else {
          for (size_t t = 0; t < encoded.size(); ++t) {
            conf_vecs[t] = encoded[t].embedding;
          }
        }

        std::vector<Vec> trans_vecs;
        if (joint) {
          for (const PositionEncoding& pe : encode_network(
                   transcript_enc, table, from_transcript(ex.transcript))) {
            trans_vecs.push_back(pe.embedding);
          }
        }

        TurnLoss turn = model_backward(model, conf_vecs, trans_vecs, ex.gold,
                                       config.lambda, config.l1_branch, &mg);
        batch_loss += turn.loss;

        std::vector<Vec>& upstream = turn.confnet_enc_grads;
        if (config.dropout > 0.0) {
          for (size_t t = 0; t < upstream.size(); ++t) {
            upstream[t] = masks[t].cwiseProduct(upstream[t]);
          }
        }
        const EncoderGrads g = encode_backward(enc, table, ex.confnet, upstream);
        eg.w1 += g.w1;
        eg.w2 += g.w2;
      }

      if (!std::isfinite(batch_loss)) {
        std::ostringstream oss;
        oss << "train: non-finite loss at epoch " << epoch << " batch "
            << batch_index;
        throw NumericError(oss.str());
      }

      optimizer.steps += 1;
      const double bc1 = 1.0 - std::pow(kBeta1, optimizer.steps);
      const double bc2 = 1.0 - std::pow(kBeta2, optimizer.steps);
      const double lr = config.learning_rate;
      const double inv = 1.0 / count;
      adam_update(enc.w1, Mat((inv * eg.w1).eval()), optimizer.w1_m,
                  optimizer.w1_v, lr, bc1, bc2);
      adam_update(enc.w2, Vec((inv * eg.w2).eval()), optimizer.w2_m,
                  optimizer.w2_v, lr, bc1, bc2);
      adam_update(model.wf, Mat((inv * mg.wf).eval()), optimizer.wf_m,
                  optimizer.wf_v, lr, bc1, bc2);
      adam_update(model.bf, Vec((inv * mg.bf).eval()), optimizer.bf_m,
                  optimizer.bf_v, lr, bc1, bc2);
      for (size_t k = 0; k < model.scorer_w.size(); ++k) {
        adam_update(model.scorer_w[k], Vec((inv * mg.scorer_w[k]).eval()),
                    optimizer.sw_m[k], optimizer.sw_v[k], lr, bc1, bc2);
      }
      adam_update(model.scorer_b, Vec((inv * mg.scorer_b).eval()),
                  optimizer.sb_m, optimizer.sb_v, lr, bc1, bc2);

      const bool finite = all_finite(enc.w1) && all_finite(enc.w2) &&
                          all_finite(model.wf) && all_finite(model.bf) &&
                          all_finite(model.scorer_b) &&
                          std::all_of(model.scorer_w.begin(),
                                      model.scorer_w.end(),
                                      [](const Vec& w) { return all_finite(w); });
      if (!finite) {
        std::ostringstream oss;
        oss << "train: non-finite parameters at epoch " << epoch << " batch "
            << batch_index;
        throw NumericError(oss.str());
      }
      epoch_loss += batch_loss;
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = epoch_loss / n;
    Checkpoint current = make_checkpoint();
    stats.dev = dev_eval(current);
    if (stats.dev.joint_goal > best_joint_goal) {
      best_joint_goal = stats.dev.joint_goal;
      best_epoch = epoch;
      best.emplace(std::move(current));
    }
    report.epochs.push_back(std::move(stats));
  }

  if (!best.has_value()) {
    best.emplace(make_checkpoint());
    best_epoch = 0;
  }
  report.best_epoch = best_epoch;
  report.final_dev = dev_eval(*best);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return TrainResult{std::move(*best), std::move(report)};
}

}  // namespace confnet
