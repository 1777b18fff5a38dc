// tests/test_evalbench.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "confnet/errors.h"
#include "confnet/evalbench.h"
#include "confnet/trainer.h"

using namespace confnet;

namespace {

// A hand-built model on a one-slot/two-value ontology that predicts the
// mentioned value perfectly:  value embeddings are +-0.9 on the first
// coordinate, other tokens are zero, and the scorers read the pooled
// sign.
struct OracleWorld {
  Ontology ontology{{{"food", {"thai", "basque"}}}};
  std::vector<Dialogue> corpus;
  Checkpoint ckpt;

  OracleWorld() : ckpt(make_checkpoint()) {
    for (int i = 0; i < 4; ++i) {
      Dialogue d;
      d.dialogue_id = "d" + std::to_string(i);
      const std::string value = i % 2 == 0 ? "thai" : "basque";
      Turn t;
      t.transcript = {"i", "need", value};
      t.confnet = from_transcript(t.transcript, d.dialogue_id + "-t0");
      t.turn_inform = {{"food", value}};
      t.gold_goal = {{"food", value}};
      d.turns.push_back(std::move(t));
      corpus.push_back(std::move(d));
    }
  }

  Checkpoint make_checkpoint() {
    Vocabulary vocab({"i", "need", "thai", "basque"});
    Mat table = Mat::Zero(vocab.size(), 2);
    table(vocab.index("thai"), 0) = 0.9;
    table(vocab.index("basque"), 0) = -0.9;
    EmbeddingTable emb(vocab, table);

    EncoderParams enc;
    enc.variant = Variant::kV1;
    enc.w1 = Mat::Zero(2, 2);
    enc.w2 = Vec::Zero(2);

    ModelParams model;
    model.wf = Mat::Zero(2, 2);
    model.wf(0, 0) = 5.0;
    model.bf = Vec::Zero(2);
    Ontology o{{{"food", {"thai", "basque"}}}};
    model.scorer_w.assign(o.num_pairs(), Vec::Zero(2));
    model.scorer_b = Vec::Zero(o.num_pairs());
    // (food, thai) fires on positive pooled sign, (food, basque) on
    // negative; the request scorer stays off.
    model.scorer_w[o.pair_index("food", "thai")](0) = 9.0;
    model.scorer_b(o.pair_index("food", "thai")) = -1.5;
    model.scorer_w[o.pair_index("food", "basque")](0) = -9.0;
    model.scorer_b(o.pair_index("food", "basque")) = -1.5;
    model.scorer_b(o.pair_index(kRequestSlot, "food")) = -5.0;
    return Checkpoint(o, emb, enc, model, 5);
  }
};

}  // namespace

TEST_CASE("oracle predictions score perfect metrics") {
  OracleWorld w;
  EvalReport r = evaluate(w.ckpt, w.corpus, parse_eval_mode("confnet"));
  CHECK(r.n_turns == 4);
  CHECK(r.joint_goal == 1.0);
  CHECK(r.turn_inform == 1.0);
  CHECK(r.turn_request == 1.0);

  // Single-turn dialogues with correct goals count one each.
  EvalReport asr = evaluate(w.ckpt, w.corpus, parse_eval_mode("asr-1"));
  CHECK(asr.joint_goal == 1.0);
}

TEST_CASE("empty predictions zero the inform metric") {
  OracleWorld w;
  Checkpoint mute = w.ckpt;
  for (size_t k = 0; k < mute.model.scorer_w.size(); ++k) {
    mute.model.scorer_w[k].setZero();
    mute.model.scorer_b(k) = -100.0;
  }
  EvalReport r = evaluate(mute, w.corpus, parse_eval_mode("confnet"));
  CHECK(r.turn_inform == 0.0);   // every turn has a non-empty gold inform
  CHECK(r.turn_request == 1.0);  // empty request sets match everywhere
  CHECK(r.joint_goal == 0.0);
}

TEST_CASE("evaluate is order independent and thread stable") {
  OracleWorld w;
  std::vector<Dialogue> reversed(w.corpus.rbegin(), w.corpus.rend());
  EvalReport a = evaluate(w.ckpt, w.corpus, parse_eval_mode("confnet"));
  EvalReport b = evaluate(w.ckpt, reversed, parse_eval_mode("confnet"));
  CHECK(a.joint_goal == b.joint_goal);
  CHECK(a.turn_inform == b.turn_inform);

  EvalOptions threaded;
  threaded.threads = 4;
  EvalReport c = evaluate(w.ckpt, w.corpus, parse_eval_mode("confnet"), threaded);
  CHECK(a.joint_goal == c.joint_goal);
  CHECK(a.turn_inform == c.turn_inform);
  CHECK(a.turn_request == c.turn_request);
}

TEST_CASE("ontology mismatch is rejected") {
  OracleWorld w;
  std::vector<Dialogue> bad = w.corpus;
  bad[0].turns[0].turn_inform = {{"food", "sushi"}};
  CHECK_THROWS_AS(evaluate(w.ckpt, bad, parse_eval_mode("confnet")),
                  ValidationError);
}

TEST_CASE("asr-1 with v1 equals confnet mode on best-path lifts") {
  // Train nothing; use a random model on a noisy corpus.
  Ontology ontology = default_ontology(2, 3);
  NoiseModel noise{0.7, 3, 0.2};
  Rng rng(31);
  std::vector<Dialogue> corpus = generate_corpus(ontology, 8, noise, rng);

  Vocabulary vocab(corpus_tokens(corpus));
  Rng prng(7);
  EmbeddingTable table = EmbeddingTable::random(vocab, 6, prng);
  EncoderParams enc = init_encoder_params(Variant::kV1, 6, prng);
  ModelParams model = init_model_params(ontology, 6, 5, 0.5, prng);
  Checkpoint ckpt(ontology, table, enc, model, 5);

  std::vector<Dialogue> lifted = corpus;
  for (Dialogue& d : lifted) {
    for (Turn& t : d.turns) {
      const Path best = best_path(t.confnet);
      t.confnet = best.tokens.empty()
                      ? from_transcript({kEpsToken}, t.confnet.utterance_id)
                      : from_transcript(best.tokens, t.confnet.utterance_id);
    }
  }

  EvalReport via_asr = evaluate(ckpt, corpus, parse_eval_mode("asr-1"));
  EvalReport via_confnet = evaluate(ckpt, lifted, parse_eval_mode("confnet"));
  CHECK(via_asr.joint_goal == via_confnet.joint_goal);
  CHECK(via_asr.turn_inform == via_confnet.turn_inform);
  CHECK(via_asr.turn_request == via_confnet.turn_request);
}

TEST_CASE("aggregate_seeds formulas") {
  EvalReport a, b;
  a.joint_goal = 0.70;
  b.joint_goal = 0.72;
  a.turn_inform = b.turn_inform = 0.8;
  a.turn_request = b.turn_request = 0.9;
  a.n_turns = b.n_turns = 10;

  SeedAggregate agg = aggregate_seeds({a, b});
  CHECK(agg.joint_goal.mean == doctest::Approx(0.71).epsilon(1e-12));
  CHECK(agg.joint_goal.se == doctest::Approx(0.01).epsilon(1e-9));
  CHECK(agg.turn_inform.se == doctest::Approx(0.0));
  CHECK(agg.runs == 2);

  // Independent formulation: direct mean and rms deviation.
  const double mean = (0.70 + 0.72) / 2.0;
  const double sd = std::sqrt(((0.70 - mean) * (0.70 - mean) +
                               (0.72 - mean) * (0.72 - mean)) /
                              1.0);
  CHECK(agg.joint_goal.se == doctest::Approx(sd / std::sqrt(2.0)).epsilon(1e-12));

  CHECK_THROWS_AS(aggregate_seeds({a}), ValidationError);

  // Identical reports: zero spread up to the rounding of the mean.
  SeedAggregate same = aggregate_seeds({a, a, a});
  CHECK(same.joint_goal.se < 1e-12);
  EvalReport half = a;
  half.joint_goal = 0.5;  // exactly representable mean
  CHECK(aggregate_seeds({half, half, half}).joint_goal.se == 0.0);
}

TEST_CASE("bench validates repetitions and reports every mode") {
  OracleWorld w;
  CHECK_THROWS_AS(bench_inference(w.ckpt, w.corpus, {"confnet"}, 4, 1),
                  ValidationError);
  const auto timing =
      bench_inference(w.ckpt, w.corpus, {"confnet", "asr-1"}, 4, 3);
  REQUIRE(timing.count("confnet") == 1);
  REQUIRE(timing.count("asr-1") == 1);
  CHECK(timing.at("confnet") >= 0.0);
}

TEST_CASE("attention dump format") {
  Rng rng(61);
  Ontology ontology({{"food", {"thai", "basque"}}});
  Vocabulary vocab({"i", "need", "thai", "basque", "tea"});
  EmbeddingTable table = EmbeddingTable::random(vocab, 6, rng);
  EncoderParams enc = init_encoder_params(Variant::kV4, 6, rng);
  ModelParams model = init_model_params(ontology, 6, 4, 0.5, rng);
  Checkpoint ckpt(ontology, table, enc, model, 5);

  ConfusionNetwork net;
  net.utterance_id = "u";
  net.positions.emplace_back(std::vector<Arc>{{"i", 1.0}});
  net.positions.emplace_back(
      std::vector<Arc>{{"need", 0.5}, {"tea", 0.3}, {"thai", 0.2}});

  const std::string csv = dump_attention(ckpt, net);
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header == "pos0,pos1");

  // Parse the grid back and check column structure and sums.
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    cells.resize(2);
    rows.push_back(cells);
  }
  REQUIRE(rows.size() == 3);  // widest position
  CHECK(rows[0][0].substr(0, 2) == "i:");
  CHECK(rows[1][0].empty());  // ragged column padded
  CHECK(rows[0][1].substr(0, 5) == "need:");
  CHECK(rows[1][1].substr(0, 4) == "tea:");
  CHECK(rows[2][1].substr(0, 5) == "thai:");

  // Single-arc column is exactly 1; every column sums to 1.
  CHECK(std::stod(rows[0][0].substr(2)) == 1.0);
  double col1 = 0.0;
  for (int r = 0; r < 3; ++r) {
    col1 += std::stod(rows[r][1].substr(rows[r][1].find(':') + 1));
  }
  CHECK(std::abs(col1 - 1.0) < 1e-9);

  // V1 checkpoints have no attention to dump.
  Checkpoint v1 = ckpt;
  v1.encoder.variant = Variant::kV1;
  CHECK_THROWS_WITH_AS(dump_attention(v1, net),
                       doctest::Contains("no attention"), ValidationError);
}

TEST_CASE("eval report json round trip") {
  EvalReport r;
  r.joint_goal = 0.5;
  r.turn_inform = 0.25;
  r.turn_request = 1.0;
  r.n_turns = 8;
  r.timing["confnet"] = 0.125;
  EvalReport back = eval_report_from_json(eval_report_to_json(r));
  CHECK(back.joint_goal == r.joint_goal);
  CHECK(back.turn_inform == r.turn_inform);
  CHECK(back.turn_request == r.turn_request);
  CHECK(back.n_turns == r.n_turns);
  CHECK(back.timing.at("confnet") == 0.125);
}

TEST_CASE("bad eval modes are rejected") {
  CHECK_THROWS_AS(parse_eval_mode("nonsense"), ValidationError);
  CHECK_THROWS_AS(parse_eval_mode("asr-0"), ValidationError);
  CHECK_THROWS_AS(parse_eval_mode("confnet-0"), ValidationError);
  CHECK(parse_eval_mode("asr-9").asr_n == 9);
  CHECK(parse_eval_mode("confnet-7").max_arcs_override.value() == 7);
}
