// tests/test_encoder.cc

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
#include <string>
#include <vector>

#include "confnet/encoder.h"
#include "confnet/errors.h"
#include "confnet/gradcheck.h"

using namespace confnet;

namespace {

ConfusionNetwork one_position(
    const std::vector<std::pair<std::string, double>>& arcs) {
  ConfusionNetwork net;
  std::vector<Arc> v;
  for (const auto& [tok, score] : arcs) v.push_back({tok, score});
  net.positions.emplace_back(std::move(v));
  return net;
}

EmbeddingTable tiny_table() {
  // a -> [1, 0], b -> [0, 1], plus random-ish rows for the rest.
  Vocabulary vocab({"a", "b", "c"});
  Mat m = Mat::Zero(vocab.size(), 2);
  m(vocab.index("a"), 0) = 1.0;
  m(vocab.index("b"), 1) = 1.0;
  m(vocab.index("c"), 0) = 0.3;
  m(vocab.index("c"), 1) = -0.4;
  m(vocab.index(kUnkToken), 0) = -0.2;
  return EmbeddingTable(vocab, m);
}

}  // namespace

TEST_CASE("v1 identities") {
  EmbeddingTable table = tiny_table();
  EncoderParams p;
  p.variant = Variant::kV1;
  p.w1 = Mat::Zero(2, 2);
  p.w2 = Vec::Zero(2);

  // Single arc of weight one reproduces the embedding exactly.
  PositionEncoding single =
      encode_position(p, table, one_position({{"a", 1.0}}).positions[0]);
  CHECK(single.embedding == table.lookup("a"));
  CHECK_FALSE(single.attention.has_value());

  // Two arcs at 0.5/0.5 with unit embeddings.
  PositionEncoding mix = encode_position(
      p, table, one_position({{"a", 0.5}, {"b", 0.5}}).positions[0]);
  CHECK(mix.embedding(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mix.embedding(1) == doctest::Approx(0.5).epsilon(1e-15));

  // Transcript-lifted networks give back the embedding sequence.
  ConfusionNetwork lifted = from_transcript({"a", "b", "c"});
  const auto encs = encode_network(p, table, lifted);
  REQUIRE(encs.size() == 3);
  CHECK(encs[0].embedding == table.lookup("a"));
  CHECK(encs[1].embedding == table.lookup("b"));
  CHECK(encs[2].embedding == table.lookup("c"));
}

TEST_CASE("v1 homogeneity in the scores") {
  Rng rng(31);
  EmbeddingTable table = EmbeddingTable::random(Vocabulary({"x", "y", "z"}), 4, rng);
  EncoderParams p = init_encoder_params(Variant::kV1, 4, rng);

  ConfusionNetwork net = one_position({{"x", 0.6}, {"y", 0.3}});
  ConfusionNetwork scaled = one_position({{"x", 0.3}, {"y", 0.15}});
  Vec e = encode_position(p, table, net.positions[0]).embedding;
  Vec e2 = encode_position(p, table, scaled.positions[0]).embedding;
  CHECK(((0.5 * e) - e2).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("single-arc transcript identity for v2 v3 v4") {
  Rng rng(17);
  EmbeddingTable table =
      EmbeddingTable::random(Vocabulary({"hi", "there"}), 6, rng);
  for (Variant v : {Variant::kV2, Variant::kV3, Variant::kV4}) {
    EncoderParams p = init_encoder_params(v, 6, rng);
    ConfusionNetwork net = from_transcript({"hi", "there"});
    const auto encs = encode_network(p, table, net);
    REQUIRE(encs.size() == 2);
    for (size_t t = 0; t < 2; ++t) {
      Vec expect =
          (p.w1 * table.lookup(net.positions[t].top().token)).array().tanh();
      CHECK((encs[t].embedding - expect).cwiseAbs().maxCoeff() < 1e-15);
      if (v == Variant::kV3 || v == Variant::kV4) {
        REQUIRE(encs[t].attention.has_value());
        REQUIRE(encs[t].attention->size() == 1);
        CHECK((*encs[t].attention)(0) == 1.0);
      }
    }
  }
}

TEST_CASE("v3 attention is uniform over equal embeddings") {
  // Two arcs whose tokens share one embedding row: symmetric softmax.
  Vocabulary vocab({"same1", "same2"});
  Mat m = Mat::Zero(vocab.size(), 3);
  m.row(vocab.index("same1")) << 0.2, -0.1, 0.4;
  m.row(vocab.index("same2")) << 0.2, -0.1, 0.4;
  EmbeddingTable table(vocab, m);
  Rng rng(8);
  EncoderParams p = init_encoder_params(Variant::kV3, 3, rng);

  PositionEncoding enc = encode_position(
      p, table, one_position({{"same1", 0.9}, {"same2", 0.1}}).positions[0]);
  REQUIRE(enc.attention.has_value());
  CHECK((*enc.attention)(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK((*enc.attention)(1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("v3 never reads the scores") {
  Rng rng(23);
  EmbeddingTable table =
      EmbeddingTable::random(Vocabulary({"p", "q", "r"}), 5, rng);
  EncoderParams p = init_encoder_params(Variant::kV3, 5, rng);

  // Same arcs and order, uniformly rescaled scores.
  ConfusionNetwork a = one_position({{"p", 0.8}, {"q", 0.15}, {"r", 0.05}});
  ConfusionNetwork b = one_position({{"p", 0.4}, {"q", 0.075}, {"r", 0.025}});
  PositionEncoding ea = encode_position(p, table, a.positions[0]);
  PositionEncoding eb = encode_position(p, table, b.positions[0]);
  CHECK(ea.embedding == eb.embedding);  // bit level
  CHECK(*ea.attention == *eb.attention);
}

TEST_CASE("v4 matches a straight-line re-evaluation") {
  Rng rng(404);
  EmbeddingTable table =
      EmbeddingTable::random(Vocabulary({"u", "v", "w"}), 4, rng);
  EncoderParams p = init_encoder_params(Variant::kV4, 4, rng);
  ConfusionNetwork net =
      one_position({{"u", 0.5}, {"v", 0.3}, {"w", 0.2}});
  const ArcSet& pos = net.positions[0];

  PositionEncoding enc = encode_position(p, table, pos);

  // Independent evaluation of the V4 equations, written long-hand.
  const size_t n = pos.size();
  std::vector<Vec> qbar(n);
  std::vector<double> logits(n);
  for (size_t i = 0; i < n; ++i) {
    Vec pi = pos.arcs()[i].score * table.lookup(pos.arcs()[i].token);
    Vec u = Vec::Zero(4);
    for (int r = 0; r < 4; ++r) {
      double acc = 0.0;
      for (int c = 0; c < 4; ++c) acc += p.w1(r, c) * pi(c);
      u(r) = std::tanh(acc);
    }
    qbar[i] = u;
    double dot = 0.0;
    for (int r = 0; r < 4; ++r) dot += p.w2(r) * u(r);
    logits[i] = dot;
  }
  double mx = logits[0];
  for (double l : logits) mx = std::max(mx, l);
  double denom = 0.0;
  for (double l : logits) denom += std::exp(l - mx);
  Vec expect = Vec::Zero(4);
  for (size_t i = 0; i < n; ++i) {
    const double alpha = std::exp(logits[i] - mx) / denom;
    CHECK(std::abs((*enc.attention)(i) - alpha) < 1e-12);
    expect += alpha * qbar[i];
  }
  CHECK((enc.embedding - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("attention normalization and arc-order invariance") {
  Rng rng(52);
  Vocabulary vocab({"a", "b", "c", "d", "e"});
  EmbeddingTable table = EmbeddingTable::random(vocab, 6, rng);
  for (Variant v : {Variant::kV3, Variant::kV4}) {
    EncoderParams p = init_encoder_params(v, 6, rng);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<std::pair<std::string, double>> arcs;
      const int width = 2 + static_cast<int>(rng.uniform_int(4));
      double sum = 0.0;
      std::vector<double> raw(width);
      for (double& r : raw) {
        r = 0.05 + rng.uniform();
        sum += r;
      }
      for (int i = 0; i < width; ++i) {
        arcs.emplace_back(vocab.token(2 + i), raw[i] / sum);
      }
      ConfusionNetwork net = one_position(arcs);
      PositionEncoding enc = encode_position(p, table, net.positions[0]);
      REQUIRE(enc.attention.has_value());
      CHECK(std::abs(enc.attention->sum() - 1.0) < 1e-9);
      for (Eigen::Index i = 0; i < enc.attention->size(); ++i) {
        CHECK((*enc.attention)(i) > 0.0);
      }

      // Feeding the arcs in any order canonicalizes identically.
      std::vector<std::pair<std::string, double>> shuffled = arcs;
      std::reverse(shuffled.begin(), shuffled.end());
      PositionEncoding enc2 =
          encode_position(p, table, one_position(shuffled).positions[0]);
      CHECK(enc.embedding == enc2.embedding);
    }
  }
}

TEST_CASE("encode_network length contract") {
  Rng rng(61);
  EmbeddingTable table = EmbeddingTable::random(Vocabulary({"a", "b"}), 4, rng);
  for (Variant v :
       {Variant::kV1, Variant::kV2, Variant::kV3, Variant::kV4}) {
    EncoderParams p = init_encoder_params(v, 4, rng);
    ConfusionNetwork empty;
    CHECK(encode_network(p, table, empty).empty());
    ConfusionNetwork net = from_transcript({"a", "b", "a"});
    CHECK(encode_network(p, table, net).size() == 3);
  }
}

TEST_CASE("dimension mismatch is rejected") {
  Rng rng(71);
  EmbeddingTable table = EmbeddingTable::random(Vocabulary({"a"}), 4, rng);
  EncoderParams p = init_encoder_params(Variant::kV2, 6, rng);
  CHECK_THROWS_AS(
      encode_position(p, table, from_transcript({"a"}).positions[0]),
      ValidationError);
}

TEST_CASE("backward matches finite differences") {
  GradCheckConfig config;
  config.instances = 20;
  // V1 has no parameters: gradients are exactly zero and trivially agree.
  CHECK(encoder_grad_check(Variant::kV1, 100, config) == 0.0);
  CHECK(encoder_grad_check(Variant::kV2, 200, config) < 1e-4);
  CHECK(encoder_grad_check(Variant::kV3, 300, config) < 1e-4);
  CHECK(encoder_grad_check(Variant::kV4, 400, config) < 1e-4);
}

TEST_CASE("backward shape checks") {
  Rng rng(81);
  EmbeddingTable table = EmbeddingTable::random(Vocabulary({"a"}), 4, rng);
  EncoderParams p = init_encoder_params(Variant::kV2, 4, rng);
  ConfusionNetwork net = from_transcript({"a"});
  CHECK_THROWS_AS(encode_backward(p, table, net, {}), ValidationError);
  std::vector<Vec> bad(1, Vec::Zero(3));
  CHECK_THROWS_AS(encode_backward(p, table, net, bad), ValidationError);
}
