// tests/test_confusion_network.cc

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

#include <algorithm>
#include <string>
#include <vector>

#include "confnet/confnet-json.h"
#include "confnet/confusion-network.h"
#include "confnet/errors.h"
#include "confnet/numerics.h"

using namespace confnet;

namespace {

ConfusionNetwork make_net(
    const std::vector<std::vector<std::pair<std::string, double>>>& spec) {
  ConfusionNetwork net;
  for (const auto& pos : spec) {
    std::vector<Arc> arcs;
    for (const auto& [tok, score] : pos) arcs.push_back({tok, score});
    net.positions.emplace_back(std::move(arcs));
  }
  return net;
}

// Independent oracle: enumerate every index vector, score it as the
// left-to-right product, sort by score descending with index-sequence
// tie-break, drop epsilons.
std::vector<Path> brute_force_paths(const ConfusionNetwork& net, size_t n) {
  if (net.positions.empty()) return {Path{{}, 1.0}};
  std::vector<std::vector<int>> all;
  std::vector<int> idx(net.positions.size(), 0);
  while (true) {
    all.push_back(idx);
    size_t t = idx.size();
    while (t > 0) {
      --t;
      if (static_cast<size_t>(++idx[t]) < net.positions[t].size()) break;
      idx[t] = 0;
      if (t == 0) {
        t = SIZE_MAX;
        break;
      }
    }
    if (t == SIZE_MAX) break;
  }
  auto score_of = [&](const std::vector<int>& v) {
    double s = 1.0;
    for (size_t t = 0; t < v.size(); ++t) {
      s *= net.positions[t].arcs()[v[t]].score;
    }
    return s;
  };
  std::stable_sort(all.begin(), all.end(),
                   [&](const std::vector<int>& a, const std::vector<int>& b) {
                     const double sa = score_of(a);
                     const double sb = score_of(b);
                     if (sa != sb) return sa > sb;
                     return a < b;
                   });
  std::vector<Path> paths;
  for (const auto& v : all) {
    if (paths.size() == n) break;
    Path p;
    p.score = score_of(v);
    for (size_t t = 0; t < v.size(); ++t) {
      const Arc& a = net.positions[t].arcs()[v[t]];
      if (a.token != kEpsToken) p.tokens.push_back(a.token);
    }
    paths.push_back(std::move(p));
  }
  return paths;
}

ConfusionNetwork random_net(Rng& rng, int max_pos, int max_arcs) {
  const int n_pos = 1 + static_cast<int>(rng.uniform_int(max_pos));
  std::vector<std::vector<std::pair<std::string, double>>> spec(n_pos);
  for (auto& pos : spec) {
    const int width = 1 + static_cast<int>(rng.uniform_int(max_arcs));
    double sum = 0.0;
    std::vector<double> raw(width);
    for (double& r : raw) {
      do {
        r = rng.uniform();
      } while (r <= 0.0);
      sum += r;
    }
    for (int i = 0; i < width; ++i) {
      // Distinct tokens within a position; occasional epsilon.
      std::string tok = rng.uniform() < 0.15 && i == 0
                            ? kEpsToken
                            : "t" + std::to_string(i);
      pos.emplace_back(tok, raw[i] / sum);
    }
  }
  return make_net(spec);
}

}  // namespace

TEST_CASE("arc set canonical order and validation") {
  ArcSet s({{"a", 0.2}, {"b", 0.8}});
  CHECK(s.arcs()[0].token == "b");
  CHECK(s.arcs()[1].token == "a");

  // Equal scores tie-break by token.
  ArcSet t({{"z", 0.5}, {"a", 0.5}});
  CHECK(t.arcs()[0].token == "a");

  CHECK_THROWS_AS(ArcSet({}), ValidationError);
  CHECK_THROWS_AS(ArcSet({{"x", 1.5}}), ValidationError);
  CHECK_THROWS_AS(ArcSet({{"x", 0.0}}), ValidationError);
  CHECK_THROWS_AS(ArcSet({{"", 0.5}}), ValidationError);
  CHECK_THROWS_AS(ArcSet({{"x", 0.7}, {"y", 0.7}}), ValidationError);
}

TEST_CASE("parse_confnet round trip and errors") {
  const std::string doc =
      R"({"utterance_id":"u1","positions":[[{"token":"hello","score":1.0}]]})";
  ConfusionNetwork net = parse_confnet(doc);
  CHECK(net.size() == 1);
  CHECK(net.utterance_id == "u1");
  CHECK(net.positions[0].top().token == "hello");

  // Unsorted input is re-sorted.
  ConfusionNetwork two = parse_confnet(
      R"({"utterance_id":"u2","positions":[[{"token":"a","score":0.2},{"token":"b","score":0.8}]]})");
  CHECK(two.positions[0].arcs()[0].token == "b");
  CHECK(two.positions[0].arcs()[1].token == "a");

  CHECK_THROWS_WITH_AS(
      parse_confnet(
          R"({"utterance_id":"u","positions":[[{"token":"x","score":1.5}]]})"),
      doctest::Contains("position 0"), ValidationError);
  CHECK_THROWS_AS(parse_confnet("{not json"), ValidationError);
  CHECK_THROWS_WITH_AS(
      parse_confnet(R"({"utterance_id":"u","positions":[[]]})"),
      doctest::Contains("position 0"), ValidationError);

  // Serialization round trip.
  CHECK(parse_confnet(confnet_to_jsonl(two)) == two);
}

TEST_CASE("prune keeps top arc and is idempotent") {
  ConfusionNetwork net = make_net({{{"the", 0.9}, {"a", 0.0005}}});
  ConfusionNetwork pruned = prune(net, 0.001);
  CHECK(pruned.positions[0].size() == 1);
  CHECK(pruned.positions[0].top().token == "the");

  CHECK(prune(net, 0.0) == net);

  ConfusionNetwork tiny = make_net({{{"x", 0.0004}, {"y", 0.0003}}});
  ConfusionNetwork kept = prune(tiny, 0.001);
  REQUIRE(kept.positions[0].size() == 1);
  CHECK(kept.positions[0].top().token == "x");

  CHECK_THROWS_AS(prune(net, 1.0), ValidationError);
  CHECK_THROWS_AS(prune(net, -0.1), ValidationError);
}

TEST_CASE("prune properties on random nets") {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const ConfusionNetwork net = random_net(rng, 6, 5);
    const double threshold = rng.uniform(0.0, 0.9);
    const ConfusionNetwork pruned = prune(net, threshold);

    REQUIRE(pruned.size() == net.size());
    for (size_t t = 0; t < net.size(); ++t) {
      // Subset of the original arcs and original top kept.
      for (const Arc& a : pruned.positions[t].arcs()) {
        const auto& orig = net.positions[t].arcs();
        CHECK(std::find(orig.begin(), orig.end(), a) != orig.end());
      }
      CHECK(pruned.positions[t].top() == net.positions[t].top());
    }
    CHECK(prune(pruned, threshold) == pruned);
  }
}

TEST_CASE("remove_interjections") {
  const auto& stop = default_interjections();
  ConfusionNetwork net = make_net({{{"um", 1.0}}, {{"hi", 1.0}}});
  ConfusionNetwork out = remove_interjections(net, stop);
  REQUIRE(out.size() == 1);
  CHECK(out.positions[0].top().token == "hi");

  ConfusionNetwork part = make_net({{{"um", 0.6}, {"them", 0.4}}});
  ConfusionNetwork kept = remove_interjections(part, stop);
  REQUIRE(kept.positions[0].size() == 1);
  CHECK(kept.positions[0].top().token == "them");
  CHECK(kept.positions[0].top().score == 0.4);  // no renormalization

  ConfusionNetwork clean = make_net({{{"hello", 1.0}}});
  CHECK(remove_interjections(clean, stop) == clean);

  CHECK_THROWS_AS(remove_interjections(net, {}), ValidationError);
}

TEST_CASE("truncate_arcs") {
  std::vector<std::vector<std::pair<std::string, double>>> wide(1);
  for (int i = 0; i < 9; ++i) {
    wide[0].emplace_back("w" + std::to_string(i), 0.1 - 0.005 * i);
  }
  ConfusionNetwork net = make_net(wide);
  ConfusionNetwork cut = truncate_arcs(net, 5);
  REQUIRE(cut.positions[0].size() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(cut.positions[0].arcs()[i] == net.positions[0].arcs()[i]);
  }

  CHECK(truncate_arcs(net, 50) == net);

  ConfusionNetwork small = make_net({{{"a", 0.5}, {"b", 0.3}, {"c", 0.2}}});
  ConfusionNetwork two = truncate_arcs(small, 2);
  REQUIRE(two.positions[0].size() == 2);
  CHECK(two.positions[0].arcs()[0].token == "a");
  CHECK(two.positions[0].arcs()[1].token == "b");

  CHECK_THROWS_AS(truncate_arcs(net, 0), ValidationError);
}

TEST_CASE("from_transcript") {
  ConfusionNetwork net = from_transcript({"cheap", "food"});
  REQUIRE(net.size() == 2);
  for (const ArcSet& pos : net.positions) {
    CHECK(pos.size() == 1);
    CHECK(pos.top().score == 1.0);
  }
  CHECK(from_transcript({"hi"}).size() == 1);
  CHECK_THROWS_AS(from_transcript({}), ValidationError);
  CHECK_THROWS_AS(from_transcript({""}), ValidationError);
}

TEST_CASE("n_best_paths on the 2x2 example") {
  ConfusionNetwork net =
      make_net({{{"a", 0.6}, {"b", 0.4}}, {{"c", 0.7}, {"d", 0.3}}});
  const std::vector<Path> paths = n_best_paths(net, 3);
  REQUIRE(paths.size() == 3);
  CHECK(paths[0].tokens == std::vector<std::string>{"a", "c"});
  CHECK(paths[0].score == doctest::Approx(0.42).epsilon(1e-12));
  CHECK(paths[1].tokens == std::vector<std::string>{"b", "c"});
  CHECK(paths[1].score == doctest::Approx(0.28).epsilon(1e-12));
  CHECK(paths[2].tokens == std::vector<std::string>{"a", "d"});
  CHECK(paths[2].score == doctest::Approx(0.18).epsilon(1e-12));

  CHECK(best_path(net).tokens == std::vector<std::string>{"a", "c"});
  CHECK(best_path(net).score == doctest::Approx(0.42).epsilon(1e-12));
}

TEST_CASE("n_best_paths edge cases") {
  // Single-arc positions: exactly one path.
  ConfusionNetwork single = from_transcript({"i", "need"});
  const std::vector<Path> only = n_best_paths(single, 5);
  REQUIRE(only.size() == 1);
  CHECK(only[0].tokens == std::vector<std::string>{"i", "need"});
  CHECK(only[0].score == 1.0);
  CHECK(best_path(single).tokens == std::vector<std::string>{"i", "need"});
  CHECK(best_path(single).score == 1.0);

  // Epsilon arcs keep their score but lose their token.
  ConfusionNetwork eps = make_net({{{"x", 0.9}, {kEpsToken, 0.1}}});
  const std::vector<Path> top = n_best_paths(eps, 1);
  REQUIRE(top.size() == 1);
  CHECK(top[0].tokens == std::vector<std::string>{"x"});
  CHECK(top[0].score == doctest::Approx(0.9).epsilon(1e-12));

  ConfusionNetwork one = make_net({{{"a", 0.6}, {"b", 0.4}}});
  CHECK(best_path(one).tokens == std::vector<std::string>{"a"});
  CHECK(best_path(one).score == 0.6);

  CHECK_THROWS_AS(n_best_paths(one, 0), ValidationError);
}

TEST_CASE("n_best_paths matches brute force on random nets") {
  Rng rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const ConfusionNetwork net = random_net(rng, 8, 5);
    const auto expected = brute_force_paths(net, 10);
    const auto actual = n_best_paths(net, 10);
    REQUIRE(actual.size() == expected.size());
    for (size_t i = 0; i < actual.size(); ++i) {
      CHECK(actual[i].tokens == expected[i].tokens);
      CHECK(actual[i].score ==
            doctest::Approx(expected[i].score).epsilon(1e-12));
    }
    // Scores are non-increasing.
    for (size_t i = 1; i < actual.size(); ++i) {
      CHECK(actual[i].score <= actual[i - 1].score);
    }
  }
}

TEST_CASE("truncation preserves the best path") {
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const ConfusionNetwork net = random_net(rng, 6, 5);
    for (int k : {1, 2, 3, 7}) {
      const Path full = best_path(net);
      const Path cut = best_path(truncate_arcs(net, k));
      CHECK(full.tokens == cut.tokens);
      CHECK(full.score == cut.score);
    }
  }
}

TEST_CASE("renormalize makes positions sum to one") {
  ConfusionNetwork net = make_net({{{"a", 0.5}, {"b", 0.1}}});
  ConfusionNetwork out = renormalize(net);
  double sum = 0.0;
  for (const Arc& a : out.positions[0].arcs()) sum += a.score;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}
