// tests/test_embeddings.cc

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

#include <cstdio>
#include <fstream>
#include <string>

#include "confnet/confusion-network.h"
#include "confnet/embeddings.h"
#include "confnet/errors.h"

using namespace confnet;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& contents) {
    static int counter = 0;
    path = "embtest_" + std::to_string(counter++) + ".txt";
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("vocabulary reserves unk and eps") {
  Vocabulary v({"hello", "world"});
  CHECK(v.contains(kUnkToken));
  CHECK(v.contains(kEpsToken));
  CHECK(v.size() == 4);
  CHECK(v.index("hello") == v.index("hello"));
  CHECK(v.index("missing") == v.unk_index());

  // Stable indices: explicit reserved placement is preserved.
  Vocabulary w({"a", kUnkToken, kEpsToken, "b"});
  CHECK(w.size() == 4);
  CHECK(w.unk_index() == 1);
  CHECK(w.eps_index() == 2);

  CHECK_THROWS_AS(Vocabulary({"dup", "dup"}), ValidationError);
}

TEST_CASE("random table is seeded and zero for eps") {
  Vocabulary v({"a", "b", "c"});
  Rng r1(77), r2(77);
  EmbeddingTable t1 = EmbeddingTable::random(v, 8, r1);
  EmbeddingTable t2 = EmbeddingTable::random(v, 8, r2);
  CHECK(t1.matrix() == t2.matrix());
  CHECK(t1.content_hash() == t2.content_hash());

  CHECK(t1.lookup(kEpsToken).cwiseAbs().maxCoeff() == 0.0);
  CHECK(t1.lookup("a") == t1.matrix().row(v.index("a")).transpose());
  CHECK(t1.lookup("zzz") == t1.lookup(kUnkToken));
  CHECK(t1.matrix().cwiseAbs().maxCoeff() <= 0.1);

  Rng r3(77);
  CHECK_THROWS_AS(EmbeddingTable::random(v, 1, r3), ValidationError);
}

TEST_CASE("explicit table validation") {
  Vocabulary v({"a"});
  Mat good = Mat::Zero(3, 4);
  CHECK_NOTHROW(EmbeddingTable(v, good));

  Mat bad_rows = Mat::Zero(2, 4);
  CHECK_THROWS_AS(EmbeddingTable(v, bad_rows), ValidationError);

  Mat bad_eps = Mat::Zero(3, 4);
  bad_eps(v.eps_index(), 0) = 0.5;
  CHECK_THROWS_AS(EmbeddingTable(v, bad_eps), ValidationError);
}

TEST_CASE("load table from word-vector text") {
  Vocabulary v({"alpha", "beta"});

  SUBCASE("file covers all tokens") {
    TempFile f(
        "alpha 1 2 3\n"
        "beta 4 5 6\n"
        "<unk> 7 8 9\n"
        "<eps> 1 1 1\n");
    Rng rng(5);
    EmbeddingTable t = EmbeddingTable::from_file(f.path, v, 3, rng);
    Vec a = t.lookup("alpha");
    CHECK(a(0) == 1.0);
    CHECK(a(2) == 3.0);
    CHECK(t.lookup(kUnkToken)(0) == 7.0);
    // eps forced to zero even when the file provides it.
    CHECK(t.lookup(kEpsToken).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("empty file behaves like the random constructor") {
    TempFile f("");
    Rng r1(9), r2(9);
    EmbeddingTable loaded = EmbeddingTable::from_file(f.path, v, 4, r1);
    EmbeddingTable random = EmbeddingTable::random(v, 4, r2);
    CHECK(loaded.matrix() == random.matrix());
  }

  SUBCASE("mixed dimensions error") {
    TempFile f(
        "alpha 1 2 3\n"
        "beta 4 5\n");
    Rng rng(5);
    CHECK_THROWS_WITH_AS(EmbeddingTable::from_file(f.path, v, 3, rng),
                         doctest::Contains("inconsistent dimensions"),
                         ValidationError);
  }

  SUBCASE("unreadable file") {
    Rng rng(5);
    CHECK_THROWS_AS(
        EmbeddingTable::from_file("/nonexistent/emb.txt", v, 3, rng),
        ValidationError);
  }
}

TEST_CASE("lookup is deterministic") {
  Vocabulary v({"x", "y"});
  Rng rng(4);
  EmbeddingTable t = EmbeddingTable::random(v, 6, rng);
  CHECK(t.lookup("x") == t.lookup("x"));
  const uint64_t h = t.content_hash();
  (void)t.lookup("x");
  (void)t.lookup("nope");
  CHECK(t.content_hash() == h);
}
