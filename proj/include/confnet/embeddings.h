// confnet/embeddings.h

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

#ifndef CONFNET_EMBEDDINGS_H_
#define CONFNET_EMBEDDINGS_H_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "confnet/numerics.h"

namespace confnet {

inline constexpr const char* kUnkToken = "<unk>";

/// Ordered token inventory with stable indices.  The reserved tokens
/// "<unk>" and "<eps>" are always present; if the input list lacks them
/// they are prepended in that order.
class Vocabulary {
 public:
  explicit Vocabulary(std::vector<std::string> tokens);

  size_t size() const { return tokens_.size(); }
  const std::string& token(size_t index) const { return tokens_.at(index); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  /// Index of token, or the "<unk>" index if absent.
  size_t index(const std::string& token) const;
  bool contains(const std::string& token) const;

  size_t unk_index() const { return unk_index_; }
  size_t eps_index() const { return eps_index_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.tokens_ == b.tokens_;
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, size_t> index_;
  size_t unk_index_ = 0;
  size_t eps_index_ = 0;
};

/// Frozen token-embedding table: one d-dimensional row per vocabulary
/// entry, the "<eps>" row pinned to zero.  There are no mutators; the
/// table's contents never change after construction, which is what the
/// training contract relies on (assertable via content_hash).
class EmbeddingTable {
 public:
  /// Explicit table (rows = |vocab|, cols = dim >= 2, <eps> row zero).
  EmbeddingTable(Vocabulary vocab, Mat table);

  /// Seeded random table: rows i.i.d. uniform in [-0.1, 0.1], except the
  /// "<eps>" row which is zero.
  static EmbeddingTable random(Vocabulary vocab, int dim, Rng& rng);

  /// Word2vec-style text table: lines "token v1 v2 ... vd".  Tokens found
  /// in the file get the file's vector; missing vocabulary tokens get
  /// seeded random rows; "<eps>" is forced to zero.  Every line must have
  /// exactly dim values.
  static EmbeddingTable from_file(const std::string& path, Vocabulary vocab,
                                  int dim, Rng& rng);

  const Vocabulary& vocab() const { return vocab_; }
  int dim() const { return static_cast<int>(table_.cols()); }
  const Mat& matrix() const { return table_; }

  /// Row for token; unknown tokens resolve to the "<unk>" row.
  Vec lookup(const std::string& token) const {
    return table_.row(vocab_.index(token)).transpose();
  }

  /// FNV-1a over the raw row-major double bits.  Equal hashes before and
  /// after a training run certify frozenness.
  uint64_t content_hash() const;

 private:
  Vocabulary vocab_;
  Mat table_;
};

}  // namespace confnet

#endif  // CONFNET_EMBEDDINGS_H_
