// confnet/embeddings.cc

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

#include "confnet/embeddings.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "confnet/confusion-network.h"
#include "confnet/errors.h"

namespace confnet {

Vocabulary::Vocabulary(std::vector<std::string> tokens) {
  bool has_unk = false;
  bool has_eps = false;
  for (const std::string& t : tokens) {
    if (t == kUnkToken) has_unk = true;
    if (t == kEpsToken) has_eps = true;
  }
  if (!has_eps) tokens.insert(tokens.begin(), kEpsToken);
  if (!has_unk) tokens.insert(tokens.begin(), kUnkToken);
  tokens_ = std::move(tokens);
  for (size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i].empty()) throw ValidationError("Vocabulary: empty token");
    if (!index_.emplace(tokens_[i], i).second) {
      throw ValidationError("Vocabulary: duplicate token '" + tokens_[i] + "'");
    }
  }
  unk_index_ = index_.at(kUnkToken);
  eps_index_ = index_.at(kEpsToken);
}

size_t Vocabulary::index(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? unk_index_ : it->second;
}

bool Vocabulary::contains(const std::string& token) const {
  return index_.count(token) != 0;
}

EmbeddingTable::EmbeddingTable(Vocabulary vocab, Mat table)
    : vocab_(std::move(vocab)), table_(std::move(table)) {
  if (table_.cols() < 2) {
    throw ValidationError("EmbeddingTable: dim must be >= 2");
  }
  if (static_cast<size_t>(table_.rows()) != vocab_.size()) {
    throw ValidationError("EmbeddingTable: row count does not match vocabulary");
  }
  if (!all_finite(table_)) {
    throw ValidationError("EmbeddingTable: non-finite entries");
  }
  if (table_.row(vocab_.eps_index()).cwiseAbs().maxCoeff() != 0.0) {
    throw ValidationError("EmbeddingTable: '<eps>' row must be zero");
  }
}

EmbeddingTable EmbeddingTable::random(Vocabulary vocab, int dim, Rng& rng) {
  if (dim < 2) throw ValidationError("EmbeddingTable: dim must be >= 2");
  Mat table(vocab.size(), dim);
  for (Eigen::Index r = 0; r < table.rows(); ++r) {
    for (Eigen::Index c = 0; c < table.cols(); ++c) {
      table(r, c) = rng.uniform(-0.1, 0.1);
    }
  }
  table.row(vocab.eps_index()).setZero();
  return EmbeddingTable(std::move(vocab), std::move(table));
}

EmbeddingTable EmbeddingTable::from_file(const std::string& path,
                                         Vocabulary vocab, int dim, Rng& rng) {
  std::ifstream in(path);
  if (!in) throw ValidationError("EmbeddingTable: cannot read '" + path + "'");

  std::unordered_map<std::string, std::vector<double>> rows;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream iss(line);
    std::string token;
    iss >> token;
    std::vector<double> values;
    double v;
    while (iss >> v) values.push_back(v);
    if (static_cast<int>(values.size()) != dim) {
      std::ostringstream oss;
      oss << "EmbeddingTable: '" << path << "' line " << lineno
          << ": inconsistent dimensions (got " << values.size() << ", want "
          << dim << ")";
      throw ValidationError(oss.str());
    }
    rows[token] = std::move(values);
  }

  EmbeddingTable out = EmbeddingTable::random(std::move(vocab), dim, rng);
  for (size_t i = 0; i < out.vocab_.size(); ++i) {
    auto it = rows.find(out.vocab_.token(i));
    if (it == rows.end()) continue;
    for (int c = 0; c < dim; ++c) out.table_(i, c) = it->second[c];
  }
  out.table_.row(out.vocab_.eps_index()).setZero();
  if (!all_finite(out.table_)) {
    throw ValidationError("EmbeddingTable: non-finite entries in '" + path + "'");
  }
  return out;
}

uint64_t EmbeddingTable::content_hash() const {
  uint64_t h = 14695981039346656037ull;
  auto mix = [&h](const void* data, size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  for (Eigen::Index r = 0; r < table_.rows(); ++r) {
    for (Eigen::Index c = 0; c < table_.cols(); ++c) {
      const double v = table_(r, c);
      uint64_t bits;
      std::memcpy(&bits, &v, sizeof(bits));
      mix(&bits, sizeof(bits));
    }
  }
  return h;
}

}  // namespace confnet
