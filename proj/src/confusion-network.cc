// confnet/confusion-network.cc

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

#include "confnet/confusion-network.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

#include "confnet/errors.h"

namespace confnet {

namespace {

constexpr double kSumSlack = 1e-6;

bool arc_order(const Arc& a, const Arc& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.token < b.token;
}

}  // namespace

ArcSet::ArcSet(std::vector<Arc> arcs) : arcs_(std::move(arcs)) {
  if (arcs_.empty()) throw ValidationError("ArcSet: empty arc set");
  double sum = 0.0;
  for (const Arc& a : arcs_) {
    if (a.token.empty()) throw ValidationError("ArcSet: empty token");
    if (!(a.score > 0.0) || !(a.score <= 1.0) || !std::isfinite(a.score)) {
      std::ostringstream oss;
      oss << "ArcSet: score out of range (0,1] for token '" << a.token
          << "': " << a.score;
      throw ValidationError(oss.str());
    }
    sum += a.score;
  }
  if (sum > 1.0 + kSumSlack) {
    std::ostringstream oss;
    oss << "ArcSet: arc scores sum to " << sum << " > 1";
    throw ValidationError(oss.str());
  }
  std::stable_sort(arcs_.begin(), arcs_.end(), arc_order);
}

const std::set<std::string>& default_interjections() {
  static const std::set<std::string> kList = {"um", "uh", "ah", "oh", "hmm"};
  return kList;
}

ConfusionNetwork prune(const ConfusionNetwork& net, double threshold) {
  if (!(threshold >= 0.0) || !(threshold < 1.0)) {
    throw ValidationError("prune: threshold must be in [0, 1)");
  }
  ConfusionNetwork out;
  out.utterance_id = net.utterance_id;
  out.positions.reserve(net.positions.size());
  for (const ArcSet& pos : net.positions) {
    std::vector<Arc> kept;
    for (const Arc& a : pos.arcs()) {
      if (a.score >= threshold) kept.push_back(a);
    }
    // The top arc survives even below threshold, so no position empties.
    if (kept.empty()) kept.push_back(pos.top());
    out.positions.emplace_back(std::move(kept));
  }
  return out;
}

ConfusionNetwork remove_interjections(const ConfusionNetwork& net,
                                      const std::set<std::string>& stoplist) {
  if (stoplist.empty()) {
    throw ValidationError("remove_interjections: empty stoplist");
  }
  ConfusionNetwork out;
  out.utterance_id = net.utterance_id;
  for (const ArcSet& pos : net.positions) {
    std::vector<Arc> kept;
    for (const Arc& a : pos.arcs()) {
      if (stoplist.count(a.token) == 0) kept.push_back(a);
    }
    if (!kept.empty()) out.positions.emplace_back(std::move(kept));
  }
  return out;
}

ConfusionNetwork truncate_arcs(const ConfusionNetwork& net, int max_arcs) {
  if (max_arcs < 1) throw ValidationError("truncate_arcs: max_arcs must be >= 1");
  ConfusionNetwork out;
  out.utterance_id = net.utterance_id;
  out.positions.reserve(net.positions.size());
  for (const ArcSet& pos : net.positions) {
    const size_t keep = std::min<size_t>(pos.size(), max_arcs);
    std::vector<Arc> kept(pos.arcs().begin(), pos.arcs().begin() + keep);
    out.positions.emplace_back(std::move(kept));
  }
  return out;
}

ConfusionNetwork renormalize(const ConfusionNetwork& net) {
  ConfusionNetwork out;
  out.utterance_id = net.utterance_id;
  out.positions.reserve(net.positions.size());
  for (const ArcSet& pos : net.positions) {
    double sum = 0.0;
    for (const Arc& a : pos.arcs()) sum += a.score;
    std::vector<Arc> scaled = pos.arcs();
    for (Arc& a : scaled) a.score /= sum;
    out.positions.emplace_back(std::move(scaled));
  }
  return out;
}

ConfusionNetwork from_transcript(const std::vector<std::string>& tokens,
                                 const std::string& utterance_id) {
  if (tokens.empty()) throw ValidationError("from_transcript: empty transcript");
  ConfusionNetwork out;
  out.utterance_id = utterance_id;
  out.positions.reserve(tokens.size());
  for (const std::string& tok : tokens) {
    if (tok.empty()) throw ValidationError("from_transcript: empty token");
    out.positions.emplace_back(std::vector<Arc>{{tok, 1.0}});
  }
  return out;
}

namespace {

// Frontier state for the n-best search: one arc index per position.
struct NBestState {
  double score;
  std::vector<int> idx;
};

// Left-to-right product over positions.  Recomputed in full for every
// state so that equal index vectors always score bit-identically,
// keeping the lexicographic tie-break stable.
double state_score(const ConfusionNetwork& net, const std::vector<int>& idx) {
  double s = 1.0;
  for (size_t t = 0; t < idx.size(); ++t) {
    s *= net.positions[t].arcs()[idx[t]].score;
  }
  return s;
}

struct NBestWorse {
  // Max-heap ordering: higher score first, then lexicographically
  // smaller index sequence first.
  bool operator()(const NBestState& a, const NBestState& b) const {
    if (a.score != b.score) return a.score < b.score;
    return a.idx > b.idx;
  }
};

Path state_to_path(const ConfusionNetwork& net, const NBestState& s) {
  Path p;
  p.score = s.score;
  for (size_t t = 0; t < s.idx.size(); ++t) {
    const Arc& a = net.positions[t].arcs()[s.idx[t]];
    if (a.token != kEpsToken) p.tokens.push_back(a.token);
  }
  return p;
}

}  // namespace

std::vector<Path> n_best_paths(const ConfusionNetwork& net, int n) {
  if (n < 1) throw ValidationError("n_best_paths: n must be >= 1");
  if (net.positions.empty()) {
    // The empty utterance has exactly one (empty) path.
    return {Path{{}, 1.0}};
  }

  std::priority_queue<NBestState, std::vector<NBestState>, NBestWorse> heap;
  std::set<std::vector<int>> visited;

  NBestState root;
  root.idx.assign(net.positions.size(), 0);
  root.score = state_score(net, root.idx);
  heap.push(root);
  visited.insert(root.idx);

  std::vector<Path> out;
  while (!heap.empty() && out.size() < static_cast<size_t>(n)) {
    NBestState cur = heap.top();
    heap.pop();
    out.push_back(state_to_path(net, cur));

    for (size_t t = 0; t < cur.idx.size(); ++t) {
      const ArcSet& pos = net.positions[t];
      const int next = cur.idx[t] + 1;
      if (static_cast<size_t>(next) >= pos.size()) continue;
      NBestState succ = cur;
      succ.idx[t] = next;
      if (!visited.insert(succ.idx).second) continue;
      succ.score = state_score(net, succ.idx);
      heap.push(succ);
    }
  }
  return out;
}

Path best_path(const ConfusionNetwork& net) { return n_best_paths(net, 1)[0]; }

}  // namespace confnet
