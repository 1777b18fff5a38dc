// confnet/confusion-network.h

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

#ifndef CONFNET_CONFUSION_NETWORK_H_
#define CONFNET_CONFUSION_NETWORK_H_

#include <set>
#include <string>
#include <vector>

namespace confnet {

// Reserved null-arc token.  It carries score mass but no word; extracted
// paths drop it from their token sequences.
inline constexpr const char* kEpsToken = "<eps>";

/// One weighted word hypothesis at a confnet position.
struct Arc {
  std::string token;
  double score = 0.0;

  friend bool operator==(const Arc& a, const Arc& b) {
    return a.token == b.token && a.score == b.score;
  }
};

/// The parallel arcs of one confnet position.
///
/// Construction validates and canonicalizes: every token non-empty, every
/// score in (0,1], scores summing to at most 1 + 1e-6, and arcs sorted by
/// score descending with ties broken by token ascending.  Instances are
/// immutable afterwards.
class ArcSet {
 public:
  explicit ArcSet(std::vector<Arc> arcs);

  const std::vector<Arc>& arcs() const { return arcs_; }
  size_t size() const { return arcs_.size(); }
  const Arc& top() const { return arcs_.front(); }

  friend bool operator==(const ArcSet& a, const ArcSet& b) {
    return a.arcs_ == b.arcs_;
  }

 private:
  std::vector<Arc> arcs_;
};

/// A word confusion network: a sequence of positions, each a weighted set
/// of parallel arcs.  Positions may be empty only for an empty utterance.
struct ConfusionNetwork {
  std::string utterance_id;
  std::vector<ArcSet> positions;

  size_t size() const { return positions.size(); }

  friend bool operator==(const ConfusionNetwork& a, const ConfusionNetwork& b) {
    return a.utterance_id == b.utterance_id && a.positions == b.positions;
  }
};

/// One hypothesis through the network.  Epsilon arcs contribute to the
/// score product but are removed from the token sequence.
struct Path {
  std::vector<std::string> tokens;
  double score = 0.0;
};

// Default interjection stoplist.
const std::set<std::string>& default_interjections();

/// Removes arcs with score < threshold, except that the top-scoring arc
/// of each position always survives, so positions (and hence sequence
/// length) are preserved.  Scores are not renormalized.
ConfusionNetwork prune(const ConfusionNetwork& net, double threshold);

/// Drops arcs whose token is in the stoplist.  A position whose arcs are
/// all removed is dropped entirely; surviving arcs keep their scores.
ConfusionNetwork remove_interjections(const ConfusionNetwork& net,
                                      const std::set<std::string>& stoplist);

/// Keeps only the max_arcs highest-scoring arcs per position.
ConfusionNetwork truncate_arcs(const ConfusionNetwork& net, int max_arcs);

/// Rescales each position's scores to sum to 1.
ConfusionNetwork renormalize(const ConfusionNetwork& net);

/// Lifts a transcript into a confnet with a single arc of score 1.0 per
/// token.
ConfusionNetwork from_transcript(const std::vector<std::string>& tokens,
                                 const std::string& utterance_id = "");

/// Extracts the min(n, #paths) highest-scoring paths.
///
/// A path picks one arc per position and scores as the product of the
/// chosen scores.  Best-first search over the cross-product of the sorted
/// arc lists with a frontier heap and a visited set; score ties are broken
/// lexicographically by the sequence of chosen arc indices.
std::vector<Path> n_best_paths(const ConfusionNetwork& net, int n);

/// Equivalent to n_best_paths(net, 1)[0].
Path best_path(const ConfusionNetwork& net);

}  // namespace confnet

#endif  // CONFNET_CONFUSION_NETWORK_H_
