// confnet/evalbench.cc

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

#include "confnet/evalbench.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "confnet/errors.h"

namespace confnet {

using nlohmann::json;

json eval_report_to_json(const EvalReport& r) {
  json j{{"joint_goal", r.joint_goal},
         {"turn_inform", r.turn_inform},
         {"turn_request", r.turn_request},
         {"n_turns", r.n_turns}};
  if (!r.timing.empty()) j["timing"] = r.timing;
  return j;
}

EvalReport eval_report_from_json(const json& j) {
  if (!j.is_object() || !j.contains("joint_goal") ||
      !j.contains("turn_inform") || !j.contains("turn_request")) {
    throw ValidationError("eval report: missing accuracy fields");
  }
  EvalReport r;
  r.joint_goal = j["joint_goal"].get<double>();
  r.turn_inform = j["turn_inform"].get<double>();
  r.turn_request = j["turn_request"].get<double>();
  r.n_turns = j.value("n_turns", 0);
  if (j.contains("timing")) {
    r.timing = j["timing"].get<std::map<std::string, double>>();
  }
  return r;
}

EvalMode parse_eval_mode(const std::string& mode) {
  EvalMode m;
  if (mode == "confnet") {
    m.kind = EvalMode::Kind::kConfnet;
    return m;
  }
  if (mode.rfind("confnet-", 0) == 0) {
    m.kind = EvalMode::Kind::kConfnet;
    m.max_arcs_override = std::stoi(mode.substr(8));
    if (*m.max_arcs_override < 1) {
      throw ValidationError("mode: truncation width must be >= 1");
    }
    return m;
  }
  if (mode.rfind("asr-", 0) == 0) {
    m.kind = EvalMode::Kind::kAsrN;
    m.asr_n = std::stoi(mode.substr(4));
    if (m.asr_n < 1) throw ValidationError("mode: asr-N needs N >= 1");
    return m;
  }
  throw ValidationError("unknown eval mode '" + mode +
                        "' (want confnet, confnet-K or asr-N)");
}

namespace {

Prediction predict_turn(const Checkpoint& ckpt, const Turn& turn,
                        const EvalMode& mode) {
  if (mode.kind == EvalMode::Kind::kAsrN) {
    return predict_asr_nlist(ckpt.model, ckpt.encoder, ckpt.table,
                             n_best_paths(turn.confnet, mode.asr_n));
  }
  // A turn with an empty confnet (empty utterance) pools a single null
  // arc so the context map has one position to work with.
  const ConfusionNetwork* net = &turn.confnet;
  ConfusionNetwork scratch;
  if (net->positions.empty()) {
    scratch = from_transcript({kEpsToken});
    net = &scratch;
  } else {
    scratch = truncate_arcs(*net, mode.max_arcs_override.value_or(ckpt.max_arcs));
    net = &scratch;
  }
  return predict(ckpt.model, encode_network(ckpt.encoder, ckpt.table, *net));
}

struct DialogueCounts {
  int joint = 0;
  int inform = 0;
  int request = 0;
  int turns = 0;
};

DialogueCounts evaluate_dialogue(const Checkpoint& ckpt, const Dialogue& d,
                                 const EvalMode& mode, double threshold) {
  const Ontology& ontology = ckpt.ontology;
  DialogueCounts counts;
  std::map<std::string, std::string> predicted_goal;
  for (const Turn& turn : d.turns) {
    const Prediction pred = predict_turn(ckpt, turn, mode);

    std::vector<std::pair<std::string, std::string>> pred_inform;
    std::vector<std::string> pred_request;
    for (const Ontology::Slot& slot : ontology.slots()) {
      double best_prob = threshold;
      const std::string* best_value = nullptr;
      for (const std::string& value : slot.values) {
        const double p = pred.probs[ontology.pair_index(slot.name, value)];
        if (p > threshold) pred_inform.emplace_back(slot.name, value);
        if (p > best_prob) {  // strict: ties resolve to ontology order
          best_prob = p;
          best_value = &value;
        }
      }
      if (best_value != nullptr) predicted_goal[slot.name] = *best_value;
      if (pred.probs[ontology.pair_index(kRequestSlot, slot.name)] >
          threshold) {
        pred_request.push_back(slot.name);
      }
    }
    std::sort(pred_inform.begin(), pred_inform.end());
    std::sort(pred_request.begin(), pred_request.end());

    counts.turns += 1;
    counts.inform += pred_inform == turn.turn_inform ? 1 : 0;
    counts.request += pred_request == turn.turn_request ? 1 : 0;
    counts.joint += predicted_goal == turn.gold_goal ? 1 : 0;
  }
  return counts;
}

void validate_corpus_labels(const Ontology& ontology,
                            const std::vector<Dialogue>& corpus) {
  for (const Dialogue& d : corpus) {
    for (const Turn& t : d.turns) {
      gold_vector(ontology, t);  // throws on ontology mismatch
      for (const auto& [slot, value] : t.gold_goal) {
        if (!ontology.has_pair(slot, value)) {
          throw ValidationError("evaluate: goal pair (" + slot + ", " + value +
                                ") not in checkpoint ontology");
        }
      }
    }
  }
}

}  // namespace

EvalReport evaluate(const Checkpoint& ckpt,
                    const std::vector<Dialogue>& corpus, const EvalMode& mode,
                    const EvalOptions& opts) {
  validate_corpus_labels(ckpt.ontology, corpus);

  std::vector<DialogueCounts> per_dialogue(corpus.size());
  const int threads = std::max(1, opts.threads);
  if (threads == 1 || corpus.size() < 2) {
    for (size_t i = 0; i < corpus.size(); ++i) {
      per_dialogue[i] =
          evaluate_dialogue(ckpt, corpus[i], mode, opts.threshold);
    }
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&]() {
      for (size_t i = next.fetch_add(1); i < corpus.size();
           i = next.fetch_add(1)) {
        per_dialogue[i] =
            evaluate_dialogue(ckpt, corpus[i], mode, opts.threshold);
      }
    };
    std::vector<std::thread> pool;
    const int n = std::min<size_t>(threads, corpus.size());
    pool.reserve(n);
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  DialogueCounts total;
  for (const DialogueCounts& c : per_dialogue) {
    total.joint += c.joint;
    total.inform += c.inform;
    total.request += c.request;
    total.turns += c.turns;
  }
  if (total.turns == 0) throw ValidationError("evaluate: corpus has no turns");

  EvalReport r;
  r.n_turns = total.turns;
  r.joint_goal = static_cast<double>(total.joint) / total.turns;
  r.turn_inform = static_cast<double>(total.inform) / total.turns;
  r.turn_request = static_cast<double>(total.request) / total.turns;
  return r;
}

SeedAggregate aggregate_seeds(const std::vector<EvalReport>& reports) {
  if (reports.size() < 2) {
    throw ValidationError("aggregate_seeds: need at least 2 reports");
  }
  auto stat = [&](auto metric) {
    const double n = static_cast<double>(reports.size());
    double mean = 0.0;
    for (const EvalReport& r : reports) mean += metric(r);
    mean /= n;
    double ss = 0.0;
    for (const EvalReport& r : reports) {
      const double d = metric(r) - mean;
      ss += d * d;
    }
    SeedAggregate::Stat s;
    s.mean = mean;
    s.se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    return s;
  };
  SeedAggregate agg;
  agg.runs = static_cast<int>(reports.size());
  agg.joint_goal = stat([](const EvalReport& r) { return r.joint_goal; });
  agg.turn_inform = stat([](const EvalReport& r) { return r.turn_inform; });
  agg.turn_request = stat([](const EvalReport& r) { return r.turn_request; });
  return agg;
}

json seed_aggregate_to_json(const SeedAggregate& agg) {
  auto stat = [](const SeedAggregate::Stat& s) {
    return json{{"mean", s.mean}, {"se", s.se}};
  };
  return json{{"runs", agg.runs},
              {"joint_goal", stat(agg.joint_goal)},
              {"turn_inform", stat(agg.turn_inform)},
              {"turn_request", stat(agg.turn_request)}};
}

namespace {

// Keeps timed prediction work observable so it cannot be optimized away.
volatile double g_bench_sink = 0.0;

}  // namespace

std::map<std::string, double> bench_inference(
    const Checkpoint& ckpt, const std::vector<Dialogue>& corpus,
    const std::vector<std::string>& modes, int batch_size, int repetitions) {
  if (repetitions < 3) {
    throw ValidationError("bench_inference: repetitions must be >= 3");
  }
  if (batch_size < 1) {
    throw ValidationError("bench_inference: batch_size must be >= 1");
  }
  std::vector<const Turn*> turns;
  for (const Dialogue& d : corpus) {
    for (const Turn& t : d.turns) turns.push_back(&t);
  }
  if (turns.empty()) throw ValidationError("bench_inference: corpus has no turns");

  std::map<std::string, double> out;
  for (const std::string& mode_str : modes) {
    const EvalMode mode = parse_eval_mode(mode_str);

    // Untimed preparation: truncation / N-best extraction.
    std::vector<ConfusionNetwork> nets;
    std::vector<std::vector<Path>> lists;
    for (int i = 0; i < batch_size; ++i) {
      const Turn& t = *turns[i % turns.size()];
      if (mode.kind == EvalMode::Kind::kConfnet) {
        nets.push_back(truncate_arcs(
            t.confnet, mode.max_arcs_override.value_or(ckpt.max_arcs)));
      } else {
        lists.push_back(n_best_paths(t.confnet, mode.asr_n));
      }
    }

    auto run_batch = [&]() {
      double sink = 0.0;
      if (mode.kind == EvalMode::Kind::kConfnet) {
        for (const ConfusionNetwork& net : nets) {
          const Prediction p = predict(
              ckpt.model, encode_network(ckpt.encoder, ckpt.table, net));
          sink += p.probs[0];
        }
      } else {
        for (const std::vector<Path>& hyps : lists) {
          const Prediction p =
              predict_asr_nlist(ckpt.model, ckpt.encoder, ckpt.table, hyps);
          sink += p.probs[0];
        }
      }
      g_bench_sink = g_bench_sink + sink;
    };

    run_batch();  // warm-up
    std::vector<double> times;
    times.reserve(repetitions);
    for (int rep = 0; rep < repetitions; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      run_batch();
      const auto t1 = std::chrono::steady_clock::now();
      times.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    std::sort(times.begin(), times.end());
    const size_t mid = times.size() / 2;
    out[mode_str] = times.size() % 2 == 1
                        ? times[mid]
                        : 0.5 * (times[mid - 1] + times[mid]);
  }
  return out;
}

std::string dump_attention(const Checkpoint& ckpt,
                           const ConfusionNetwork& net) {
  if (ckpt.encoder.variant != Variant::kV3 &&
      ckpt.encoder.variant != Variant::kV4) {
    throw ValidationError("variant has no attention weights");
  }
  const std::vector<PositionEncoding> encs =
      encode_network(ckpt.encoder, ckpt.table, net);

  size_t max_width = 0;
  for (const ArcSet& pos : net.positions) {
    max_width = std::max(max_width, pos.size());
  }

  std::ostringstream csv;
  for (size_t t = 0; t < net.positions.size(); ++t) {
    csv << (t == 0 ? "" : ",") << "pos" << t;
  }
  csv << "\n";
  char buf[64];
  for (size_t row = 0; row < max_width; ++row) {
    for (size_t t = 0; t < net.positions.size(); ++t) {
      if (t != 0) csv << ",";
      const ArcSet& pos = net.positions[t];
      if (row >= pos.size()) continue;
      std::snprintf(buf, sizeof(buf), "%.17g", (*encs[t].attention)(row));
      csv << pos.arcs()[row].token << ":" << buf;
    }
    csv << "\n";
  }
  return csv.str();
}

}  // namespace confnet
