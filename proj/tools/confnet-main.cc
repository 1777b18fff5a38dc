// tools/confnet-main.cc

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
//
// confnet: turn ASR word confusion networks into embedding sequences,
// train slot-value dialogue-state classifiers on them, and benchmark
// against ASR-N-best-list prediction.
//
// Exit codes: 0 success, 1 usage error, 2 data/validation error,
// 3 numerical abort.  Diagnostics go to stderr, data to stdout.

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "confnet/checkpoint.h"
#include "confnet/confnet-json.h"
#include "confnet/confusion-network.h"
#include "confnet/datagen.h"
#include "confnet/errors.h"
#include "confnet/evalbench.h"
#include "confnet/gradcheck.h"
#include "confnet/trainer.h"

namespace {

using confnet::ValidationError;
using nlohmann::json;

// Stream subcommands echo their resolved configuration to stderr (the
// data stream on stdout stays pipeable); document subcommands embed it
// in their output JSON.
void echo_config(const json& config) {
  std::cerr << json{{"resolved_config", config}}.dump() << "\n";
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void for_each_stdin_confnet(
    const std::function<void(const confnet::ConfusionNetwork&)>& fn) {
  std::string line;
  size_t lineno = 0;
  while (std::getline(std::cin, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      fn(confnet::parse_confnet(line));
    } catch (const ValidationError& e) {
      std::ostringstream oss;
      oss << "stdin line " << lineno << ": " << e.what();
      throw ValidationError(oss.str());
    }
  }
}

// ---------------------------------------------------------------------
// prune

struct PruneArgs {
  double threshold = 0.001;
  bool renormalize = false;
  bool drop_interjections = false;
  std::string stoplist;
  int max_arcs = 0;  // 0 = no truncation
};

void run_prune(const PruneArgs& args) {
  echo_config(json{{"subcommand", "prune"},
                   {"threshold", args.threshold},
                   {"renormalize", args.renormalize},
                   {"drop_interjections", args.drop_interjections},
                   {"stoplist", args.stoplist},
                   {"max_arcs", args.max_arcs}});
  std::set<std::string> stop = confnet::default_interjections();
  if (!args.stoplist.empty()) {
    const auto items = split_commas(args.stoplist);
    stop = std::set<std::string>(items.begin(), items.end());
  }
  for_each_stdin_confnet([&](const confnet::ConfusionNetwork& net) {
    confnet::ConfusionNetwork out = net;
    if (args.drop_interjections) out = confnet::remove_interjections(out, stop);
    out = confnet::prune(out, args.threshold);
    if (args.max_arcs > 0) out = confnet::truncate_arcs(out, args.max_arcs);
    if (args.renormalize) out = confnet::renormalize(out);
    std::cout << confnet::confnet_to_jsonl(out) << "\n";
  });
}

// ---------------------------------------------------------------------
// nbest

void run_nbest(int n) {
  echo_config(json{{"subcommand", "nbest"}, {"n", n}});
  for_each_stdin_confnet([&](const confnet::ConfusionNetwork& net) {
    const std::vector<confnet::Path> paths = confnet::n_best_paths(net, n);
    for (size_t i = 0; i < paths.size(); ++i) {
      std::cout << json{{"utterance_id", net.utterance_id},
                        {"rank", i + 1},
                        {"tokens", paths[i].tokens},
                        {"score", paths[i].score}}
                       .dump()
                << "\n";
    }
  });
}

// ---------------------------------------------------------------------
// stats

void run_stats() {
  echo_config(json{{"subcommand", "stats"}});
  std::cout << "utterance_id\tpositions\tarcs\tmax_width\tmean_width\t"
               "eps_arcs\n";
  for_each_stdin_confnet([&](const confnet::ConfusionNetwork& net) {
    size_t arcs = 0;
    size_t max_width = 0;
    size_t eps = 0;
    for (const confnet::ArcSet& pos : net.positions) {
      arcs += pos.size();
      max_width = std::max(max_width, pos.size());
      for (const confnet::Arc& a : pos.arcs()) {
        if (a.token == confnet::kEpsToken) ++eps;
      }
    }
    const double mean_width =
        net.positions.empty()
            ? 0.0
            : static_cast<double>(arcs) / static_cast<double>(net.size());
    std::cout << net.utterance_id << "\t" << net.size() << "\t" << arcs << "\t"
              << max_width << "\t" << mean_width << "\t" << eps << "\n";
  });
}

// ---------------------------------------------------------------------
// encode

struct EncodeArgs {
  std::string variant = "v1";
  int emb_dim = 64;
  uint64_t seed = 1;
  std::string embeddings_path;
};

void run_encode(const EncodeArgs& args) {
  echo_config(json{{"subcommand", "encode"},
                   {"variant", args.variant},
                   {"emb_dim", args.emb_dim},
                   {"seed", args.seed},
                   {"embeddings", args.embeddings_path}});
  // Two passes: the vocabulary (and with it the seeded table) is built
  // from the whole input stream first.
  std::vector<confnet::ConfusionNetwork> nets;
  for_each_stdin_confnet(
      [&](const confnet::ConfusionNetwork& net) { nets.push_back(net); });
  std::set<std::string> tokens;
  for (const confnet::ConfusionNetwork& net : nets) {
    for (const confnet::ArcSet& pos : net.positions) {
      for (const confnet::Arc& a : pos.arcs()) tokens.insert(a.token);
    }
  }
  confnet::Rng rng(args.seed);
  confnet::Vocabulary vocab(
      std::vector<std::string>(tokens.begin(), tokens.end()));
  confnet::EmbeddingTable table =
      args.embeddings_path.empty()
          ? confnet::EmbeddingTable::random(std::move(vocab), args.emb_dim, rng)
          : confnet::EmbeddingTable::from_file(args.embeddings_path,
                                               std::move(vocab), args.emb_dim,
                                               rng);
  confnet::EncoderParams params = confnet::init_encoder_params(
      confnet::variant_from_name(args.variant), args.emb_dim, rng);

  for (const confnet::ConfusionNetwork& net : nets) {
    json embeddings = json::array();
    json attention = json::array();
    bool has_attention = false;
    for (const confnet::PositionEncoding& pe :
         confnet::encode_network(params, table, net)) {
      json row = json::array();
      for (Eigen::Index i = 0; i < pe.embedding.size(); ++i) {
        row.push_back(pe.embedding(i));
      }
      embeddings.push_back(std::move(row));
      if (pe.attention.has_value()) {
        has_attention = true;
        json arow = json::array();
        for (Eigen::Index i = 0; i < pe.attention->size(); ++i) {
          arow.push_back((*pe.attention)(i));
        }
        attention.push_back(std::move(arow));
      }
    }
    json out{{"utterance_id", net.utterance_id},
             {"embeddings", std::move(embeddings)}};
    if (has_attention) out["attention"] = std::move(attention);
    std::cout << out.dump() << "\n";
  }
}

// ---------------------------------------------------------------------
// gen-data

struct GenDataArgs {
  int dialogues = 0;
  int slots = 4;
  int values_per_slot = 8;
  double sub_prob = 0.0;
  int max_confusions = 1;
  double truth_drop = 0.0;
  uint64_t seed = 1;
  std::string out;
};

void run_gen_data(const GenDataArgs& args) {
  const confnet::Ontology ontology =
      confnet::default_ontology(args.slots, args.values_per_slot);
  confnet::NoiseModel noise;
  noise.substitution_prob = args.sub_prob;
  noise.max_confusions = args.max_confusions;
  noise.truth_drop_prob = args.truth_drop;
  confnet::Rng rng(args.seed);
  const std::vector<confnet::Dialogue> corpus =
      confnet::generate_corpus(ontology, args.dialogues, noise, rng);
  confnet::save_corpus(corpus, args.out);
  const std::string ontology_path = args.out + ".ontology.json";
  confnet::save_ontology(ontology, ontology_path);

  size_t turns = 0;
  for (const confnet::Dialogue& d : corpus) turns += d.turns.size();
  std::cout << json{{"config",
                     {{"subcommand", "gen-data"},
                      {"dialogues", args.dialogues},
                      {"slots", args.slots},
                      {"values_per_slot", args.values_per_slot},
                      {"sub_prob", args.sub_prob},
                      {"max_confusions", args.max_confusions},
                      {"truth_drop", args.truth_drop},
                      {"seed", args.seed},
                      {"out", args.out}}},
                    {"dialogues", corpus.size()},
                    {"turns", turns},
                    {"corpus_path", args.out},
                    {"ontology_path", ontology_path}}
                   .dump()
            << "\n";
}

// ---------------------------------------------------------------------
// train

struct TrainArgs {
  std::string regime = "nonaug";
  std::string variant = "v1";
  int max_arcs = 5;
  int asr_n = 5;
  double lr = 0.01;
  int batch = 50;
  double dropout = 0.2;
  double lambda = 0.5;
  int epochs = 10;
  uint64_t seed = 1;
  int emb_dim = 64;
  int hidden_dim = 64;
  double threshold = 0.5;
  std::string l1_branch = "confnet";
  std::string embeddings_path;
  std::string train_path;
  std::string dev_path;
  std::string ontology_path;
  std::string out;
};

json train_args_to_json(const TrainArgs& a) {
  return json{{"subcommand", "train"}, {"regime", a.regime},
              {"variant", a.variant},  {"max_arcs", a.max_arcs},
              {"asr_n", a.asr_n},      {"lr", a.lr},
              {"batch", a.batch},      {"dropout", a.dropout},
              {"lambda", a.lambda},    {"epochs", a.epochs},
              {"seed", a.seed},        {"emb_dim", a.emb_dim},
              {"hidden_dim", a.hidden_dim}, {"threshold", a.threshold},
              {"l1_branch", a.l1_branch},   {"embeddings", a.embeddings_path},
              {"train", a.train_path}, {"dev", a.dev_path},
              {"ontology", a.ontology_path}, {"out", a.out}};
}

void run_train(const TrainArgs& args) {
  confnet::TrainConfig config;
  config.regime = confnet::regime_from_name(args.regime);
  config.variant = confnet::variant_from_name(args.variant);
  config.max_arcs = args.max_arcs;
  config.asr_list_size = args.asr_n;
  config.learning_rate = args.lr;
  config.batch_size = args.batch;
  config.dropout = args.dropout;
  config.lambda = args.lambda;
  config.epochs = args.epochs;
  config.seed = args.seed;
  config.emb_dim = args.emb_dim;
  config.hidden_dim = args.hidden_dim;
  config.embeddings_path = args.embeddings_path;
  config.decision_threshold = args.threshold;
  if (args.l1_branch == "confnet") {
    config.l1_branch = confnet::L1Branch::kConfnet;
  } else if (args.l1_branch == "both") {
    config.l1_branch = confnet::L1Branch::kBoth;
  } else {
    throw ValidationError("--l1-branch must be 'confnet' or 'both'");
  }

  const std::vector<confnet::Dialogue> train_corpus =
      confnet::load_corpus(args.train_path);
  const std::vector<confnet::Dialogue> dev_corpus =
      confnet::load_corpus(args.dev_path);
  const confnet::Ontology ontology = confnet::load_ontology(args.ontology_path);

  confnet::TrainResult result =
      confnet::train(config, train_corpus, dev_corpus, ontology);
  confnet::save_checkpoint(result.checkpoint, args.out);
  result.report.checkpoint_path = args.out;

  json report = confnet::train_report_to_json(result.report);
  report["config"] = train_args_to_json(args);
  std::ofstream report_out(args.out + ".report.json");
  report_out << report.dump(2) << "\n";
  std::cout << report.dump() << "\n";
}

// ---------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string ckpt;
  std::string data;
  std::string mode = "confnet";
  double threshold = 0.5;
  int threads = 1;
};

void run_eval(const EvalArgs& args) {
  const confnet::Checkpoint ckpt = confnet::load_checkpoint(args.ckpt);
  const std::vector<confnet::Dialogue> corpus = confnet::load_corpus(args.data);
  confnet::EvalOptions opts;
  opts.threshold = args.threshold;
  opts.threads = args.threads;
  const confnet::EvalReport report =
      confnet::evaluate(ckpt, corpus, confnet::parse_eval_mode(args.mode), opts);
  json out = confnet::eval_report_to_json(report);
  out["config"] = json{{"subcommand", "eval"},
                       {"ckpt", args.ckpt},
                       {"data", args.data},
                       {"mode", args.mode},
                       {"threshold", args.threshold},
                       {"threads", args.threads}};
  std::cout << out.dump() << "\n";
}

// ---------------------------------------------------------------------
// bench

struct BenchArgs {
  std::string ckpt;
  std::string data;
  std::string modes = "confnet,asr-1";
  int batch = 50;
  int reps = 5;
};

void run_bench(const BenchArgs& args) {
  const confnet::Checkpoint ckpt = confnet::load_checkpoint(args.ckpt);
  const std::vector<confnet::Dialogue> corpus = confnet::load_corpus(args.data);
  const auto timing = confnet::bench_inference(
      ckpt, corpus, split_commas(args.modes), args.batch, args.reps);
  std::cout << json{{"config",
                     {{"subcommand", "bench"},
                      {"ckpt", args.ckpt},
                      {"data", args.data},
                      {"modes", args.modes},
                      {"batch", args.batch},
                      {"reps", args.reps}}},
                    {"timing", timing}}
                   .dump()
            << "\n";
}

// ---------------------------------------------------------------------
// attn

struct AttnArgs {
  std::string ckpt;
  std::string data;  // confnet JSONL or corpus JSONL; stdin if empty
  std::string utterance_id;
  std::string out;  // stdout if empty
};

bool find_confnet_in_line(const std::string& line, const std::string& id,
                          confnet::ConfusionNetwork* found) {
  json j = json::parse(line);
  if (j.contains("turns")) {
    for (const json& turn : j["turns"]) {
      if (!turn.contains("confnet")) continue;
      confnet::ConfusionNetwork net = confnet::confnet_from_json(turn["confnet"]);
      if (net.utterance_id == id) {
        *found = std::move(net);
        return true;
      }
    }
    return false;
  }
  confnet::ConfusionNetwork net = confnet::confnet_from_json(j);
  if (net.utterance_id == id) {
    *found = std::move(net);
    return true;
  }
  return false;
}

void run_attn(const AttnArgs& args) {
  echo_config(json{{"subcommand", "attn"},
                   {"ckpt", args.ckpt},
                   {"data", args.data},
                   {"utterance_id", args.utterance_id},
                   {"out", args.out}});
  const confnet::Checkpoint ckpt = confnet::load_checkpoint(args.ckpt);

  std::ifstream file;
  std::istream* in = &std::cin;
  if (!args.data.empty()) {
    file.open(args.data);
    if (!file) throw ValidationError("attn: cannot read '" + args.data + "'");
    in = &file;
  }
  confnet::ConfusionNetwork net;
  bool found = false;
  std::string line;
  size_t lineno = 0;
  while (std::getline(*in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      if (find_confnet_in_line(line, args.utterance_id, &net)) {
        found = true;
        break;
      }
    } catch (const json::exception& e) {
      std::ostringstream oss;
      oss << "attn: line " << lineno << ": " << e.what();
      throw ValidationError(oss.str());
    }
  }
  if (!found) {
    throw ValidationError("attn: utterance '" + args.utterance_id +
                          "' not found");
  }
  const std::string csv = confnet::dump_attention(ckpt, net);
  if (args.out.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(args.out);
    if (!out) throw ValidationError("attn: cannot write '" + args.out + "'");
    out << csv;
  }
}

// ---------------------------------------------------------------------
// aggregate

void run_aggregate(const std::vector<std::string>& files) {
  std::vector<confnet::EvalReport> reports;
  for (const std::string& path : files) {
    std::ifstream in(path);
    if (!in) throw ValidationError("aggregate: cannot read '" + path + "'");
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ValidationError("aggregate: malformed JSON in '" + path +
                            "': " + e.what());
    }
    reports.push_back(confnet::eval_report_from_json(j));
  }
  json out = confnet::seed_aggregate_to_json(confnet::aggregate_seeds(reports));
  out["config"] = json{{"subcommand", "aggregate"}, {"reports", files}};
  std::cout << out.dump() << "\n";
}

// ---------------------------------------------------------------------
// gradcheck

struct GradcheckArgs {
  std::string variant = "v4";
  uint64_t seed = 7;
  int trials = 20;
  int emb_dim = 8;
  int hidden_dim = 8;
  int max_positions = 4;
  int max_arcs = 4;
  double lambda = 0.5;
  double step = 1e-5;
  std::string scope = "both";
};

void run_gradcheck(const GradcheckArgs& args) {
  confnet::GradCheckConfig config;
  config.instances = args.trials;
  config.emb_dim = args.emb_dim;
  config.hidden_dim = args.hidden_dim;
  config.max_positions = args.max_positions;
  config.max_arcs = args.max_arcs;
  config.lambda = args.lambda;
  config.step = args.step;
  const confnet::Variant variant = confnet::variant_from_name(args.variant);

  json out{{"config",
            {{"subcommand", "gradcheck"},
             {"variant", args.variant},
             {"seed", args.seed},
             {"trials", args.trials},
             {"emb_dim", args.emb_dim},
             {"hidden_dim", args.hidden_dim},
             {"max_positions", args.max_positions},
             {"max_arcs", args.max_arcs},
             {"lambda", args.lambda},
             {"step", args.step},
             {"scope", args.scope}}}};
  double worst = 0.0;
  if (args.scope == "encoder" || args.scope == "both") {
    const double e = confnet::encoder_grad_check(variant, args.seed, config);
    out["encoder_max_rel_err"] = e;
    worst = std::max(worst, e);
  }
  if (args.scope == "full" || args.scope == "both") {
    const double f = confnet::full_model_grad_check(variant, args.seed, config);
    out["full_max_rel_err"] = f;
    worst = std::max(worst, f);
  }
  if (args.scope != "encoder" && args.scope != "full" && args.scope != "both") {
    throw ValidationError("--scope must be encoder, full or both");
  }
  out["max_rel_err"] = worst;
  std::cout << out.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "confnet: word confusion network encoding, dialogue-state training "
      "and benchmarking"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "key=value config file; subcommand flags live in a "
                 "[subcommand] section and command-line flags win");

  PruneArgs prune_args;
  CLI::App* prune = app.add_subcommand(
      "prune", "Prune a confnet JSONL stream (stdin -> stdout)");
  prune->add_option("--threshold", prune_args.threshold,
                    "drop arcs scoring below this (top arc always survives)")
      ->check(CLI::Range(0.0, 0.9999999));
  prune->add_flag("--renormalize", prune_args.renormalize,
                  "rescale each position to sum 1 after pruning");
  prune->add_flag("--drop-interjections", prune_args.drop_interjections,
                  "remove interjection arcs (um, uh, ah, oh, hmm)");
  prune->add_option("--stoplist", prune_args.stoplist,
                    "comma-separated stoplist overriding the default");
  prune->add_option("--max-arcs", prune_args.max_arcs,
                    "keep only the top K arcs per position (0 = off)");
  prune->callback([&]() { run_prune(prune_args); });

  int nbest_n = 9;
  CLI::App* nbest = app.add_subcommand(
      "nbest", "Extract N best paths per confnet (stdin -> stdout JSONL)");
  nbest->add_option("-n,--n", nbest_n, "number of paths")->check(CLI::PositiveNumber);
  nbest->callback([&]() { run_nbest(nbest_n); });

  CLI::App* stats = app.add_subcommand(
      "stats", "Per-confnet size statistics (stdin -> stdout TSV)");
  stats->callback([&]() { run_stats(); });

  EncodeArgs encode_args;
  CLI::App* encode = app.add_subcommand(
      "encode", "Encode confnets to embedding sequences (stdin -> stdout)");
  encode->add_option("--variant", encode_args.variant, "v1|v2|v3|v4")
      ->check(CLI::IsMember({"v1", "v2", "v3", "v4"}));
  encode->add_option("--emb-dim", encode_args.emb_dim, "embedding dimension")
      ->check(CLI::Range(2, 4096));
  encode->add_option("--seed", encode_args.seed, "rng seed");
  encode->add_option("--embeddings", encode_args.embeddings_path,
                     "external word-vector text file");
  encode->callback([&]() { run_encode(encode_args); });

  GenDataArgs gen_args;
  CLI::App* gen = app.add_subcommand(
      "gen-data", "Generate a synthetic dialogue corpus (JSONL + ontology)");
  gen->add_option("--dialogues", gen_args.dialogues, "number of dialogues")
      ->required()
      ->check(CLI::PositiveNumber);
  gen->add_option("--slots", gen_args.slots, "ontology slots");
  gen->add_option("--values-per-slot", gen_args.values_per_slot,
                  "values per slot");
  gen->add_option("--sub-prob", gen_args.sub_prob,
                  "per-position substitution probability")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--max-confusions", gen_args.max_confusions,
                  "max alternative arcs per substituted position")
      ->check(CLI::PositiveNumber);
  gen->add_option("--truth-drop", gen_args.truth_drop,
                  "probability the true token is dropped when substituted")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", gen_args.seed, "rng seed");
  gen->add_option("--out", gen_args.out, "output corpus JSONL path")->required();
  gen->callback([&]() { run_gen_data(gen_args); });

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "Train a dialogue-state model");
  train->add_option("--regime", train_args.regime, "nonaug|aug|joint|asr-n")
      ->check(CLI::IsMember({"nonaug", "aug", "joint", "asr-n"}));
  train->add_option("--variant", train_args.variant, "encoder variant v1..v4")
      ->check(CLI::IsMember({"v1", "v2", "v3", "v4"}));
  train->add_option("--max-arcs", train_args.max_arcs,
                    "arc truncation width for confnet inputs");
  train->add_option("--asr-n", train_args.asr_n,
                    "hypothesis list size (asr-n regime)");
  train->add_option("--lr", train_args.lr, "learning rate");
  train->add_option("--batch", train_args.batch, "batch size");
  train->add_option("--dropout", train_args.dropout,
                    "dropout on position embeddings");
  train->add_option("--lambda", train_args.lambda,
                    "similarity-loss weight (joint regime)");
  train->add_option("--epochs", train_args.epochs, "training epochs");
  train->add_option("--seed", train_args.seed, "rng seed");
  train->add_option("--emb-dim", train_args.emb_dim, "embedding dimension");
  train->add_option("--hidden-dim", train_args.hidden_dim,
                    "context encoder width");
  train->add_option("--threshold", train_args.threshold,
                    "decision threshold for dev metrics");
  train->add_option("--l1-branch", train_args.l1_branch,
                    "which branch feeds the classification loss in joint "
                    "training: confnet|both");
  train->add_option("--embeddings", train_args.embeddings_path,
                    "external word-vector text file");
  train->add_option("--train", train_args.train_path, "training corpus JSONL")
      ->required();
  train->add_option("--dev", train_args.dev_path, "dev corpus JSONL")->required();
  train->add_option("--ontology", train_args.ontology_path, "ontology JSON")
      ->required();
  train->add_option("--out", train_args.out, "checkpoint output path")
      ->required();
  train->callback([&]() { run_train(train_args); });

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "Evaluate a checkpoint");
  eval->add_option("--ckpt", eval_args.ckpt, "checkpoint JSON")->required();
  eval->add_option("--data", eval_args.data, "corpus JSONL")->required();
  eval->add_option("--mode", eval_args.mode, "confnet|confnet-K|asr-N");
  eval->add_option("--threshold", eval_args.threshold, "decision threshold");
  eval->add_option("--threads", eval_args.threads,
                   "worker threads for evaluation (default 1)")
      ->check(CLI::PositiveNumber);
  eval->callback([&]() { run_eval(eval_args); });

  BenchArgs bench_args;
  CLI::App* bench =
      app.add_subcommand("bench", "Benchmark inference time per batch");
  bench->add_option("--ckpt", bench_args.ckpt, "checkpoint JSON")->required();
  bench->add_option("--data", bench_args.data, "corpus JSONL")->required();
  bench->add_option("--modes", bench_args.modes,
                    "comma-separated modes (confnet, confnet-K, asr-N)");
  bench->add_option("--batch", bench_args.batch, "turns per batch");
  bench->add_option("--reps", bench_args.reps, "timed repetitions (>= 3)");
  bench->callback([&]() { run_bench(bench_args); });

  AttnArgs attn_args;
  CLI::App* attn = app.add_subcommand(
      "attn", "Dump attention weights for one utterance as CSV");
  attn->add_option("--ckpt", attn_args.ckpt, "checkpoint JSON (V3/V4)")
      ->required();
  attn->add_option("--data", attn_args.data,
                   "confnet or corpus JSONL (stdin if omitted)");
  attn->add_option("--utterance-id", attn_args.utterance_id,
                   "utterance to dump")
      ->required();
  attn->add_option("--out", attn_args.out, "CSV output path (stdout if omitted)");
  attn->callback([&]() { run_attn(attn_args); });

  std::vector<std::string> aggregate_files;
  CLI::App* aggregate = app.add_subcommand(
      "aggregate", "Aggregate per-seed eval reports into mean/standard error");
  aggregate->add_option("reports", aggregate_files, "eval report JSON files")
      ->required()
      ->expected(-1);
  aggregate->callback([&]() { run_aggregate(aggregate_files); });

  GradcheckArgs grad_args;
  CLI::App* gradcheck = app.add_subcommand(
      "gradcheck", "Finite-difference check of all backward passes");
  gradcheck->add_option("--variant", grad_args.variant, "v1|v2|v3|v4")
      ->check(CLI::IsMember({"v1", "v2", "v3", "v4"}));
  gradcheck->add_option("--seed", grad_args.seed, "rng seed");
  gradcheck->add_option("--trials", grad_args.trials, "random instances");
  gradcheck->add_option("--emb-dim", grad_args.emb_dim, "embedding dim");
  gradcheck->add_option("--hidden", grad_args.hidden_dim, "context width");
  gradcheck->add_option("--max-positions", grad_args.max_positions,
                        "max positions per instance");
  gradcheck->add_option("--max-arcs", grad_args.max_arcs,
                        "max arcs per position");
  gradcheck->add_option("--lambda", grad_args.lambda, "similarity-loss weight");
  gradcheck->add_option("--step", grad_args.step, "finite-difference step");
  gradcheck->add_option("--scope", grad_args.scope, "encoder|full|both")
      ->check(CLI::IsMember({"encoder", "full", "both"}));
  gradcheck->callback([&]() { run_gradcheck(grad_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const confnet::NumericError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
