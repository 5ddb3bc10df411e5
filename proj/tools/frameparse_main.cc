// Copyright 2026 The Frameparse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line entry point: synth | train | eval | predict | gradcheck | trace.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "frameparse/config.h"
#include "frameparse/corpus.h"
#include "frameparse/errors.h"
#include "frameparse/evaluation.h"
#include "frameparse/model.h"
#include "frameparse/synth.h"
#include "frameparse/trace.h"
#include "frameparse/training.h"
#include "json.hpp"

namespace {

using namespace frameparse;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitGradCheck = 3;

GoldMode ParseGold(bool gold_targets, bool gold_frames) {
  if (gold_frames) return GoldMode::kTargetsAndFrames;
  return gold_targets ? GoldMode::kTargets : GoldMode::kNone;
}

// Writes to `path`, or stdout when it is empty or "-".
void Emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << text;
}

struct TrainFlags {
  std::string config;
  std::string train, dev, ontology, checkpoint, metric_log, task;
  std::optional<uint64_t> seed;
  std::optional<int> epochs;
  bool no_gcn = false;
  bool quiet = false;
};

int RunTrain(const TrainFlags& f) {
  RunConfig rc = f.config.empty() ? RunConfig{} : LoadRunConfig(f.config);
  if (!f.train.empty()) rc.train_corpus = f.train;
  if (!f.dev.empty()) rc.dev_corpus = f.dev;
  if (!f.ontology.empty()) rc.ontology = f.ontology;
  if (!f.checkpoint.empty()) rc.checkpoint = f.checkpoint;
  if (!f.metric_log.empty()) rc.metric_log = f.metric_log;
  if (!f.task.empty()) rc.train.task = ParseTask(f.task);
  if (f.seed) rc.train.seed = *f.seed;
  if (f.epochs) rc.train.max_epochs = *f.epochs;
  if (f.no_gcn) rc.model.use_gcn = false;
  rc.model.Validate();
  rc.train.Validate();
  if (rc.train_corpus.empty() || rc.ontology.empty()) {
    throw ConfigError("train needs train_corpus and ontology");
  }
  const std::vector<Sentence> train = LoadCorpus(rc.train_corpus);
  const std::vector<Sentence> dev =
      rc.dev_corpus.empty() ? train : LoadCorpus(rc.dev_corpus);
  const Ontology ontology = LoadOntology(rc.ontology);
  FrameParser parser(rc.model, Vocab::Build(train, ontology), ontology, rc.train.seed);
  if (!rc.vectors.empty()) {
    EmbeddingTable table = parser.model().tokens;
    const int n = LoadTextVectors(rc.vectors, parser.vocab().tokens, &table);
    std::cerr << "loaded " << n << " pretrained vectors\n";
  }
  TrainResult result =
      Train(&parser, train, dev, rc.train, f.quiet ? nullptr : &std::cerr);
  parser.Save(rc.checkpoint);
  SaveMetricLog(result.log, rc.metric_log);
  std::cerr << "best dev " << result.best_metric << " at epoch " << result.best_epoch
            << "; checkpoint " << rc.checkpoint << "\n";
  return kExitOk;
}

int RunGradCheck(const std::string& config, std::optional<uint64_t> seed, bool no_gcn,
                 int budget) {
  RunConfig rc = config.empty() ? RunConfig{} : LoadRunConfig(config);
  if (no_gcn) rc.model.use_gcn = false;
  ad::GradCheckOptions options;
  options.max_entries_per_tensor = budget;
  const auto checks = CheckLossGradients(rc.model, seed.value_or(rc.train.seed), options);
  nlohmann::ordered_json report;
  bool passed = true;
  for (const auto& c : checks) {
    report[c.loss] = {{"max_rel_error", c.report.max_rel_error},
                      {"passed", c.report.passed}};
    passed = passed && c.report.passed;
  }
  report["tolerance"] = options.tolerance;
  report["passed"] = passed;
  std::cout << report.dump(2) << "\n";
  return passed ? kExitOk : kExitGradCheck;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frame-semantic parser with constituency path features"};
  app.require_subcommand(1);

  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus and ontology");
  uint64_t synth_seed = 1;
  int synth_n = 100;
  std::string synth_out, synth_ontology;
  synth->add_option("--seed", synth_seed, "Generator seed");
  synth->add_option("-n,--sentences", synth_n, "Number of sentences")
      ->check(CLI::PositiveNumber);
  synth->add_option("--out", synth_out, "Corpus path (JSON Lines)")->required();
  synth->add_option("--ontology-out", synth_ontology, "Ontology path (JSON)")->required();

  auto* train = app.add_subcommand("train", "Train a model");
  TrainFlags tf;
  train->add_option("--config", tf.config, "Run configuration (JSON)");
  train->add_option("--train", tf.train, "Training corpus");
  train->add_option("--dev", tf.dev, "Development corpus (default: training corpus)");
  train->add_option("--ontology", tf.ontology, "Ontology");
  train->add_option("--checkpoint", tf.checkpoint, "Output checkpoint");
  train->add_option("--metric-log", tf.metric_log, "Output metric CSV");
  train->add_option("--task", tf.task, "ti | fi | srl | joint");
  train->add_option("--seed", tf.seed, "Training seed");
  train->add_option("--epochs", tf.epochs, "Maximum epochs");
  train->add_flag("--no-gcn", tf.no_gcn, "Replace path features with zeros");
  train->add_flag("--quiet", tf.quiet, "No per-epoch progress");

  auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint");
  std::string eval_ckpt, eval_corpus, eval_task = "srl", eval_out;
  bool gold_targets = false, gold_frames = false;
  eval->add_option("--checkpoint", eval_ckpt)->required();
  eval->add_option("--corpus", eval_corpus)->required();
  eval->add_option("--task", eval_task, "ti | fi | srl | joint");
  eval->add_flag("--gold-targets", gold_targets, "Use gold targets");
  eval->add_flag("--gold-frames", gold_frames, "Use gold targets and frames");
  eval->add_option("--out", eval_out, "Report path (default stdout)");

  auto* predict = app.add_subcommand("predict", "Parse a corpus");
  std::string pred_ckpt, pred_corpus, pred_out;
  bool pred_gold_targets = false, pred_gold_frames = false;
  predict->add_option("--checkpoint", pred_ckpt)->required();
  predict->add_option("--corpus", pred_corpus)->required();
  predict->add_option("--out", pred_out, "Structures (JSON Lines, default stdout)");
  predict->add_flag("--gold-targets", pred_gold_targets, "Use gold targets");
  predict->add_flag("--gold-frames", pred_gold_frames, "Use gold targets and frames");

  auto* gradcheck = app.add_subcommand("gradcheck", "Check loss gradients");
  std::string gc_config;
  std::optional<uint64_t> gc_seed;
  bool gc_no_gcn = false;
  int gc_budget = 24;
  gradcheck->add_option("--config", gc_config, "Run configuration (JSON)");
  gradcheck->add_option("--seed", gc_seed, "Example and initialisation seed");
  gradcheck->add_flag("--no-gcn", gc_no_gcn, "Disable the GCN");
  gradcheck->add_option("--entries", gc_budget, "Entries checked per tensor (0 = all)");

  auto* trace = app.add_subcommand("trace", "Dump intermediate values for one sentence");
  std::string tr_ckpt, tr_corpus, tr_out;
  int tr_index = 0;
  std::optional<int> tr_reference;
  trace->add_option("--checkpoint", tr_ckpt)->required();
  trace->add_option("--corpus", tr_corpus)->required();
  trace->add_option("--index", tr_index, "Sentence index in the corpus");
  trace->add_option("--reference", tr_reference, "Predicate token for p_l");
  trace->add_option("--out", tr_out, "Trace path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*synth) {
      SaveCorpus(GenerateCorpus(synth_seed, synth_n), synth_out);
      SaveOntology(SynthOntology(), synth_ontology);
      return kExitOk;
    }
    if (*train) return RunTrain(tf);
    if (*eval) {
      const FrameParser parser = FrameParser::Load(eval_ckpt);
      const EvalReport report = Evaluate(parser, LoadCorpus(eval_corpus),
                                         ParseTask(eval_task),
                                         ParseGold(gold_targets, gold_frames));
      Emit(eval_out, report.ToJson().dump(2) + "\n");
      return kExitOk;
    }
    if (*predict) {
      const FrameParser parser = FrameParser::Load(pred_ckpt);
      const GoldMode mode = ParseGold(pred_gold_targets, pred_gold_frames);
      std::string text;
      int dropped = 0;
      for (const Sentence& s : LoadCorpus(pred_corpus)) {
        Sentence out = s;
        ParseResult r = parser.Parse(s, mode);
        out.annotations = std::move(r.annotations);
        dropped += r.dropped_targets;
        text += SentenceToJson(out) + "\n";
      }
      Emit(pred_out, text);
      if (dropped > 0) std::cerr << dropped << " targets with unknown lexical units dropped\n";
      return kExitOk;
    }
    if (*gradcheck) return RunGradCheck(gc_config, gc_seed, gc_no_gcn, gc_budget);
    if (*trace) {
      const FrameParser parser = FrameParser::Load(tr_ckpt);
      const std::vector<Sentence> corpus = LoadCorpus(tr_corpus);
      if (tr_index < 0 || tr_index >= static_cast<int>(corpus.size())) {
        throw DataError("--index out of range");
      }
      Emit(tr_out, GenerateTrace(parser, corpus[tr_index], tr_reference));
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
