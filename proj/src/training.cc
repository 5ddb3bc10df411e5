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

#include "frameparse/training.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <random>

#include "frameparse/errors.h"
#include "frameparse/synth.h"

namespace frameparse {
namespace {

std::vector<int> Sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

ad::Tensor SquaredNorm(const ad::Tensor& t) { return ad::Sum(ad::Mul(t, t)); }

std::string FormatDouble(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

OptimState MakeOptimState(const ParameterSet& params, const TrainConfig& config) {
  OptimState s;
  for (const Parameter& p : params.params()) {
    s.m.emplace_back(p.tensor.size(), 0.0);
    s.v.emplace_back(p.tensor.size(), 0.0);
  }
  s.steps.assign(params.params().size(), 0);
  s.lr = config.lr;
  s.beta1 = config.beta1;
  s.beta2 = config.beta2;
  s.epsilon = config.adam_epsilon;
  s.weight_decay = config.weight_decay;
  return s;
}

void AdamStep(OptimState* state, ParameterSet* params, bool skip_missing) {
  auto& list = params->params();
  if (state->m.size() != list.size()) {
    throw Error("optimiser state does not match the parameter set");
  }
  ++state->step;
  for (size_t k = 0; k < list.size(); ++k) {
    Parameter& p = list[k];
    if (!p.tensor.requires_grad()) continue;
    const std::vector<double>& g = p.tensor.grad();
    if (g.empty()) {
      if (skip_missing) continue;
      throw Error("parameter " + p.name + " has no gradient");
    }
    const int64_t t = ++state->steps[k];
    const double c1 = 1.0 - std::pow(state->beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(state->beta2, static_cast<double>(t));
    std::vector<double>& m = state->m[k];
    std::vector<double>& v = state->v[k];
    std::vector<double>& theta = p.tensor.mutable_values();
    for (size_t i = 0; i < theta.size(); ++i) {
      m[i] = state->beta1 * m[i] + (1.0 - state->beta1) * g[i];
      v[i] = state->beta2 * v[i] + (1.0 - state->beta2) * g[i] * g[i];
      theta[i] -= state->lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + state->epsilon);
      if (p.decay) theta[i] -= state->lr * state->weight_decay * theta[i];
    }
  }
}

double ClipGradNorm(ParameterSet* params, double max_norm) {
  double sq = 0.0;
  for (const Parameter& p : params->params()) {
    for (double g : p.tensor.grad()) sq += g * g;
  }
  const double norm = std::sqrt(sq);
  if (norm > max_norm) {
    const double scale = max_norm / norm;
    for (Parameter& p : params->params()) {
      if (p.tensor.grad().empty()) continue;
      for (double& g : p.tensor.mutable_grad()) g *= scale;
    }
  }
  return norm;
}

ReduceOnPlateau::ReduceOnPlateau(int patience, double factor, double threshold)
    : patience_(patience), factor_(factor), threshold_(threshold) {}

bool ReduceOnPlateau::Step(double metric, double* lr) {
  if (!has_best_ || metric > best_ + threshold_) {
    has_best_ = true;
    best_ = metric;
    bad_epochs_ = 0;
    return false;
  }
  if (++bad_epochs_ >= patience_) {
    *lr *= factor_;
    bad_epochs_ = 0;
    return true;
  }
  return false;
}

ad::Tensor L2Penalty(const FrameParser& parser, const TrainConfig& config, Task task) {
  const ModelParams& m = parser.model();
  const bool joint = task == Task::kJoint;
  std::vector<ad::Tensor> transitions;
  if (joint || task == Task::kTi) transitions.push_back(m.ti_crf.transitions);
  const bool srl = joint || task == Task::kSrl;
  if (srl) {
    transitions.push_back(m.ai_crf.transitions);
    transitions.push_back(m.ac_crf.transitions);
  }
  ad::Tensor total = ad::Tensor::Scalar(0.0);
  if (config.l2_transitions > 0) {
    for (const auto& t : transitions) {
      total = ad::Add(total, ad::Scale(SquaredNorm(t), config.l2_transitions));
    }
  }
  if (srl && config.l2_bilinear > 0) {
    for (const auto& u : m.ai_bilinear.forms) {
      total = ad::Add(total, ad::Scale(SquaredNorm(u), config.l2_bilinear));
    }
  }
  return total;
}

GoldMode DevGoldMode(Task task) {
  switch (task) {
    case Task::kTi: return GoldMode::kNone;
    case Task::kFi: return GoldMode::kTargets;
    case Task::kSrl:
    case Task::kJoint: return GoldMode::kTargetsAndFrames;
  }
  return GoldMode::kTargetsAndFrames;
}

namespace {

Prf EvaluateTi(const FrameParser& parser, const std::vector<Sentence>& corpus) {
  std::vector<std::vector<TargetSet>> gold, pred;
  for (const Sentence& s : corpus) {
    std::vector<TargetSet> g;
    for (const FrameAnnotation& a : s.annotations) g.push_back(a.target);
    gold.push_back(std::move(g));
    pred.push_back(parser.TiPredict(parser.Encode(s)));
  }
  return SpanPrf(gold, pred);
}

Accuracy EvaluateFi(const FrameParser& parser, const std::vector<Sentence>& corpus) {
  std::vector<std::string> gold, pred;
  for (const Sentence& s : corpus) {
    if (s.annotations.empty()) continue;
    SentenceEncoding enc = parser.Encode(s);
    for (const FrameAnnotation& a : s.annotations) {
      gold.push_back(a.frame);
      pred.push_back(parser.FiPredict(enc, a.lexical_unit, a.target));
    }
  }
  return FiAccuracy(gold, pred);
}

Prf EvaluateSrl(const FrameParser& parser, const std::vector<Sentence>& corpus,
                GoldMode mode, int* dropped) {
  std::vector<std::vector<ElementSpan>> gold, pred;
  for (const Sentence& s : corpus) {
    ParseResult r = parser.Parse(s, mode);
    *dropped += r.dropped_targets;
    std::vector<bool> used(r.annotations.size(), false);
    for (const FrameAnnotation& g : s.annotations) {
      gold.push_back(g.elements);
      std::vector<ElementSpan> match;
      const std::vector<int> target = Sorted(g.target);
      for (size_t k = 0; k < r.annotations.size(); ++k) {
        if (!used[k] && Sorted(r.annotations[k].target) == target) {
          used[k] = true;
          match = r.annotations[k].elements;
          break;
        }
      }
      pred.push_back(std::move(match));
    }
    for (size_t k = 0; k < r.annotations.size(); ++k) {
      if (used[k]) continue;
      gold.emplace_back();
      pred.push_back(r.annotations[k].elements);
    }
  }
  return SrlPrf(gold, pred);
}

}  // namespace

EvalReport Evaluate(const FrameParser& parser, const std::vector<Sentence>& corpus,
                    Task task, GoldMode gold) {
  ad::NoGradGuard no_grad;
  EvalReport report;
  report.task = TaskName(task);
  switch (task) {
    case Task::kTi:
      report.prf = EvaluateTi(parser, corpus);
      break;
    case Task::kFi:
      report.accuracy = EvaluateFi(parser, corpus);
      break;
    case Task::kSrl:
      report.prf = EvaluateSrl(parser, corpus, gold, &report.dropped_targets);
      break;
    case Task::kJoint:
      report.accuracy = EvaluateFi(parser, corpus);
      report.prf = EvaluateSrl(parser, corpus, gold, &report.dropped_targets);
      break;
  }
  return report;
}

TrainResult Train(FrameParser* parser, const std::vector<Sentence>& train,
                  const std::vector<Sentence>& dev, const TrainConfig& config,
                  std::ostream* progress) {
  config.Validate();
  if (train.empty()) throw DataError("training corpus is empty");
  if (dev.empty()) throw DataError("dev corpus is empty");
  ParameterSet& params = parser->params();
  OptimState optim = MakeOptimState(params, config);
  ReduceOnPlateau scheduler(config.scheduler_patience, config.scheduler_factor,
                            config.scheduler_threshold);
  std::mt19937_64 shuffle_rng(config.seed);
  std::mt19937_64 dropout_rng(config.seed * 0x9E3779B97F4A7C15ULL + 1);
  const GoldMode dev_mode = DevGoldMode(config.task);

  TrainResult result;
  std::vector<std::vector<double>> best_values;
  auto snapshot = [&] {
    best_values.clear();
    for (const Parameter& p : params.params()) best_values.push_back(p.tensor.values());
  };
  result.best_metric = Evaluate(*parser, dev, config.task, dev_mode).metric();
  snapshot();
  if (result.best_metric >= config.target_metric) result.reached_target = true;

  std::vector<int> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  int since_best = 0;
  for (int epoch = 1; epoch <= config.max_epochs && !result.reached_target; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    EpochRecord rec;
    rec.epoch = epoch;
    rec.lr = optim.lr;
    int batches = 0;
    for (size_t start = 0; start < order.size(); start += config.batch_size) {
      std::vector<const Sentence*> batch;
      for (size_t i = start; i < std::min(order.size(), start + config.batch_size); ++i) {
        batch.push_back(&train[order[i]]);
      }
      params.ZeroGrad();
      TaskLosses losses;
      ad::Tensor loss;
      try {
        losses = parser->BatchLoss(batch, config.task, {true, &dropout_rng});
        loss = ad::Add(losses.total, L2Penalty(*parser, config, config.task));
      } catch (const NumericError& e) {
        throw NumericError("epoch " + std::to_string(epoch) + ", batch " +
                           std::to_string(batches) + ": " + e.what());
      }
      ad::Backward(loss);
      ClipGradNorm(&params, config.grad_clip);
      AdamStep(&optim, &params, /*skip_missing=*/true);
      rec.ti_loss += losses.ti.item();
      rec.fi_loss += losses.fi.item();
      rec.srl_loss += losses.srl.item();
      rec.loss += loss.item();
      ++batches;
    }
    rec.ti_loss /= batches;
    rec.fi_loss /= batches;
    rec.srl_loss /= batches;
    rec.loss /= batches;
    rec.dev_metric = Evaluate(*parser, dev, config.task, dev_mode).metric();
    result.log.push_back(rec);
    if (progress) {
      *progress << "epoch " << epoch << " loss " << rec.loss << " dev " << rec.dev_metric
                << " lr " << rec.lr << '\n';
    }
    if (rec.dev_metric > result.best_metric) {
      result.best_metric = rec.dev_metric;
      result.best_epoch = epoch;
      snapshot();
      since_best = 0;
    } else {
      ++since_best;
    }
    if (rec.dev_metric >= config.target_metric) result.reached_target = true;
    if (since_best >= config.early_stop_patience) break;
    scheduler.Step(rec.dev_metric, &optim.lr);
  }
  for (size_t k = 0; k < params.params().size(); ++k) {
    params.params()[k].tensor.mutable_values() = best_values[k];
  }
  params.ZeroGrad();
  return result;
}

Sentence GradCheckExample(uint64_t seed) {
  const std::vector<Sentence> corpus = GenerateCorpus(seed, 200);
  const Ontology ontology = SynthOntology();
  const Sentence* best = nullptr;
  for (const Sentence& s : corpus) {
    if (s.size() > 6 || s.annotations.empty()) continue;
    const FrameAnnotation& a = s.annotations.front();
    if (a.elements.size() < 2 || ontology.lu_to_frames.at(a.lexical_unit).size() < 2) {
      continue;
    }
    if (!best || s.size() < best->size()) best = &s;
  }
  if (!best) throw DataError("no short annotated synthetic sentence for this seed");
  return *best;
}

std::vector<LossGradCheck> CheckLossGradients(const ModelConfig& config, uint64_t seed,
                                              const ad::GradCheckOptions& options) {
  ModelConfig c = config;
  c.dropout = 0.0;
  c.gcn_dropout = 0.0;
  const Sentence example = GradCheckExample(seed);
  const Ontology ontology = SynthOntology();
  FrameParser parser(c, Vocab::Build({example}, ontology), ontology, seed);
  std::vector<ad::NamedTensor> params;
  for (const Parameter& p : parser.params().params()) {
    if (p.tensor.requires_grad()) params.push_back({p.name, p.tensor});
  }
  const std::vector<const Sentence*> batch = {&example};
  std::vector<LossGradCheck> out;
  out.push_back({"ti", ad::GradCheck([&] { return parser.TiBatchLoss(batch); }, params, options)});
  out.push_back({"fi", ad::GradCheck([&] { return parser.FiBatchLoss(batch); }, params, options)});
  out.push_back(
      {"srl", ad::GradCheck([&] { return parser.SrlBatchLoss(batch); }, params, options)});
  out.push_back(
      {"joint", ad::GradCheck([&] { return parser.JointBatchLoss(batch); }, params, options)});
  return out;
}

void WriteMetricLog(const std::vector<EpochRecord>& log, std::ostream& out) {
  out << "epoch,ti_loss,fi_loss,srl_loss,loss,dev_metric,lr\n";
  for (const EpochRecord& r : log) {
    out << r.epoch << ',' << FormatDouble(r.ti_loss) << ',' << FormatDouble(r.fi_loss)
        << ',' << FormatDouble(r.srl_loss) << ',' << FormatDouble(r.loss) << ','
        << FormatDouble(r.dev_metric) << ',' << FormatDouble(r.lr) << '\n';
  }
}

void SaveMetricLog(const std::vector<EpochRecord>& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write metric log " + path);
  WriteMetricLog(log, out);
}

}  // namespace frameparse
