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

#ifndef FRAMEPARSE_TRAINING_H_
#define FRAMEPARSE_TRAINING_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "frameparse/config.h"
#include "frameparse/evaluation.h"
#include "frameparse/layers.h"
#include "frameparse/model.h"

namespace frameparse {

struct OptimState {
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
  std::vector<int64_t> steps;  // per parameter
  int64_t step = 0;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.0;
};

OptimState MakeOptimState(const ParameterSet& params, const TrainConfig& config);

// Adam with bias correction, then decoupled decay on parameters whose
// `decay` flag is set. Parameters without a gradient throw Error unless
// `skip_missing`, in which case they are left untouched.
void AdamStep(OptimState* state, ParameterSet* params, bool skip_missing = false);

// Scales all gradients so their joint L2 norm is at most max_norm. Returns
// the norm before clipping.
double ClipGradNorm(ParameterSet* params, double max_norm);

// Halves (by `factor`) the learning rate once the monitored metric has not
// risen by more than `threshold` for `patience` consecutive epochs.
class ReduceOnPlateau {
 public:
  ReduceOnPlateau(int patience, double factor, double threshold);

  // Records one epoch's metric; returns true when lr was reduced.
  bool Step(double metric, double* lr);
  int num_bad_epochs() const { return bad_epochs_; }
  double best() const { return best_; }

 private:
  int patience_;
  double factor_;
  double threshold_;
  bool has_best_ = false;
  double best_ = 0.0;
  int bad_epochs_ = 0;
};

// λ_T Σ‖T‖² over the CRF transition matrices and λ_U Σ‖U_k‖² over the
// bilinear forms used by `task`.
ad::Tensor L2Penalty(const FrameParser& parser, const TrainConfig& config, Task task);

// Scores `corpus` for a task. TI compares predicted target sets; FI
// accuracy always uses gold targets; SRL runs the parser in `gold` mode and
// matches labelled spans per annotation; joint reports FI accuracy and SRL
// F1 together.
EvalReport Evaluate(const FrameParser& parser, const std::vector<Sentence>& corpus,
                    Task task, GoldMode gold);
// Gold mode used for the dev metric of each task.
GoldMode DevGoldMode(Task task);

struct EpochRecord {
  int epoch = 0;
  double ti_loss = 0.0;
  double fi_loss = 0.0;
  double srl_loss = 0.0;
  double loss = 0.0;
  double dev_metric = 0.0;
  double lr = 0.0;
};

struct TrainResult {
  std::vector<EpochRecord> log;
  double best_metric = 0.0;
  int best_epoch = 0;
  bool reached_target = false;
};

// Mini-batch training with the best dev epoch restored into `parser` at the
// end. Throws NumericError with epoch and batch context on a non-finite
// loss.
TrainResult Train(FrameParser* parser, const std::vector<Sentence>& train,
                  const std::vector<Sentence>& dev, const TrainConfig& config,
                  std::ostream* progress = nullptr);

// Shortest synthetic sentence (at most 6 tokens) whose first annotation has
// an ambiguous lexical unit and at least two frame elements.
Sentence GradCheckExample(uint64_t seed);

struct LossGradCheck {
  std::string loss;  // "ti", "fi", "srl" or "joint"
  ad::GradCheckReport report;
};

// Checks every loss against central differences on GradCheckExample(seed)
// with dropout disabled.
std::vector<LossGradCheck> CheckLossGradients(const ModelConfig& config, uint64_t seed,
                                              const ad::GradCheckOptions& options);

void WriteMetricLog(const std::vector<EpochRecord>& log, std::ostream& out);
void SaveMetricLog(const std::vector<EpochRecord>& log, const std::string& path);

}  // namespace frameparse

#endif  // FRAMEPARSE_TRAINING_H_
