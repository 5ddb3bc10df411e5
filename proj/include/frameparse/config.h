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

#ifndef FRAMEPARSE_CONFIG_H_
#define FRAMEPARSE_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace frameparse {

enum class Task { kTi, kFi, kSrl, kJoint };

std::string TaskName(Task task);
// Accepts "ti", "fi", "srl", "joint". Throws ConfigError otherwise.
Task ParseTask(const std::string& name);

struct ModelConfig {
  int token_dim = 48;
  int pos_dim = 16;
  int constituent_dim = 32;
  int gcn_hidden = 32;
  int gcn_layers = 2;
  bool gcn_mean_aggregation = false;
  bool path_include_endpoints = true;
  // When false, path features are zero vectors of the same width.
  bool use_gcn = true;
  int backbone_hidden = 32;
  int backbone_layers = 2;
  int lu_dim = 32;
  int frame_dim = 32;
  std::vector<int> fi_hidden = {64, 64, 48};
  // Output width of the predicate/token projections and input width of the
  // bilinear forms; the two must agree.
  int ai_projection_dim = 64;
  int ai_bilinear_dim = 64;
  int ac_projection_dim = 64;
  double dropout = 0.1;
  double gcn_dropout = 0.1;
  double leaky_slope = 0.01;
  bool constrain_training = true;

  int embedding_dim() const { return token_dim + pos_dim; }
  // Throws ConfigError when the dimension chain is inconsistent.
  void Validate() const;
};

struct TrainConfig {
  Task task = Task::kJoint;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  double weight_decay = 0.01;
  int scheduler_patience = 5;
  double scheduler_factor = 0.5;
  double scheduler_threshold = 1e-4;
  int early_stop_patience = 100;
  int max_epochs = 200;
  double grad_clip = 10.0;
  double l2_transitions = 1e-4;
  double l2_bilinear = 1e-4;
  int batch_size = 8;
  uint64_t seed = 1;
  // Training stops once the dev metric reaches this value; > 1 disables.
  double target_metric = 2.0;

  void Validate() const;
};

// Everything a `train` run needs, loaded from one JSON document.
struct RunConfig {
  std::string preset = "desk";
  std::string train_corpus;
  std::string dev_corpus;
  std::string ontology;
  std::string checkpoint = "model.json";
  std::string metric_log = "metrics.csv";
  std::string vectors;
  ModelConfig model;
  TrainConfig train;
};

// Full-size dimensions selected by the "paper" preset.
ModelConfig FullSizeModelPreset();
TrainConfig FullSizeTrainPreset();

// Applies `preset` first, then every other key. Unknown keys and bad values
// are ConfigErrors.
RunConfig RunConfigFromJson(const nlohmann::json& j);
RunConfig LoadRunConfig(const std::string& path);

nlohmann::ordered_json ModelConfigToJson(const ModelConfig& c);
ModelConfig ModelConfigFromJson(const nlohmann::json& j);
nlohmann::ordered_json TrainConfigToJson(const TrainConfig& c);

}  // namespace frameparse

#endif  // FRAMEPARSE_CONFIG_H_
