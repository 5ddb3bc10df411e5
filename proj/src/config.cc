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

#include "frameparse/config.h"

#include <fstream>
#include <functional>
#include <map>

#include "frameparse/errors.h"

namespace frameparse {
namespace {

using Setter = std::function<void(RunConfig*, const nlohmann::json&)>;

template <typename T>
T As(const nlohmann::json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("bad value for config key '" + key + "'");
  }
}

#define FP_FIELD(map, section, field)                                    \
  map[#field] = [](RunConfig* c, const nlohmann::json& v) {              \
    c->section.field = As<decltype(c->section.field)>(v, #field);        \
  }

const std::map<std::string, Setter>& Setters() {
  static const std::map<std::string, Setter> kSetters = [] {
    std::map<std::string, Setter> m;
    m["train_corpus"] = [](RunConfig* c, const nlohmann::json& v) {
      c->train_corpus = As<std::string>(v, "train_corpus");
    };
    m["dev_corpus"] = [](RunConfig* c, const nlohmann::json& v) {
      c->dev_corpus = As<std::string>(v, "dev_corpus");
    };
    m["ontology"] = [](RunConfig* c, const nlohmann::json& v) {
      c->ontology = As<std::string>(v, "ontology");
    };
    m["checkpoint"] = [](RunConfig* c, const nlohmann::json& v) {
      c->checkpoint = As<std::string>(v, "checkpoint");
    };
    m["metric_log"] = [](RunConfig* c, const nlohmann::json& v) {
      c->metric_log = As<std::string>(v, "metric_log");
    };
    m["vectors"] = [](RunConfig* c, const nlohmann::json& v) {
      c->vectors = As<std::string>(v, "vectors");
    };
    FP_FIELD(m, model, token_dim);
    FP_FIELD(m, model, pos_dim);
    FP_FIELD(m, model, constituent_dim);
    FP_FIELD(m, model, gcn_hidden);
    FP_FIELD(m, model, gcn_layers);
    FP_FIELD(m, model, gcn_mean_aggregation);
    FP_FIELD(m, model, path_include_endpoints);
    FP_FIELD(m, model, use_gcn);
    FP_FIELD(m, model, backbone_hidden);
    FP_FIELD(m, model, backbone_layers);
    FP_FIELD(m, model, lu_dim);
    FP_FIELD(m, model, frame_dim);
    FP_FIELD(m, model, fi_hidden);
    FP_FIELD(m, model, ai_projection_dim);
    FP_FIELD(m, model, ai_bilinear_dim);
    FP_FIELD(m, model, ac_projection_dim);
    FP_FIELD(m, model, dropout);
    FP_FIELD(m, model, gcn_dropout);
    FP_FIELD(m, model, leaky_slope);
    FP_FIELD(m, model, constrain_training);
    m["task"] = [](RunConfig* c, const nlohmann::json& v) {
      c->train.task = ParseTask(As<std::string>(v, "task"));
    };
    FP_FIELD(m, train, lr);
    FP_FIELD(m, train, beta1);
    FP_FIELD(m, train, beta2);
    FP_FIELD(m, train, adam_epsilon);
    FP_FIELD(m, train, weight_decay);
    FP_FIELD(m, train, scheduler_patience);
    FP_FIELD(m, train, scheduler_factor);
    FP_FIELD(m, train, scheduler_threshold);
    FP_FIELD(m, train, early_stop_patience);
    FP_FIELD(m, train, max_epochs);
    FP_FIELD(m, train, grad_clip);
    FP_FIELD(m, train, l2_transitions);
    FP_FIELD(m, train, l2_bilinear);
    FP_FIELD(m, train, batch_size);
    FP_FIELD(m, train, seed);
    FP_FIELD(m, train, target_metric);
    return m;
  }();
  return kSetters;
}

#undef FP_FIELD

}  // namespace

std::string TaskName(Task task) {
  switch (task) {
    case Task::kTi: return "ti";
    case Task::kFi: return "fi";
    case Task::kSrl: return "srl";
    case Task::kJoint: return "joint";
  }
  return "joint";
}

Task ParseTask(const std::string& name) {
  if (name == "ti") return Task::kTi;
  if (name == "fi") return Task::kFi;
  if (name == "srl") return Task::kSrl;
  if (name == "joint") return Task::kJoint;
  throw ConfigError("unknown task '" + name + "' (expected ti|fi|srl|joint)");
}

void ModelConfig::Validate() const {
  auto positive = [](int v, const char* name) {
    if (v < 1) throw ConfigError(std::string(name) + " must be positive");
  };
  positive(token_dim, "token_dim");
  positive(pos_dim, "pos_dim");
  positive(constituent_dim, "constituent_dim");
  positive(gcn_hidden, "gcn_hidden");
  positive(gcn_layers, "gcn_layers");
  positive(backbone_hidden, "backbone_hidden");
  positive(backbone_layers, "backbone_layers");
  positive(lu_dim, "lu_dim");
  positive(frame_dim, "frame_dim");
  positive(ai_projection_dim, "ai_projection_dim");
  positive(ai_bilinear_dim, "ai_bilinear_dim");
  positive(ac_projection_dim, "ac_projection_dim");
  for (int h : fi_hidden) positive(h, "fi_hidden entries");
  if (2 * backbone_hidden != embedding_dim()) {
    throw ConfigError("residual connection needs 2 * backbone_hidden (" +
                      std::to_string(2 * backbone_hidden) +
                      ") == token_dim + pos_dim (" +
                      std::to_string(embedding_dim()) + ")");
  }
  if (ai_projection_dim != ai_bilinear_dim) {
    throw ConfigError("ai_projection_dim must equal ai_bilinear_dim");
  }
  if (dropout < 0 || dropout >= 1 || gcn_dropout < 0 || gcn_dropout >= 1) {
    throw ConfigError("dropout rates must lie in [0, 1)");
  }
}

void TrainConfig::Validate() const {
  if (lr < 0) throw ConfigError("lr must be non-negative");
  if (beta1 < 0 || beta1 >= 1 || beta2 < 0 || beta2 >= 1) {
    throw ConfigError("Adam betas must lie in [0, 1)");
  }
  if (adam_epsilon <= 0) throw ConfigError("adam_epsilon must be positive");
  if (weight_decay < 0) throw ConfigError("weight_decay must be non-negative");
  if (scheduler_patience < 0 || early_stop_patience < 0) {
    throw ConfigError("patience values must be non-negative");
  }
  if (scheduler_factor <= 0 || scheduler_factor > 1) {
    throw ConfigError("scheduler_factor must lie in (0, 1]");
  }
  if (max_epochs < 1) throw ConfigError("max_epochs must be positive");
  if (grad_clip <= 0) throw ConfigError("grad_clip must be positive");
  if (l2_transitions < 0 || l2_bilinear < 0) {
    throw ConfigError("L2 coefficients must be non-negative");
  }
  if (batch_size < 1) throw ConfigError("batch_size must be positive");
}

ModelConfig FullSizeModelPreset() {
  ModelConfig c;
  c.token_dim = 768;
  c.pos_dim = 20;
  c.constituent_dim = 128;
  c.gcn_hidden = 128;
  c.gcn_layers = 2;
  c.backbone_hidden = 394;
  c.backbone_layers = 2;
  c.lu_dim = 128;
  c.frame_dim = 128;
  c.fi_hidden = {788, 788, 512};
  c.ai_projection_dim = 256;
  c.ai_bilinear_dim = 256;
  c.ac_projection_dim = 256;
  c.dropout = 0.2;
  c.gcn_dropout = 0.2;
  return c;
}

TrainConfig FullSizeTrainPreset() {
  TrainConfig c;
  c.lr = 2e-5;
  c.max_epochs = 200;
  c.early_stop_patience = 100;
  c.scheduler_patience = 5;
  return c;
}

RunConfig RunConfigFromJson(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  if (j.contains("preset")) {
    c.preset = As<std::string>(j["preset"], "preset");
    if (c.preset == "paper") {
      c.model = FullSizeModelPreset();
      c.train = FullSizeTrainPreset();
    } else if (c.preset != "desk") {
      throw ConfigError("unknown preset '" + c.preset + "' (expected desk|paper)");
    }
  }
  const auto& setters = Setters();
  for (const auto& [key, value] : j.items()) {
    if (key == "preset") continue;
    auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
    it->second(&c, value);
  }
  c.model.Validate();
  c.train.Validate();
  return c;
}

RunConfig LoadRunConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  try {
    return RunConfigFromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

nlohmann::ordered_json ModelConfigToJson(const ModelConfig& c) {
  nlohmann::ordered_json j;
  j["token_dim"] = c.token_dim;
  j["pos_dim"] = c.pos_dim;
  j["constituent_dim"] = c.constituent_dim;
  j["gcn_hidden"] = c.gcn_hidden;
  j["gcn_layers"] = c.gcn_layers;
  j["gcn_mean_aggregation"] = c.gcn_mean_aggregation;
  j["path_include_endpoints"] = c.path_include_endpoints;
  j["use_gcn"] = c.use_gcn;
  j["backbone_hidden"] = c.backbone_hidden;
  j["backbone_layers"] = c.backbone_layers;
  j["lu_dim"] = c.lu_dim;
  j["frame_dim"] = c.frame_dim;
  j["fi_hidden"] = c.fi_hidden;
  j["ai_projection_dim"] = c.ai_projection_dim;
  j["ai_bilinear_dim"] = c.ai_bilinear_dim;
  j["ac_projection_dim"] = c.ac_projection_dim;
  j["dropout"] = c.dropout;
  j["gcn_dropout"] = c.gcn_dropout;
  j["leaky_slope"] = c.leaky_slope;
  j["constrain_training"] = c.constrain_training;
  return j;
}

ModelConfig ModelConfigFromJson(const nlohmann::json& j) {
  RunConfig c;
  const auto& setters = Setters();
  for (const auto& [key, value] : j.items()) {
    auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown model key '" + key + "'");
    it->second(&c, value);
  }
  c.model.Validate();
  return c.model;
}

nlohmann::ordered_json TrainConfigToJson(const TrainConfig& c) {
  nlohmann::ordered_json j;
  j["task"] = TaskName(c.task);
  j["lr"] = c.lr;
  j["beta1"] = c.beta1;
  j["beta2"] = c.beta2;
  j["adam_epsilon"] = c.adam_epsilon;
  j["weight_decay"] = c.weight_decay;
  j["scheduler_patience"] = c.scheduler_patience;
  j["scheduler_factor"] = c.scheduler_factor;
  j["scheduler_threshold"] = c.scheduler_threshold;
  j["early_stop_patience"] = c.early_stop_patience;
  j["max_epochs"] = c.max_epochs;
  j["grad_clip"] = c.grad_clip;
  j["l2_transitions"] = c.l2_transitions;
  j["l2_bilinear"] = c.l2_bilinear;
  j["batch_size"] = c.batch_size;
  j["seed"] = c.seed;
  j["target_metric"] = c.target_metric;
  return j;
}

}  // namespace frameparse
