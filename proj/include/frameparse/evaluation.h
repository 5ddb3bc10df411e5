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

#ifndef FRAMEPARSE_EVALUATION_H_
#define FRAMEPARSE_EVALUATION_H_

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "frameparse/corpus.h"
#include "json.hpp"

namespace frameparse {

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  int matched = 0;
  int predicted = 0;
  int gold = 0;
};

// Computes P/R/F1 from tallies. Both sides empty counts as perfect.
Prf PrfFromCounts(int matched, int predicted, int gold);

using TargetSet = std::vector<int>;

// Exact index-set matching of targets, per sentence. Throws Error on a
// length mismatch.
Prf SpanPrf(const std::vector<std::vector<TargetSet>>& gold,
            const std::vector<std::vector<TargetSet>>& pred);

struct Accuracy {
  double accuracy = 0.0;
  int correct = 0;
  int total = 0;
};

Accuracy FiAccuracy(const std::vector<std::string>& gold,
                    const std::vector<std::string>& pred);

// (label, start, end) tuples matched within aligned annotations.
Prf SrlPrf(const std::vector<std::vector<ElementSpan>>& gold,
           const std::vector<std::vector<ElementSpan>>& pred);

struct EvalReport {
  std::string task;
  std::optional<Prf> prf;
  std::optional<Accuracy> accuracy;
  // Predicted targets dropped for an unknown lexical unit.
  int dropped_targets = 0;

  // F1, accuracy, or their mean when both are present.
  double metric() const;
  nlohmann::ordered_json ToJson() const;
};

}  // namespace frameparse

#endif  // FRAMEPARSE_EVALUATION_H_
