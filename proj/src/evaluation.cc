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

#include "frameparse/evaluation.h"

#include <algorithm>

#include "frameparse/errors.h"

namespace frameparse {
namespace {

template <typename T>
int CountMatches(std::vector<T> gold, std::vector<T> pred) {
  std::sort(gold.begin(), gold.end());
  std::sort(pred.begin(), pred.end());
  int matched = 0;
  size_t i = 0, j = 0;
  while (i < gold.size() && j < pred.size()) {
    if (gold[i] == pred[j]) {
      ++matched;
      ++i;
      ++j;
    } else if (gold[i] < pred[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return matched;
}

}  // namespace

Prf PrfFromCounts(int matched, int predicted, int gold) {
  Prf r;
  r.matched = matched;
  r.predicted = predicted;
  r.gold = gold;
  if (predicted == 0 && gold == 0) {
    r.precision = r.recall = r.f1 = 1.0;
    return r;
  }
  r.precision = predicted > 0 ? static_cast<double>(matched) / predicted : 0.0;
  r.recall = gold > 0 ? static_cast<double>(matched) / gold : 0.0;
  const double sum = r.precision + r.recall;
  r.f1 = sum > 0 ? 2.0 * r.precision * r.recall / sum : 0.0;
  return r;
}

Prf SpanPrf(const std::vector<std::vector<TargetSet>>& gold,
            const std::vector<std::vector<TargetSet>>& pred) {
  if (gold.size() != pred.size()) {
    throw Error("span_prf: gold and predicted sentence counts differ");
  }
  int matched = 0, n_pred = 0, n_gold = 0;
  for (size_t s = 0; s < gold.size(); ++s) {
    auto canonical = [](std::vector<TargetSet> sets) {
      for (auto& t : sets) std::sort(t.begin(), t.end());
      return sets;
    };
    matched += CountMatches(canonical(gold[s]), canonical(pred[s]));
    n_pred += static_cast<int>(pred[s].size());
    n_gold += static_cast<int>(gold[s].size());
  }
  return PrfFromCounts(matched, n_pred, n_gold);
}

Accuracy FiAccuracy(const std::vector<std::string>& gold,
                    const std::vector<std::string>& pred) {
  if (gold.size() != pred.size()) {
    throw Error("fi_accuracy: gold and predicted target counts differ");
  }
  Accuracy a;
  a.total = static_cast<int>(gold.size());
  for (size_t i = 0; i < gold.size(); ++i) a.correct += gold[i] == pred[i];
  a.accuracy = a.total > 0 ? static_cast<double>(a.correct) / a.total : 0.0;
  return a;
}

Prf SrlPrf(const std::vector<std::vector<ElementSpan>>& gold,
           const std::vector<std::vector<ElementSpan>>& pred) {
  if (gold.size() != pred.size()) {
    throw Error("srl_prf: gold and predicted annotation counts differ");
  }
  using Tuple = std::tuple<std::string, int, int>;
  auto tuples = [](const std::vector<ElementSpan>& spans) {
    std::vector<Tuple> out;
    for (const auto& e : spans) out.emplace_back(e.label, e.span.start, e.span.end);
    return out;
  };
  int matched = 0, n_pred = 0, n_gold = 0;
  for (size_t a = 0; a < gold.size(); ++a) {
    matched += CountMatches(tuples(gold[a]), tuples(pred[a]));
    n_pred += static_cast<int>(pred[a].size());
    n_gold += static_cast<int>(gold[a].size());
  }
  return PrfFromCounts(matched, n_pred, n_gold);
}

double EvalReport::metric() const {
  if (prf && accuracy) return 0.5 * (prf->f1 + accuracy->accuracy);
  if (accuracy) return accuracy->accuracy;
  return prf ? prf->f1 : 0.0;
}

nlohmann::ordered_json EvalReport::ToJson() const {
  nlohmann::ordered_json j;
  j["task"] = task;
  nlohmann::ordered_json counts;
  if (prf) {
    j["precision"] = prf->precision;
    j["recall"] = prf->recall;
    j["f1"] = prf->f1;
    counts["matched"] = prf->matched;
    counts["predicted"] = prf->predicted;
    counts["gold"] = prf->gold;
  }
  if (accuracy) {
    j["accuracy"] = accuracy->accuracy;
    counts["correct"] = accuracy->correct;
    counts["total"] = accuracy->total;
  }
  j["counts"] = counts;
  if (dropped_targets > 0) j["dropped_targets"] = dropped_targets;
  return j;
}

}  // namespace frameparse
