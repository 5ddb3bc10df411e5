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

#include "frameparse/crf.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "frameparse/corpus.h"
#include "frameparse/errors.h"

namespace frameparse {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double LogAdd(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// Transition/start/end scores with constraint penalties folded in.
struct Effective {
  int k;
  std::vector<double> trans, start, end;
};

Effective Fold(const CrfParams& p, const CrfConstraints* c) {
  const int k = p.num_labels();
  if (p.start.cols() != k || p.end.cols() != k || p.transitions.cols() != k) {
    throw NumericError("CRF parameter shapes disagree");
  }
  if (c && c->num_labels() != k) {
    throw NumericError("CRF constraints have the wrong label count");
  }
  Effective e{k, p.transitions.values(), p.start.values(), p.end.values()};
  if (c) {
    for (int i = 0; i < k; ++i) {
      if (!c->start(i)) e.start[i] += kConstraintPenalty;
      if (!c->end(i)) e.end[i] += kConstraintPenalty;
      for (int j = 0; j < k; ++j) {
        if (!c->transition(i, j)) e.trans[i * k + j] += kConstraintPenalty;
      }
    }
  }
  return e;
}

void CheckEmissions(const ad::Tensor& emissions, int k) {
  if (emissions.rows() == 0) throw NumericError("CRF: empty sequence");
  if (emissions.cols() != k) {
    throw NumericError("CRF: emissions have " + std::to_string(emissions.cols()) +
                       " labels, expected " + std::to_string(k));
  }
}

}  // namespace

CrfConstraints::CrfConstraints(int num_labels)
    : k_(num_labels),
      start_(num_labels, true),
      end_(num_labels, true),
      trans_(static_cast<size_t>(num_labels) * num_labels, true) {}

bool CrfConstraints::Admits(const std::vector<int>& labels) const {
  if (labels.empty()) return true;
  for (int l : labels) {
    if (l < 0 || l >= k_) return false;
  }
  if (!start(labels.front()) || !end(labels.back())) return false;
  for (size_t t = 1; t < labels.size(); ++t) {
    if (!transition(labels[t - 1], labels[t])) return false;
  }
  return true;
}

void CrfConstraints::Validate() const {
  // Reachable label sets by position; they cycle within 2^K steps.
  std::vector<bool> current = start_;
  std::set<std::vector<bool>> seen;
  while (seen.insert(current).second) {
    bool can_end = false;
    for (int i = 0; i < k_; ++i) can_end = can_end || (current[i] && end_[i]);
    if (!can_end) throw Error("CRF constraints admit no legal sequence");
    std::vector<bool> next(k_, false);
    for (int i = 0; i < k_; ++i) {
      if (!current[i]) continue;
      for (int j = 0; j < k_; ++j) next[j] = next[j] || transition(i, j);
    }
    current = std::move(next);
  }
}

CrfConstraints IobcConstraints() {
  CrfConstraints c(kNumIobcLabels);
  c.ForbidStart(kILu);
  c.ForbidStart(kCLu);
  c.ForbidTransition(kOLu, kILu);
  return c;
}

CrfConstraints Iob2Constraints() {
  CrfConstraints c(kNumIob2Labels);
  c.ForbidStart(kI);
  c.ForbidTransition(kO, kI);
  return c;
}

CrfConstraints ElementConstraints(const std::vector<bool>& allowed) {
  const int k = static_cast<int>(allowed.size());
  CrfConstraints c(k);
  for (int j = 0; j < k; ++j) {
    if (allowed[j]) continue;
    c.ForbidStart(j);
    c.ForbidEnd(j);
    for (int i = 0; i < k; ++i) {
      c.ForbidTransition(i, j);
      c.ForbidTransition(j, i);
    }
  }
  c.Validate();
  return c;
}

CrfParams MakeCrf(ParameterSet* ps, const std::string& name, int num_labels) {
  CrfParams p;
  p.transitions = ps->Zeros(name + ".transitions", num_labels, num_labels);
  p.start = ps->Bias(name + ".start", num_labels);
  p.end = ps->Bias(name + ".end", num_labels);
  return p;
}

ad::Tensor LogPartition(const ad::Tensor& emissions, const CrfParams& params,
                        const CrfConstraints* constraints) {
  const Effective eff = Fold(params, constraints);
  const int k = eff.k;
  CheckEmissions(emissions, k);
  const int n = emissions.rows();
  const auto& em = emissions.values();

  std::vector<double> alpha(static_cast<size_t>(n) * k, kNegInf);
  std::vector<double> beta(static_cast<size_t>(n) * k, kNegInf);
  for (int j = 0; j < k; ++j) alpha[j] = eff.start[j] + em[j];
  for (int t = 1; t < n; ++t) {
    for (int j = 0; j < k; ++j) {
      double acc = kNegInf;
      for (int i = 0; i < k; ++i) {
        acc = LogAdd(acc, alpha[(t - 1) * k + i] + eff.trans[i * k + j]);
      }
      alpha[t * k + j] = acc + em[t * k + j];
    }
  }
  for (int i = 0; i < k; ++i) beta[(n - 1) * k + i] = eff.end[i];
  for (int t = n - 2; t >= 0; --t) {
    for (int i = 0; i < k; ++i) {
      double acc = kNegInf;
      for (int j = 0; j < k; ++j) {
        acc = LogAdd(acc, eff.trans[i * k + j] + em[(t + 1) * k + j] +
                              beta[(t + 1) * k + j]);
      }
      beta[t * k + i] = acc;
    }
  }
  double log_z = kNegInf;
  for (int j = 0; j < k; ++j) log_z = LogAdd(log_z, alpha[(n - 1) * k + j] + eff.end[j]);

  return ad::MakeResult(
      1, 1, {log_z}, {emissions, params.transitions, params.start, params.end},
      [n, k, eff, alpha = std::move(alpha), beta = std::move(beta),
       log_z](ad::TensorImpl& self) {
        const double g = self.grad[0];
        ad::TensorImpl& E = *self.inputs[0];
        ad::TensorImpl& T = *self.inputs[1];
        ad::TensorImpl& S = *self.inputs[2];
        ad::TensorImpl& F = *self.inputs[3];
        auto marginal = [&](int t, int j) {
          return std::exp(alpha[t * k + j] + beta[t * k + j] - log_z);
        };
        if (E.requires_grad) {
          auto& ge = E.EnsureGrad();
          for (int t = 0; t < n; ++t)
            for (int j = 0; j < k; ++j) ge[t * k + j] += g * marginal(t, j);
        }
        if (S.requires_grad) {
          auto& gs = S.EnsureGrad();
          for (int j = 0; j < k; ++j) gs[j] += g * marginal(0, j);
        }
        if (F.requires_grad) {
          auto& gf = F.EnsureGrad();
          for (int j = 0; j < k; ++j) gf[j] += g * marginal(n - 1, j);
        }
        if (T.requires_grad) {
          auto& gt = T.EnsureGrad();
          for (int t = 0; t + 1 < n; ++t)
            for (int i = 0; i < k; ++i)
              for (int j = 0; j < k; ++j) {
                gt[i * k + j] +=
                    g * std::exp(alpha[t * k + i] + eff.trans[i * k + j] +
                                 E.value[(t + 1) * k + j] +
                                 beta[(t + 1) * k + j] - log_z);
              }
        }
      });
}

ad::Tensor SequenceScore(const ad::Tensor& emissions,
                         const std::vector<int>& labels,
                         const CrfParams& params,
                         const CrfConstraints* constraints) {
  const Effective eff = Fold(params, constraints);
  const int k = eff.k;
  CheckEmissions(emissions, k);
  const int n = emissions.rows();
  if (static_cast<int>(labels.size()) != n) {
    throw DataError("CRF: label sequence length does not match emissions");
  }
  for (int l : labels) {
    if (l < 0 || l >= k) throw DataError("CRF: label id out of range");
  }
  double score = eff.start[labels[0]] + eff.end[labels[n - 1]];
  for (int t = 0; t < n; ++t) {
    score += emissions.at(t, labels[t]);
    if (t > 0) score += eff.trans[labels[t - 1] * k + labels[t]];
  }
  return ad::MakeResult(
      1, 1, {score}, {emissions, params.transitions, params.start, params.end},
      [labels, n, k](ad::TensorImpl& self) {
        const double g = self.grad[0];
        ad::TensorImpl& E = *self.inputs[0];
        ad::TensorImpl& T = *self.inputs[1];
        ad::TensorImpl& S = *self.inputs[2];
        ad::TensorImpl& F = *self.inputs[3];
        if (E.requires_grad) {
          auto& ge = E.EnsureGrad();
          for (int t = 0; t < n; ++t) ge[t * k + labels[t]] += g;
        }
        if (S.requires_grad) S.EnsureGrad()[labels[0]] += g;
        if (F.requires_grad) F.EnsureGrad()[labels[n - 1]] += g;
        if (T.requires_grad) {
          auto& gt = T.EnsureGrad();
          for (int t = 1; t < n; ++t) gt[labels[t - 1] * k + labels[t]] += g;
        }
      });
}

ad::Tensor SequenceNll(const ad::Tensor& emissions,
                       const std::vector<int>& gold, const CrfParams& params,
                       const CrfConstraints* constraints) {
  if (constraints && !constraints->Admits(gold)) {
    throw DataError("gold label sequence is illegal under the CRF constraints");
  }
  return ad::Sub(LogPartition(emissions, params, constraints),
                 SequenceScore(emissions, gold, params, constraints));
}

ViterbiResult Viterbi(const ad::Tensor& emissions, const CrfParams& params,
                      const CrfConstraints* constraints) {
  const int k = params.num_labels();
  CheckEmissions(emissions, k);
  const int n = emissions.rows();
  const auto& trans = params.transitions.values();
  const auto& start = params.start.values();
  const auto& end = params.end.values();
  auto legal_start = [&](int j) { return !constraints || constraints->start(j); };
  auto legal_end = [&](int j) { return !constraints || constraints->end(j); };
  auto legal_move = [&](int i, int j) {
    return !constraints || constraints->transition(i, j);
  };

  std::vector<double> best(static_cast<size_t>(n) * k, kNegInf);
  std::vector<int> back(static_cast<size_t>(n) * k, -1);
  for (int j = 0; j < k; ++j) {
    if (legal_start(j)) best[j] = start[j] + emissions.at(0, j);
  }
  for (int t = 1; t < n; ++t) {
    for (int j = 0; j < k; ++j) {
      for (int i = 0; i < k; ++i) {
        const double prev = best[(t - 1) * k + i];
        if (prev == kNegInf || !legal_move(i, j)) continue;
        const double s = prev + trans[i * k + j];
        if (back[t * k + j] < 0 || s > best[t * k + j]) {
          best[t * k + j] = s;
          back[t * k + j] = i;
        }
      }
      if (back[t * k + j] >= 0) best[t * k + j] += emissions.at(t, j);
    }
  }
  ViterbiResult result;
  int last = -1;
  double top = kNegInf;
  for (int j = 0; j < k; ++j) {
    const double s = best[(n - 1) * k + j];
    if (s == kNegInf || !legal_end(j)) continue;
    if (last < 0 || s + end[j] > top) {
      top = s + end[j];
      last = j;
    }
  }
  if (last < 0) throw Error("CRF constraints admit no sequence of this length");
  result.score = top;
  result.labels.assign(n, 0);
  result.labels[n - 1] = last;
  for (int t = n - 1; t > 0; --t) result.labels[t - 1] = back[t * k + result.labels[t]];
  return result;
}

}  // namespace frameparse
