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

#ifndef FRAMEPARSE_CRF_H_
#define FRAMEPARSE_CRF_H_

#include <string>
#include <vector>

#include "frameparse/autodiff.h"
#include "frameparse/layers.h"

namespace frameparse {

// Additive score for forbidden starts, ends and transitions.
inline constexpr double kConstraintPenalty = -1e4;

// Legal starts, ends and transitions of a label scheme.
class CrfConstraints {
 public:
  explicit CrfConstraints(int num_labels);

  int num_labels() const { return k_; }
  bool start(int label) const { return start_[label]; }
  bool end(int label) const { return end_[label]; }
  bool transition(int from, int to) const { return trans_[from * k_ + to]; }

  void ForbidStart(int label) { start_[label] = false; }
  void ForbidEnd(int label) { end_[label] = false; }
  void ForbidTransition(int from, int to) { trans_[from * k_ + to] = false; }

  // True if the sequence only uses legal starts, ends and transitions.
  bool Admits(const std::vector<int>& labels) const;
  // Throws Error unless some legal sequence exists for every length >= 1.
  void Validate() const;

 private:
  int k_;
  std::vector<bool> start_;
  std::vector<bool> end_;
  std::vector<bool> trans_;
};

// B-Lu/I-Lu/C-Lu/O: no I-Lu or C-Lu at the start, no I-Lu after O.
CrfConstraints IobcConstraints();
// B/I/O: no I at the start, no I after O.
CrfConstraints Iob2Constraints();
// Only labels with allowed[label] may start, end or be entered.
CrfConstraints ElementConstraints(const std::vector<bool>& allowed);

struct CrfParams {
  ad::Tensor transitions;  // K x K, row = from
  ad::Tensor start;        // 1 x K
  ad::Tensor end;          // 1 x K

  int num_labels() const { return transitions.rows(); }
};

CrfParams MakeCrf(ParameterSet* ps, const std::string& name, int num_labels);

// log Z over every label sequence, by the forward recursion in log space.
// Forbidden moves under `constraints` (may be null) add kConstraintPenalty.
// Throws NumericError when emissions has no rows.
ad::Tensor LogPartition(const ad::Tensor& emissions, const CrfParams& params,
                        const CrfConstraints* constraints = nullptr);

// Score of one label sequence (penalties included).
ad::Tensor SequenceScore(const ad::Tensor& emissions,
                         const std::vector<int>& labels,
                         const CrfParams& params,
                         const CrfConstraints* constraints = nullptr);

// -log P(gold | emissions). Throws DataError when gold is illegal under
// `constraints`.
ad::Tensor SequenceNll(const ad::Tensor& emissions,
                       const std::vector<int>& gold, const CrfParams& params,
                       const CrfConstraints* constraints = nullptr);

struct ViterbiResult {
  std::vector<int> labels;
  double score = 0.0;
};

// Highest-scoring legal sequence; ties go to the lower label id.
ViterbiResult Viterbi(const ad::Tensor& emissions, const CrfParams& params,
                      const CrfConstraints* constraints = nullptr);

}  // namespace frameparse

#endif  // FRAMEPARSE_CRF_H_
