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

#ifndef FRAMEPARSE_TRACE_H_
#define FRAMEPARSE_TRACE_H_

#include <optional>
#include <string>

#include "frameparse/corpus.h"
#include "frameparse/model.h"

namespace frameparse {

// Plain-text dump of one sentence through the network: nodes, adjacency,
// H(0)..H(L), root and predicate path features with their node labels, the
// encoding a, TI emissions and the decoded Viterbi path. `reference` picks
// the predicate token for p_l; by default the first target of the first
// annotation, else of the first predicted target. Output is byte-stable.
std::string GenerateTrace(const FrameParser& parser, const Sentence& sentence,
                          std::optional<int> reference = std::nullopt);

}  // namespace frameparse

#endif  // FRAMEPARSE_TRACE_H_
