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

#ifndef FRAMEPARSE_SYNTH_H_
#define FRAMEPARSE_SYNTH_H_

#include <cstdint>
#include <vector>

#include "frameparse/corpus.h"

namespace frameparse {

// Toy frame inventory matching GenerateCorpus(). "ran.v" evokes two frames.
Ontology SynthOntology();

// Deterministic toy-grammar corpus. Every sentence is validated, has one or
// two targets, and every frame-element span is the token span of a
// constituent. Prepositional "with" phrases attach to the verb phrase
// (an Instrument element) or to the object noun phrase (inside the object
// span) with identical word distributions.
std::vector<Sentence> GenerateCorpus(uint64_t seed, int num_sentences);

}  // namespace frameparse

#endif  // FRAMEPARSE_SYNTH_H_
