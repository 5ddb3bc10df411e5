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

#ifndef FRAMEPARSE_ERRORS_H_
#define FRAMEPARSE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace frameparse {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data: corpus records, trees, ontologies,
// checkpoints.
class DataError : public Error {
 public:
  using Error::Error;
};

// Incompatible tensor shapes or non-finite numeric results.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration keys or values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace frameparse

#endif  // FRAMEPARSE_ERRORS_H_
