// Copyright 2026 The Hybrid DST Authors.
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

#ifndef HDST_COMMON_ERRORS_H_
#define HDST_COMMON_ERRORS_H_

#include <stdexcept>
#include <string>

namespace hdst {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition was violated by the caller.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Tensor or vector dimensions do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// NaN or infinite values where finite ones are required.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Invalid configuration values.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Missing or malformed input files.
class LoadError : public Error {
 public:
  using Error::Error;
};

// Dialog logs and labels disagree on turn structure.
class AlignmentError : public LoadError {
 public:
  using LoadError::LoadError;
};

// Artifact was produced with an incompatible format, vocabulary or ontology.
class VersionError : public Error {
 public:
  using Error::Error;
};

// Training produced non-finite parameters.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace hdst

#endif  // HDST_COMMON_ERRORS_H_
