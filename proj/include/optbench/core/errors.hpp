// Copyright 2026 The optbench Authors.
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

#pragma once

#include <stdexcept>
#include <string>

namespace optbench {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An ask was issued after the whole budget had been handed out.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A caller violated the ask/tell protocol (unknown candidate, wrong domain...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// tell() received a NaN or infinite loss.
class InvalidLoss : public Error {
 public:
  using Error::Error;
};

/// Invalid static configuration: domains, solver parameters, suites.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An algorithm id is not known to the solver registry.
class RegistryError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input (algorithm specs, manifests, records).
class ParseError : public Error {
 public:
  using Error::Error;
};

/// The objective function failed to produce a value.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// The external evaluator violated the wire protocol.
class ProtocolError : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};

}  // namespace optbench
