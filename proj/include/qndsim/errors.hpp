// Copyright 2026 The qndsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qnd {

/// Base class of every error thrown by qndsim.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not fit together.
class DimensionError : public Error {
   public:
    using Error::Error;
};

/// A value breaks a documented invariant. `field()` names the offending input
/// (e.g. "interaction.matrix") when the value came from a model file.
class ValidationError : public Error {
   public:
    explicit ValidationError(const std::string &what, std::string field = {})
        : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

    const std::string &field() const noexcept { return field_; }

   private:
    std::string field_;
};

/// Collapse was requested onto an outcome that has (numerically) zero probability.
class ImpossibleOutcomeError : public Error {
   public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
   public:
    using Error::Error;
};

/// Required argument missing or inconsistent with the others.
class ArgumentError : public Error {
   public:
    using Error::Error;
};

/// Structured input could not be read.
class ParseError : public Error {
   public:
    using Error::Error;
};

/// A mathematical implication that must always hold was observed broken.
/// This is a bug in qndsim, never a user error.
class InternalConsistencyError : public Error {
   public:
    using Error::Error;
};

}  // namespace qnd
