// Copyright 2026 The PFSR Authors
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

namespace pfsr {

// Operand sizes disagree (qubit counts, frame lengths).
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An operation was called outside its documented domain.
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A Pauli that anticommutes with part of a frame cannot be written as a product of its generators.
struct NotInGroupError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// GF(2) system had no solution: the frame is not independent or the operator is outside its span.
struct IndependenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IncompatibleFrameError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NormError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ImpossiblePostselectionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical bookkeeping drifted outside the range allowed by the algebra.
struct InternalConsistencyError : std::logic_error {
    using std::logic_error::logic_error;
};

struct NoCrossingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace pfsr
