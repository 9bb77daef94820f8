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

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace pfsr::oracle {

struct EquivalenceOptions {
    std::size_t circuits = 500;
    std::size_t max_qubits = 8;
    std::size_t max_depth = 40;
    std::uint64_t seed = 1;
    /// A circuit fails when 1 - fidelity exceeds this after any operation.
    double tolerance = 1e-8;
};

struct EquivalenceReport {
    std::size_t circuits = 0;
    std::size_t operations = 0;
    std::size_t measurements = 0;
    std::size_t channels = 0;
    std::size_t failures = 0;
    double min_fidelity = 1;
    std::size_t max_entries = 1;
    /// First few failing circuits, with the step and the sparse state.
    std::vector<std::string> messages;

    bool passed() const { return failures == 0; }
};

/// Random circuits over H, S, CNOT, T and R_Z with forced Pauli measurements and sampled
/// amplitude-damping, depolarizing and Z-rotation channels. Each sampled Kraus choice is replayed on a
/// dense state vector and the two states are compared after every operation.
EquivalenceReport run_equivalence_suite(const EquivalenceOptions &options);

}  // namespace pfsr::oracle
