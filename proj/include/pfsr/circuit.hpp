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
#include <span>
#include <string>
#include <vector>

#include "pfsr/noise.hpp"
#include "pfsr/pfsr_state.hpp"
#include "pfsr/rng.hpp"
#include "pfsr/surface_code.hpp"

namespace pfsr {

enum class MemoryMode { Phenomenological, CircuitLayered, CircuitParallel };
enum class Basis { Z, X };

std::string memory_mode_name(MemoryMode m);
MemoryMode parse_memory_mode(const std::string &text);
std::string basis_name(Basis b);
Basis parse_basis(const std::string &text);

enum class OpKind : std::uint8_t {
    Gate,       // Clifford gate
    Noise,      // the experiment's channel on q0
    ResetFlip,  // bit flip on q0 with the classical flip probability
    Reset,      // reset q0 to |0>
    Measure,    // measure observables[observable] into record `record`
};

struct CircuitOp {
    OpKind kind;
    Gate gate = Gate::I;
    std::uint32_t q0 = 0;
    std::uint32_t q1 = 0;
    std::uint32_t observable = 0;
    std::int32_t record = -1;
    /// Measurement outcome is flipped with the classical flip probability.
    bool noisy = false;
    /// Index into Circuit::locations for ops that can fault, -1 otherwise.
    std::int32_t location = -1;
};

/// Kind of error process at a fault location.
enum class FaultKind : std::uint8_t { Channel, BitFlip, MeasurementFlip };

struct FaultLocation {
    std::size_t op;
    FaultKind kind;
};

/// Flat memory-experiment circuit: noisy rounds followed by one ideal round of direct stabilizer
/// measurements and the logical measurement.
///
/// Record `round * num_stabilizers + k` holds stabilizer k in `round` (the final ideal round is
/// `rounds`); the last record is the logical observable. A record bit of 1 means eigenvalue -1.
struct Circuit {
    std::size_t num_qubits = 0;
    std::size_t num_stabilizers = 0;
    std::size_t rounds = 0;
    std::vector<CircuitOp> ops;
    std::vector<PauliString> observables;
    std::vector<FaultLocation> locations;

    std::size_t num_records() const { return (rounds + 1) * num_stabilizers + 1; }
    std::size_t logical_record() const { return (rounds + 1) * num_stabilizers; }
};

/// Builds the memory circuit for `rounds` noisy rounds of the given schedule.
Circuit build_memory_circuit(const RotatedSurfaceCode &code, Basis basis, MemoryMode mode, std::size_t rounds);

/// Same as build_memory_circuit with a custom stabilizer order for phenomenological rounds.
Circuit build_phenomenological_circuit(
    const RotatedSurfaceCode &code, Basis basis, std::size_t rounds, std::span<const std::size_t> order);

/// One fault forced at a location. `pauli` is 'X', 'Y' or 'Z' for channel locations and ignored for flips.
struct InjectedFault {
    std::size_t location;
    char pauli = 'X';
};

struct ExecutionOptions {
    NoiseChannel channel;
    /// Probability of flipping a noisy measurement record and of a bit flip after each reset.
    double flip_probability = 0;
    /// Truncation cutoff applied after every operation that grows the state (0 disables).
    double epsilon = 0;
    /// When set, all stochastic noise is off and exactly these faults are applied.
    const std::vector<InjectedFault> *faults = nullptr;
};

struct ExecutionResult {
    std::vector<std::uint8_t> records;
    SignedSampleWeight weight;
    std::size_t max_entries = 1;
    std::size_t truncation_fallbacks = 0;
};

/// Runs the circuit on `state` (which must already hold the prepared code state).
ExecutionResult execute(const Circuit &circuit, PfsrState &state, const ExecutionOptions &options, Rng &rng);

/// Record bits flipped by a set of Pauli faults, found by propagating them through the Clifford circuit.
std::vector<std::uint8_t> propagate_faults(const Circuit &circuit, std::span<const InjectedFault> faults);

/// Prepares |0>_L (Z basis) or |+>_L (X basis) on `num_qubits` qubits by projecting every stabilizer to +1.
PfsrState prepare_logical_state(const RotatedSurfaceCode &code, Basis basis, std::size_t num_qubits);

}  // namespace pfsr
