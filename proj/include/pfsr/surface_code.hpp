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

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pfsr/clifford_tableau.hpp"
#include "pfsr/pauli_string.hpp"

namespace pfsr {

enum class PauliType { X, Z };

char pauli_type_letter(PauliType t);

/// Corner slots of a plaquette.
enum Corner { kNW = 0, kNE = 1, kSW = 2, kSE = 3 };

struct Stabilizer {
    PauliType type;
    /// Data qubits in ascending order (2 on the boundary, 4 in the bulk).
    std::vector<std::size_t> support;
    /// Data qubit at each corner, or -1 where the plaquette is cut by the boundary.
    std::array<long, 4> corners;
    std::size_t ancilla;
    /// Plaquette coordinates: the NW corner sits at data row `row`, column `col` (either may be -1).
    int row;
    int col;
};

/// Distance-d rotated surface code. Data qubit (r, c) has index r*d + c; stabilizer k uses ancilla d^2 + k.
///
/// Plaquettes with NW corner (i, j), i, j in [-1, d-1], are X type when i + j is even and Z type otherwise.
/// Weight-2 plaquettes survive on the top and bottom edges when Z type and on the left and right edges
/// when X type. Stabilizers are numbered in sweep order: by the largest data index they touch, then by
/// position.
class RotatedSurfaceCode {
   public:
    std::size_t distance() const { return d_; }
    std::size_t num_data() const { return d_ * d_; }
    std::size_t num_stabilizers() const { return stabilizers_.size(); }
    std::size_t num_qubits() const { return 2 * d_ * d_ - 1; }
    std::size_t data_index(std::size_t row, std::size_t col) const { return row * d_ + col; }

    const std::vector<Stabilizer> &stabilizers() const { return stabilizers_; }
    const Stabilizer &stabilizer(std::size_t k) const { return stabilizers_[k]; }

    /// Stabilizer k as a Pauli on a register of `register_size` qubits (data qubits first).
    PauliString stabilizer_pauli(std::size_t k, std::size_t register_size) const;
    /// X on every qubit of data row 0.
    PauliString logical_x(std::size_t register_size) const;
    /// Z on every qubit of data column 0.
    PauliString logical_z(std::size_t register_size) const;
    std::vector<std::size_t> logical_x_support() const;
    std::vector<std::size_t> logical_z_support() const;

    /// Indices of stabilizers of type `t`, in sweep order.
    std::vector<std::size_t> stabilizers_of_type(PauliType t) const;

    friend RotatedSurfaceCode build_code(std::size_t d);

   private:
    std::size_t d_ = 0;
    std::vector<Stabilizer> stabilizers_;
};

/// Throws PreconditionError unless d is odd and at least 3.
RotatedSurfaceCode build_code(std::size_t d);

/// One step of a syndrome-extraction schedule.
struct ScheduleStep {
    enum class Kind {
        NoiseOn,            // channel on `qubits`
        MeasureStabilizer,  // direct measurement of stabilizer `index`
        AncillaCycle,       // full reset/entangle/measure cycle of stabilizer `index`'s ancilla
        ResetLayer,         // reset every qubit in `qubits`
        GateLayer,          // `gates`, all commuting and disjoint
        MeasureLayer,       // Z measurement of every ancilla in `qubits`
    };
    Kind kind;
    std::vector<std::size_t> qubits;
    std::size_t index = 0;
    std::vector<GateOp> gates;
};

/// Greedy sweep over stabilizers in `order` (default: sweep order): noise on the support qubits not yet
/// noised this round, then the stabilizer measurement.
/// Sweep from the top-left corner: data qubits are visited down pairs of columns (0,1,5,6,10,11,...
/// at d=5) and each stabilizer is measured as soon as its last qubit has been visited.
std::vector<std::size_t> sweep_order(const RotatedSurfaceCode &code);

std::vector<ScheduleStep> phenomenological_schedule(const RotatedSurfaceCode &code);
std::vector<ScheduleStep> phenomenological_schedule(const RotatedSurfaceCode &code, std::span<const std::size_t> order);

/// CNOT partner order inside a plaquette: NW, NE, SW, SE for Z type and NW, SW, NE, SE for X type.
std::array<Corner, 4> cnot_order(PauliType t);

/// One round of circuit-level extraction. Layered: per-stabilizer ancilla cycles in sweep order, each
/// preceded by noise on its data qubits not yet noised this round. Parallel: data noise, then resets,
/// Hadamards, four CNOT layers, Hadamards and measurements on all ancillas at once.
std::vector<ScheduleStep> circuit_level_schedule(const RotatedSurfaceCode &code, bool layered);

/// Gates of one ancilla cycle, excluding the reset and the measurement.
std::vector<GateOp> ancilla_cycle_gates(const RotatedSurfaceCode &code, std::size_t k);

/// Throws InternalConsistencyError unless every data qubit is noised exactly once, every stabilizer is
/// measured exactly once, and each measurement follows the noise on all of its support.
void check_phenomenological_round(const RotatedSurfaceCode &code, std::span<const ScheduleStep> steps);

/// One line per step, e.g. "noise 0 1", "measure 0 Z0Z1", "cycle 3", "gates CNOT:17>2 CNOT:4>18".
std::string dump_schedule(const RotatedSurfaceCode &code, std::span<const ScheduleStep> steps);

}  // namespace pfsr
