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
#include <span>
#include <vector>

#include "pfsr/bits.hpp"
#include "pfsr/clifford_tableau.hpp"
#include "pfsr/pauli_string.hpp"

namespace pfsr {

/// Result of writing a Pauli as `i^phase * prod_{i in subset} S_i` over a stabilizer frame.
struct FrameDecomposition {
    Bits subset;
    unsigned phase = 0;  // power of i
};

/// Gaussian elimination of a stabilizer frame over GF(2), reusable for many decompositions.
///
/// Construction is O(n^2 * words); each `decompose` call afterwards is O(n * words). The solver keeps
/// its own copy of the generators.
class FrameSolver {
   public:
    explicit FrameSolver(std::span<const PauliString> frame);

    std::size_t num_generators() const { return frame_.size(); }
    /// Number of independent generators.
    std::size_t rank() const { return pivots_.size(); }

    /// Decomposes `p`, which must commute with every generator.
    /// Throws NotInGroupError if it anticommutes with one and IndependenceError if no GF(2) solution exists.
    FrameDecomposition decompose(const PauliString &p) const;

    /// `<0| first^dagger second |0>` as a power of i, for two histories with the same label.
    unsigned relative_phase(const PauliString &first, const PauliString &second) const;

   private:
    struct Pivot {
        std::size_t column;  // < n selects a z bit, otherwise an x bit
        PauliString op;  // product of the generators in `combination`, phase included
        Bits combination;
    };

    std::vector<PauliString> frame_;
    std::size_t num_qubits_ = 0;
    std::vector<Pivot> pivots_;
};

/// One-shot decomposition; see FrameSolver::decompose.
FrameDecomposition stabilizer_decomposition(std::span<const PauliString> frame, const PauliString &p);

/// True when the generators pairwise commute and have full GF(2) rank.
bool is_valid_frame(std::span<const PauliString> frame);

/// Finds a Clifford U with U S_i U^dagger = Z_i for the n-1 `stabilizers`, U b U^dagger = Z_{n-1} and
/// U a U^dagger = X_{n-1}, all with phase +1, by symplectic Gaussian elimination with phase tracking.
///
/// Requires the inputs to be independent, the stabilizers to commute with each other and with a and b,
/// and a to anticommute with b. Violations throw PreconditionError.
CliffordTableau frame_reduction_clifford(
    std::span<const PauliString> stabilizers, const PauliString &a, const PauliString &b);

}  // namespace pfsr
