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
#include <string>
#include <vector>

#include "pfsr/pauli_string.hpp"

namespace pfsr {

/// Elementary Clifford gates understood by tableaux and states.
enum class Gate { I, X, Y, Z, H, S, SDag, CNOT, CZ };

bool is_two_qubit(Gate g);
std::string gate_name(Gate g);

/// One elementary gate application; `q1` is ignored for single-qubit gates.
struct GateOp {
    Gate gate = Gate::I;
    std::size_t q0 = 0;
    std::size_t q1 = 0;
};

/// Conjugates `p` in place by gate `g` acting on `q0` (and `q1` for two-qubit gates).
void conjugate_by_gate(PauliString &p, Gate g, std::size_t q0, std::size_t q1 = 0);

/// Clifford operator C stored as the images C Z_i C^dagger and C X_i C^dagger.
class CliffordTableau {
   public:
    CliffordTableau() = default;
    static CliffordTableau identity(std::size_t num_qubits);
    static CliffordTableau from_gate(std::size_t num_qubits, Gate g, std::size_t q0, std::size_t q1 = 0);
    /// Builds a tableau from explicit images. Throws PreconditionError if commutation is not preserved.
    static CliffordTableau from_images(std::vector<PauliString> z_images, std::vector<PauliString> x_images);

    std::size_t num_qubits() const { return z_images_.size(); }
    const PauliString &z_image(std::size_t q) const { return z_images_[q]; }
    const PauliString &x_image(std::size_t q) const { return x_images_[q]; }

    /// Returns C p C^dagger.
    PauliString conjugate(const PauliString &p) const;
    /// Returns C^dagger p C.
    PauliString conjugate_inverse(const PauliString &p) const;

    /// Replaces C by G C, i.e. appends gate G after the circuit C.
    void append_gate(Gate g, std::size_t q0, std::size_t q1 = 0);

    CliffordTableau inverse() const;

    /// Images preserve the canonical commutation relations and are Hermitian.
    bool is_valid() const;

    friend bool operator==(const CliffordTableau &a, const CliffordTableau &b) {
        return a.z_images_ == b.z_images_ && a.x_images_ == b.x_images_;
    }

   private:
    friend CliffordTableau compose(const CliffordTableau &outer, const CliffordTableau &inner);

    std::vector<PauliString> z_images_;
    std::vector<PauliString> x_images_;
};

/// Tableau of `outer` applied after `inner`: conjugates as outer(inner(p)).
CliffordTableau compose(const CliffordTableau &outer, const CliffordTableau &inner);

}  // namespace pfsr
