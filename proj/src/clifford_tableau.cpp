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

#include "pfsr/clifford_tableau.hpp"

#include "pfsr/errors.hpp"

namespace pfsr {

bool is_two_qubit(Gate g) { return g == Gate::CNOT || g == Gate::CZ; }

std::string gate_name(Gate g) {
    switch (g) {
        case Gate::I:
            return "I";
        case Gate::X:
            return "X";
        case Gate::Y:
            return "Y";
        case Gate::Z:
            return "Z";
        case Gate::H:
            return "H";
        case Gate::S:
            return "S";
        case Gate::SDag:
            return "S_DAG";
        case Gate::CNOT:
            return "CNOT";
        case Gate::CZ:
            return "CZ";
    }
    return "?";
}

void conjugate_by_gate(PauliString &p, Gate g, std::size_t q0, std::size_t q1) {
    switch (g) {
        case Gate::I:
            break;
        case Gate::X:
            if (p.z()[q0]) {
                p.add_phase(2);
            }
            break;
        case Gate::Y:
            if (p.z()[q0] != p.x()[q0]) {
                p.add_phase(2);
            }
            break;
        case Gate::Z:
            if (p.x()[q0]) {
                p.add_phase(2);
            }
            break;
        case Gate::H:
            p.conjugate_h(q0);
            break;
        case Gate::S:
            p.conjugate_s(q0);
            break;
        case Gate::SDag:
            p.conjugate_s_dag(q0);
            break;
        case Gate::CNOT:
            p.conjugate_cnot(q0, q1);
            break;
        case Gate::CZ:
            p.conjugate_cz(q0, q1);
            break;
    }
}

CliffordTableau CliffordTableau::identity(std::size_t num_qubits) {
    CliffordTableau t;
    t.z_images_.reserve(num_qubits);
    t.x_images_.reserve(num_qubits);
    for (std::size_t q = 0; q < num_qubits; q++) {
        t.z_images_.push_back(PauliString::single(num_qubits, q, 'Z'));
        t.x_images_.push_back(PauliString::single(num_qubits, q, 'X'));
    }
    return t;
}

CliffordTableau CliffordTableau::from_gate(std::size_t num_qubits, Gate g, std::size_t q0, std::size_t q1) {
    if (q0 >= num_qubits || (is_two_qubit(g) && (q1 >= num_qubits || q1 == q0))) {
        throw DimensionError("gate target out of range");
    }
    CliffordTableau t = identity(num_qubits);
    t.append_gate(g, q0, q1);
    return t;
}

CliffordTableau CliffordTableau::from_images(std::vector<PauliString> z_images, std::vector<PauliString> x_images) {
    if (z_images.size() != x_images.size()) {
        throw DimensionError("tableau needs as many X images as Z images");
    }
    for (std::size_t q = 0; q < z_images.size(); q++) {
        if (z_images[q].num_qubits() != z_images.size() || x_images[q].num_qubits() != z_images.size()) {
            throw DimensionError("tableau image has wrong qubit count");
        }
    }
    CliffordTableau t;
    t.z_images_ = std::move(z_images);
    t.x_images_ = std::move(x_images);
    if (!t.is_valid()) {
        throw PreconditionError("images do not preserve the Pauli commutation relations");
    }
    return t;
}

PauliString CliffordTableau::conjugate(const PauliString &p) const {
    const std::size_t n = num_qubits();
    if (p.num_qubits() != n) {
        throw DimensionError("tableau and Pauli sizes differ");
    }
    PauliString result(n);
    unsigned phase = p.phase();
    for (std::size_t q = 0; q < n; q++) {
        bool x = p.x()[q], z = p.z()[q];
        // Y = i X Z.
        if (x) {
            result *= x_images_[q];
        }
        if (z) {
            result *= z_images_[q];
        }
        if (x && z) {
            phase += 1;
        }
    }
    result.add_phase(phase);
    return result;
}

PauliString CliffordTableau::conjugate_inverse(const PauliString &p) const {
    const std::size_t n = num_qubits();
    if (p.num_qubits() != n) {
        throw DimensionError("tableau and Pauli sizes differ");
    }
    // The preimage's x_k bit is its anticommutation with Z_k, which conjugation preserves.
    PauliString pre(n);
    for (std::size_t q = 0; q < n; q++) {
        if (anticommutes(p, z_images_[q])) {
            pre.x().set(q, true);
        }
        if (anticommutes(p, x_images_[q])) {
            pre.z().set(q, true);
        }
    }
    PauliString image = conjugate(pre);
    if (!image.same_letters(p)) {
        throw InternalConsistencyError("tableau inverse failed: tableau is not a valid Clifford");
    }
    pre.set_phase(p.phase() + 4 - image.phase());
    return pre;
}

void CliffordTableau::append_gate(Gate g, std::size_t q0, std::size_t q1) {
    for (auto &img : z_images_) {
        conjugate_by_gate(img, g, q0, q1);
    }
    for (auto &img : x_images_) {
        conjugate_by_gate(img, g, q0, q1);
    }
}

CliffordTableau CliffordTableau::inverse() const {
    const std::size_t n = num_qubits();
    CliffordTableau t;
    t.z_images_.reserve(n);
    t.x_images_.reserve(n);
    for (std::size_t q = 0; q < n; q++) {
        t.z_images_.push_back(conjugate_inverse(PauliString::single(n, q, 'Z')));
        t.x_images_.push_back(conjugate_inverse(PauliString::single(n, q, 'X')));
    }
    return t;
}

bool CliffordTableau::is_valid() const {
    const std::size_t n = num_qubits();
    for (std::size_t a = 0; a < n; a++) {
        if (!z_images_[a].is_hermitian() || !x_images_[a].is_hermitian()) {
            return false;
        }
        for (std::size_t b = 0; b < n; b++) {
            if (anticommutes(z_images_[a], x_images_[b]) != (a == b)) {
                return false;
            }
            if (b > a && (anticommutes(z_images_[a], z_images_[b]) || anticommutes(x_images_[a], x_images_[b]))) {
                return false;
            }
        }
    }
    return true;
}

CliffordTableau compose(const CliffordTableau &outer, const CliffordTableau &inner) {
    if (outer.num_qubits() != inner.num_qubits()) {
        throw DimensionError("cannot compose tableaux of different sizes");
    }
    CliffordTableau t;
    t.z_images_.reserve(inner.num_qubits());
    t.x_images_.reserve(inner.num_qubits());
    for (std::size_t q = 0; q < inner.num_qubits(); q++) {
        t.z_images_.push_back(outer.conjugate(inner.z_image(q)));
        t.x_images_.push_back(outer.conjugate(inner.x_image(q)));
    }
    return t;
}

}  // namespace pfsr
