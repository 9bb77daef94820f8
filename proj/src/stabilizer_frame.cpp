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

#include "pfsr/stabilizer_frame.hpp"

#include <string>

#include "pfsr/errors.hpp"

namespace pfsr {

namespace {

bool column_bit(const Bits &z, const Bits &x, std::size_t n, std::size_t col) { return col < n ? z[col] : x[col - n]; }

std::size_t first_set_column(const Bits &z, const Bits &x, std::size_t n) {
    for (std::size_t k = 0; k < z.num_words(); k++) {
        if (auto w = z.words()[k]) {
            return k * Bits::kWordBits + std::countr_zero(w);
        }
    }
    for (std::size_t k = 0; k < x.num_words(); k++) {
        if (auto w = x.words()[k]) {
            return n + k * Bits::kWordBits + std::countr_zero(w);
        }
    }
    return 2 * n;
}

}  // namespace

FrameSolver::FrameSolver(std::span<const PauliString> frame) : frame_(frame.begin(), frame.end()) {
    num_qubits_ = frame.empty() ? 0 : frame[0].num_qubits();
    pivots_.reserve(frame.size());
    for (std::size_t r = 0; r < frame.size(); r++) {
        if (frame[r].num_qubits() != num_qubits_) {
            throw DimensionError("frame generators have different sizes");
        }
        Pivot row{0, frame[r], Bits(frame.size())};
        row.combination.set(r, true);
        for (const auto &p : pivots_) {
            if (column_bit(row.op.z(), row.op.x(), num_qubits_, p.column)) {
                row.op *= p.op;
                row.combination ^= p.combination;
            }
        }
        row.column = first_set_column(row.op.z(), row.op.x(), num_qubits_);
        if (row.column < 2 * num_qubits_) {
            pivots_.push_back(std::move(row));
        }
    }
}

FrameDecomposition FrameSolver::decompose(const PauliString &p) const {
    if (p.num_qubits() != num_qubits_) {
        throw DimensionError("Pauli and frame sizes differ");
    }
    for (std::size_t i = 0; i < frame_.size(); i++) {
        if (anticommutes(frame_[i], p)) {
            throw NotInGroupError(p.to_string() + " anticommutes with frame generator " + std::to_string(i));
        }
    }
    Bits z = p.z();
    Bits x = p.x();
    FrameDecomposition out{Bits(frame_.size()), 0};
    for (const auto &piv : pivots_) {
        if (column_bit(z, x, num_qubits_, piv.column)) {
            z ^= piv.op.z();
            x ^= piv.op.x();
            out.subset ^= piv.combination;
        }
    }
    if (z.any() || x.any()) {
        throw IndependenceError(p.to_string() + " is not generated by the frame");
    }
    PauliString product(num_qubits_);
    for (std::size_t i = 0; i < frame_.size(); i++) {
        if (out.subset[i]) {
            product *= frame_[i];
        }
    }
    out.phase = (p.phase() + 4u - product.phase()) & 3u;
    return out;
}

unsigned FrameSolver::relative_phase(const PauliString &first, const PauliString &second) const {
    if (first.same_letters(second)) {
        return (second.phase() + 4u - first.phase()) & 3u;
    }
    // Pivot operators are products of commuting frame generators, so multiplying them onto the
    // quotient cancels it down to a pure phase.
    PauliString residual = first.adjoint();
    residual *= second;
    for (const auto &piv : pivots_) {
        if (column_bit(residual.z(), residual.x(), num_qubits_, piv.column)) {
            residual *= piv.op;
        }
    }
    if (residual.z().any() || residual.x().any()) {
        throw IndependenceError("histories with equal labels differ by an operator outside the frame group");
    }
    return residual.phase();
}

FrameDecomposition stabilizer_decomposition(std::span<const PauliString> frame, const PauliString &p) {
    return FrameSolver(frame).decompose(p);
}

bool is_valid_frame(std::span<const PauliString> frame) {
    for (std::size_t a = 0; a < frame.size(); a++) {
        for (std::size_t b = a + 1; b < frame.size(); b++) {
            if (anticommutes(frame[a], frame[b])) {
                return false;
            }
        }
    }
    return FrameSolver(frame).rank() == frame.size();
}

namespace {

// Rows being reduced plus the tableau that accumulates every gate applied to them.
struct Reducer {
    std::vector<PauliString> rows;
    CliffordTableau u;

    void apply(Gate g, std::size_t q0, std::size_t q1 = 0) {
        for (auto &r : rows) {
            conjugate_by_gate(r, g, q0, q1);
        }
        u.append_gate(g, q0, q1);
    }
};

}  // namespace

CliffordTableau frame_reduction_clifford(
    std::span<const PauliString> stabilizers, const PauliString &a, const PauliString &b) {
    const std::size_t n = a.num_qubits();
    if (n == 0 || b.num_qubits() != n || stabilizers.size() + 1 != n) {
        throw DimensionError("frame reduction needs n-1 stabilizers and two Paulis on n qubits");
    }
    for (const auto &s : stabilizers) {
        if (s.num_qubits() != n) {
            throw DimensionError("stabilizer size differs from a and b");
        }
    }
    if (!a.is_hermitian() || !b.is_hermitian()) {
        throw PreconditionError("frame reduction inputs must be Hermitian");
    }
    if (!anticommutes(a, b)) {
        throw PreconditionError("a and b must anticommute");
    }
    for (std::size_t i = 0; i < stabilizers.size(); i++) {
        if (!stabilizers[i].is_hermitian()) {
            throw PreconditionError("frame reduction inputs must be Hermitian");
        }
        if (anticommutes(stabilizers[i], a) || anticommutes(stabilizers[i], b)) {
            throw PreconditionError("stabilizer " + std::to_string(i) + " must commute with a and b");
        }
        for (std::size_t j = i + 1; j < stabilizers.size(); j++) {
            if (anticommutes(stabilizers[i], stabilizers[j])) {
                throw PreconditionError("stabilizers must pairwise commute");
            }
        }
    }

    Reducer red{{}, CliffordTableau::identity(n)};
    red.rows.assign(stabilizers.begin(), stabilizers.end());
    red.rows.push_back(b);
    red.rows.push_back(a);

    // Rows 0..n-1 become Z_0..Z_{n-1}.
    for (std::size_t i = 0; i < n; i++) {
        auto &row = red.rows[i];
        if (!row.z()[i]) {
            if (row.x()[i]) {
                red.apply(Gate::H, i);
            } else {
                std::size_t j = i + 1;
                while (j < n && !row.z()[j]) {
                    j++;
                }
                if (j == n) {
                    // No z bit to borrow; turn an x bit into one first.
                    j = i + 1;
                    while (j < n && !row.x()[j]) {
                        j++;
                    }
                    if (j == n) {
                        throw PreconditionError("frame reduction inputs are not independent");
                    }
                    red.apply(Gate::H, j);
                }
                red.apply(Gate::CNOT, i, j);
            }
        }
        for (std::size_t j = 0; j < n; j++) {
            if (j == i) {
                continue;
            }
            if (row.z()[j]) {
                red.apply(Gate::CNOT, j, i);
            }
            if (row.x()[j]) {
                red.apply(Gate::H, j);
                red.apply(Gate::CNOT, j, i);
            }
        }
        if (row.x()[i]) {
            red.apply(Gate::H, i);
            red.apply(Gate::S, i);
            red.apply(Gate::H, i);
        }
        if (row.phase() == 2) {
            red.apply(Gate::X, i);
        }
    }

    // Last row becomes X_{n-1}.
    const std::size_t last = n - 1;
    auto &row = red.rows[n];
    if (row.z()[last] && row.x()[last]) {
        red.apply(Gate::S, last);
    } else if (row.z()[last]) {
        red.apply(Gate::H, last);
    }
    for (std::size_t j = 0; j < last; j++) {
        if (row.x()[j]) {
            red.apply(Gate::CNOT, last, j);
        }
        if (row.z()[j]) {
            red.apply(Gate::H, j);
            red.apply(Gate::CNOT, last, j);
            red.apply(Gate::H, j);
        }
    }
    if (row.z()[last]) {
        red.apply(Gate::SDag, last);
    }
    if (row.phase() == 2) {
        red.apply(Gate::Z, last);
    }

    for (std::size_t i = 0; i < n; i++) {
        if (red.rows[i] != PauliString::single(n, i, 'Z')) {
            throw PreconditionError("frame reduction inputs are not independent");
        }
    }
    if (red.rows[n] != PauliString::single(n, last, 'X')) {
        throw PreconditionError("frame reduction inputs are not independent");
    }
    return std::move(red.u);
}

}  // namespace pfsr
