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
#include <string_view>

#include "pfsr/bits.hpp"

namespace pfsr {

/// Element of the n-qubit Pauli group, stored in symplectic form.
///
/// The operator is `i^phase * L_0 (x) L_1 (x) ... (x) L_{n-1}` where each letter `L_k` is one of the
/// Hermitian Paulis I, X, Y, Z selected by the bit pair `(z_k, x_k)`: (0,0)=I, (0,1)=X, (1,1)=Y,
/// (1,0)=Z. Qubit 0 is the leftmost character of the textual form.
class PauliString {
   public:
    PauliString() = default;
    explicit PauliString(std::size_t num_qubits) : z_(num_qubits), x_(num_qubits) {}

    static PauliString identity(std::size_t num_qubits) { return PauliString(num_qubits); }
    /// Single-letter operator `letter` on qubit `q`, identity elsewhere.
    static PauliString single(std::size_t num_qubits, std::size_t q, char letter);
    /// Product of `letter` on every qubit listed in `support`.
    static PauliString on_support(std::size_t num_qubits, std::span<const std::size_t> support, char letter);

    /// Parses `[+|-|+i|-i]{I,X,Y,Z}*`, e.g. "-iXZY".
    static PauliString parse(std::string_view text);
    std::string to_string() const;

    std::size_t num_qubits() const { return z_.size(); }
    const Bits &z() const { return z_; }
    const Bits &x() const { return x_; }
    Bits &z() { return z_; }
    Bits &x() { return x_; }
    std::uint8_t phase() const { return phase_; }
    void set_phase(unsigned power) { phase_ = static_cast<std::uint8_t>(power & 3u); }
    void add_phase(unsigned power) { phase_ = static_cast<std::uint8_t>((phase_ + power) & 3u); }

    char letter(std::size_t q) const;
    void set_letter(std::size_t q, char letter);
    std::size_t weight() const;
    bool is_identity() const { return phase_ == 0 && !z_.any() && !x_.any(); }
    /// True when only the phase differs from identity.
    bool is_scalar() const { return !z_.any() && !x_.any(); }
    bool is_hermitian() const { return (phase_ & 1) == 0; }
    bool same_letters(const PauliString &other) const { return z_ == other.z_ && x_ == other.x_; }

    PauliString adjoint() const {
        PauliString result = *this;
        result.phase_ = static_cast<std::uint8_t>((4 - phase_) & 3u);
        return result;
    }

    /// `*this = *this * rhs`.
    PauliString &operator*=(const PauliString &rhs);
    /// `*this = lhs * *this`.
    PauliString &left_multiply(const PauliString &lhs);

    friend PauliString operator*(PauliString a, const PauliString &b) {
        a *= b;
        return a;
    }
    friend bool operator==(const PauliString &a, const PauliString &b) {
        return a.phase_ == b.phase_ && a.z_ == b.z_ && a.x_ == b.x_;
    }

    // In-place conjugation P -> G P G^dagger by elementary Clifford gates.
    void conjugate_h(std::size_t q);
    void conjugate_s(std::size_t q);
    void conjugate_s_dag(std::size_t q);
    void conjugate_cnot(std::size_t control, std::size_t target);
    void conjugate_cz(std::size_t a, std::size_t b);
    /// Conjugation by a Pauli operator only ever flips the sign.
    void conjugate_pauli(const PauliString &sigma);

    std::size_t hash() const { return z_.hash() * 31 + x_.hash() * 7 + phase_; }

   private:
    Bits z_;
    Bits x_;
    std::uint8_t phase_ = 0;
};

/// Power of i picked up when multiplying the letter parts, `letters(a) * letters(b) = i^k letters(a*b)`.
int product_phase(const PauliString &a, const PauliString &b);

/// 1 if the operators anticommute, 0 if they commute (symplectic form).
bool anticommutes(const PauliString &a, const PauliString &b);

/// `c_i = anticommutes(frame[i], sigma)`.
Bits commutation_vector(std::span<const PauliString> frame, const PauliString &sigma);

void check_same_size(const PauliString &a, const PauliString &b);

}  // namespace pfsr
