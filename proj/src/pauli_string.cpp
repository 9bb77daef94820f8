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

#include "pfsr/pauli_string.hpp"

#include <bit>

#include "pfsr/errors.hpp"

namespace pfsr {

Bits Bits::from_string(std::string_view text) {
    Bits result(text.size());
    for (std::size_t i = 0; i < text.size(); i++) {
        if (text[i] == '1') {
            result.set(i, true);
        } else if (text[i] != '0') {
            throw std::invalid_argument("bit string may only contain '0' and '1'");
        }
    }
    return result;
}

std::string Bits::to_string() const {
    std::string out(num_bits_, '0');
    for (std::size_t i = 0; i < num_bits_; i++) {
        if ((*this)[i]) {
            out[i] = '1';
        }
    }
    return out;
}

void check_same_size(const PauliString &a, const PauliString &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw DimensionError(
            "Pauli size mismatch: " + std::to_string(a.num_qubits()) + " vs " + std::to_string(b.num_qubits()));
    }
}

PauliString PauliString::single(std::size_t num_qubits, std::size_t q, char letter) {
    if (q >= num_qubits) {
        throw DimensionError("qubit index out of range");
    }
    PauliString result(num_qubits);
    result.set_letter(q, letter);
    return result;
}

PauliString PauliString::on_support(std::size_t num_qubits, std::span<const std::size_t> support, char letter) {
    PauliString result(num_qubits);
    for (auto q : support) {
        if (q >= num_qubits) {
            throw DimensionError("qubit index out of range");
        }
        result.set_letter(q, letter);
    }
    return result;
}

PauliString PauliString::parse(std::string_view text) {
    unsigned phase = 0;
    if (text.starts_with("+i")) {
        phase = 1;
        text.remove_prefix(2);
    } else if (text.starts_with("-i")) {
        phase = 3;
        text.remove_prefix(2);
    } else if (text.starts_with("+")) {
        text.remove_prefix(1);
    } else if (text.starts_with("-")) {
        phase = 2;
        text.remove_prefix(1);
    }
    PauliString result(text.size());
    for (std::size_t q = 0; q < text.size(); q++) {
        result.set_letter(q, text[q]);
    }
    result.phase_ = static_cast<std::uint8_t>(phase);
    return result;
}

std::string PauliString::to_string() const {
    static constexpr const char *kPrefix[] = {"+", "+i", "-", "-i"};
    std::string out = kPrefix[phase_];
    out.reserve(out.size() + num_qubits());
    for (std::size_t q = 0; q < num_qubits(); q++) {
        out.push_back(letter(q));
    }
    return out;
}

char PauliString::letter(std::size_t q) const {
    static constexpr char kLetters[] = {'I', 'X', 'Z', 'Y'};
    return kLetters[(x_[q] ? 1 : 0) | (z_[q] ? 2 : 0)];
}

void PauliString::set_letter(std::size_t q, char letter) {
    switch (letter) {
        case 'I':
        case '_':
            z_.set(q, false);
            x_.set(q, false);
            break;
        case 'X':
            z_.set(q, false);
            x_.set(q, true);
            break;
        case 'Y':
            z_.set(q, true);
            x_.set(q, true);
            break;
        case 'Z':
            z_.set(q, true);
            x_.set(q, false);
            break;
        default:
            throw std::invalid_argument(std::string("not a Pauli letter: ") + letter);
    }
}

std::size_t PauliString::weight() const {
    std::size_t total = 0;
    auto zw = z_.words();
    auto xw = x_.words();
    for (std::size_t k = 0; k < zw.size(); k++) {
        total += std::popcount(zw[k] | xw[k]);
    }
    return total;
}

int product_phase(const PauliString &a, const PauliString &b) {
    auto z1 = a.z().words();
    auto x1 = a.x().words();
    auto z2 = b.z().words();
    auto x2 = b.x().words();
    int total = 0;
    for (std::size_t k = 0; k < z1.size(); k++) {
        Bits::Word X1 = x1[k] & ~z1[k], Y1 = x1[k] & z1[k], Z1 = z1[k] & ~x1[k];
        Bits::Word X2 = x2[k] & ~z2[k], Y2 = x2[k] & z2[k], Z2 = z2[k] & ~x2[k];
        // XY = iZ, YZ = iX, ZX = iY and the reversed orders give -i.
        Bits::Word plus = (X1 & Y2) | (Y1 & Z2) | (Z1 & X2);
        Bits::Word minus = (Y1 & X2) | (Z1 & Y2) | (X1 & Z2);
        total += std::popcount(plus) - std::popcount(minus);
    }
    return total;
}

PauliString &PauliString::operator*=(const PauliString &rhs) {
    check_same_size(*this, rhs);
    int g = product_phase(*this, rhs);
    phase_ = static_cast<std::uint8_t>((phase_ + rhs.phase_ + g) & 3);
    z_ ^= rhs.z_;
    x_ ^= rhs.x_;
    return *this;
}

PauliString &PauliString::left_multiply(const PauliString &lhs) {
    check_same_size(*this, lhs);
    int g = product_phase(lhs, *this);
    phase_ = static_cast<std::uint8_t>((phase_ + lhs.phase_ + g) & 3);
    z_ ^= lhs.z_;
    x_ ^= lhs.x_;
    return *this;
}

bool anticommutes(const PauliString &a, const PauliString &b) {
    check_same_size(a, b);
    auto z1 = a.z().words();
    auto x1 = a.x().words();
    auto z2 = b.z().words();
    auto x2 = b.x().words();
    Bits::Word acc = 0;
    for (std::size_t k = 0; k < z1.size(); k++) {
        acc ^= (x1[k] & z2[k]) ^ (z1[k] & x2[k]);
    }
    return std::popcount(acc) & 1;
}

Bits commutation_vector(std::span<const PauliString> frame, const PauliString &sigma) {
    Bits c(frame.size());
    for (std::size_t i = 0; i < frame.size(); i++) {
        if (anticommutes(frame[i], sigma)) {
            c.set(i, true);
        }
    }
    return c;
}

void PauliString::conjugate_h(std::size_t q) {
    bool zq = z_[q], xq = x_[q];
    if (zq && xq) {
        add_phase(2);
    }
    z_.set(q, xq);
    x_.set(q, zq);
}

void PauliString::conjugate_s(std::size_t q) {
    // X -> Y, Y -> -X.
    if (x_[q]) {
        if (z_[q]) {
            add_phase(2);
        }
        z_.flip(q);
    }
}

void PauliString::conjugate_s_dag(std::size_t q) {
    // X -> -Y, Y -> X.
    if (x_[q]) {
        if (!z_[q]) {
            add_phase(2);
        }
        z_.flip(q);
    }
}

void PauliString::conjugate_cnot(std::size_t control, std::size_t target) {
    bool xc = x_[control], zc = z_[control], xt = x_[target], zt = z_[target];
    if (xc && zt && (xt == zc)) {
        add_phase(2);
    }
    if (xc) {
        x_.flip(target);
    }
    if (zt) {
        z_.flip(control);
    }
}

void PauliString::conjugate_cz(std::size_t a, std::size_t b) {
    conjugate_h(b);
    conjugate_cnot(a, b);
    conjugate_h(b);
}

void PauliString::conjugate_pauli(const PauliString &sigma) {
    if (anticommutes(*this, sigma)) {
        add_phase(2);
    }
}

}  // namespace pfsr
