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

#include "pfsr/oracle/dense_state.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pfsr::oracle {

Mat2 mat_identity() { return {1, 0, 0, 1}; }
Mat2 mat_x() { return {0, 1, 1, 0}; }
Mat2 mat_y() { return {0, Complex(0, -1), Complex(0, 1), 0}; }
Mat2 mat_z() { return {1, 0, 0, -1}; }
Mat2 mat_h() {
    const double r = 1 / std::sqrt(2.0);
    return {r, r, r, -r};
}
Mat2 mat_s() { return {1, 0, 0, Complex(0, 1)}; }
Mat2 mat_t() { return {1, 0, 0, std::polar(1.0, std::numbers::pi / 4)}; }
Mat2 mat_rz(double theta) { return {std::polar(1.0, -theta / 2), 0, 0, std::polar(1.0, theta / 2)}; }

Mat2 mat_mul(const Mat2 &a, const Mat2 &b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Mat2 mat_adjoint(const Mat2 &a) { return {std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])}; }

Mat2 mat_letter(char letter) {
    switch (letter) {
        case 'I':
            return mat_identity();
        case 'X':
            return mat_x();
        case 'Y':
            return mat_y();
        case 'Z':
            return mat_z();
    }
    throw std::invalid_argument("not a Pauli letter");
}

DenseState::DenseState(std::size_t num_qubits) : n_(num_qubits), amps_(std::size_t{1} << num_qubits) { amps_[0] = 1; }

DenseState DenseState::from_amplitudes(std::size_t num_qubits, std::vector<Complex> amps) {
    if (amps.size() != (std::size_t{1} << num_qubits)) {
        throw std::invalid_argument("amplitude vector has the wrong length");
    }
    DenseState s(num_qubits);
    s.amps_ = std::move(amps);
    return s;
}

void DenseState::apply_1q(const Mat2 &m, std::size_t q) {
    const std::size_t b = bit(q);
    for (std::size_t i = 0; i < amps_.size(); i++) {
        if (i & b) {
            continue;
        }
        const Complex a0 = amps_[i];
        const Complex a1 = amps_[i | b];
        amps_[i] = m[0] * a0 + m[1] * a1;
        amps_[i | b] = m[2] * a0 + m[3] * a1;
    }
}

void DenseState::cnot(std::size_t control, std::size_t target) {
    const std::size_t c = bit(control);
    const std::size_t t = bit(target);
    for (std::size_t i = 0; i < amps_.size(); i++) {
        if ((i & c) && !(i & t)) {
            std::swap(amps_[i], amps_[i | t]);
        }
    }
}

void DenseState::cz(std::size_t a, std::size_t b) {
    const std::size_t ma = bit(a);
    const std::size_t mb = bit(b);
    for (std::size_t i = 0; i < amps_.size(); i++) {
        if ((i & ma) && (i & mb)) {
            amps_[i] = -amps_[i];
        }
    }
}

void DenseState::apply_pauli(const PauliString &p) {
    if (p.num_qubits() != n_) {
        throw std::invalid_argument("size mismatch");
    }
    for (std::size_t q = 0; q < n_; q++) {
        const char l = p.letter(q);
        if (l != 'I') {
            apply_1q(mat_letter(l), q);
        }
    }
    static const Complex powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (auto &a : amps_) {
        a *= powers[p.phase()];
    }
}

Complex DenseState::expectation(const PauliString &p) const {
    DenseState image = *this;
    image.apply_pauli(p);
    return inner(amps_, image.amps_);
}

double DenseState::project(const PauliString &p, int outcome) {
    DenseState image = *this;
    image.apply_pauli(p);
    for (std::size_t i = 0; i < amps_.size(); i++) {
        amps_[i] = (amps_[i] + static_cast<double>(outcome) * image.amps_[i]) * 0.5;
    }
    return norm_squared();
}

double DenseState::norm_squared() const {
    double t = 0;
    for (auto a : amps_) {
        t += std::norm(a);
    }
    return t;
}

void DenseState::normalize() {
    const double n = std::sqrt(norm_squared());
    for (auto &a : amps_) {
        a /= n;
    }
}

Complex inner(const std::vector<Complex> &a, const std::vector<Complex> &b) {
    Complex t = 0;
    for (std::size_t i = 0; i < a.size(); i++) {
        t += std::conj(a[i]) * b[i];
    }
    return t;
}

double fidelity(const std::vector<Complex> &a, const std::vector<Complex> &b) {
    if (a.size() != b.size()) {
        return 0;
    }
    return std::norm(inner(a, b)) / (std::real(inner(a, a)) * std::real(inner(b, b)));
}

Mat2 apply_channel(const std::vector<Mat2> &kraus, const Mat2 &rho) {
    Mat2 out{0, 0, 0, 0};
    for (const auto &k : kraus) {
        Mat2 term = mat_mul(mat_mul(k, rho), mat_adjoint(k));
        for (int i = 0; i < 4; i++) {
            out[i] += term[i];
        }
    }
    return out;
}

std::array<std::array<double, 4>, 4> pauli_transfer_matrix(const std::vector<Mat2> &kraus) {
    static const char letters[4] = {'I', 'X', 'Y', 'Z'};
    std::array<std::array<double, 4>, 4> r{};
    for (int j = 0; j < 4; j++) {
        Mat2 image = apply_channel(kraus, mat_letter(letters[j]));
        for (int i = 0; i < 4; i++) {
            Mat2 prod = mat_mul(mat_letter(letters[i]), image);
            r[i][j] = 0.5 * (prod[0] + prod[3]).real();
        }
    }
    return r;
}

}  // namespace pfsr::oracle
