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
#include <complex>
#include <cstddef>
#include <vector>

#include "pfsr/pauli_string.hpp"

namespace pfsr::oracle {

using Complex = std::complex<double>;
/// Row-major 2x2 matrix.
using Mat2 = std::array<Complex, 4>;

Mat2 mat_identity();
Mat2 mat_x();
Mat2 mat_y();
Mat2 mat_z();
Mat2 mat_h();
Mat2 mat_s();
Mat2 mat_t();
Mat2 mat_rz(double theta);
Mat2 mat_mul(const Mat2 &a, const Mat2 &b);
Mat2 mat_adjoint(const Mat2 &a);
/// Matrix of a single Pauli letter.
Mat2 mat_letter(char letter);

/// Plain state vector. Qubit 0 is the most significant bit of the basis index.
class DenseState {
   public:
    explicit DenseState(std::size_t num_qubits);
    static DenseState from_amplitudes(std::size_t num_qubits, std::vector<Complex> amps);

    std::size_t num_qubits() const { return n_; }
    const std::vector<Complex> &amplitudes() const { return amps_; }

    void apply_1q(const Mat2 &m, std::size_t q);
    void h(std::size_t q) { apply_1q(mat_h(), q); }
    void s(std::size_t q) { apply_1q(mat_s(), q); }
    void s_dag(std::size_t q) { apply_1q(mat_adjoint(mat_s()), q); }
    void t(std::size_t q) { apply_1q(mat_t(), q); }
    void rz(std::size_t q, double theta) { apply_1q(mat_rz(theta), q); }
    void x(std::size_t q) { apply_1q(mat_x(), q); }
    void y(std::size_t q) { apply_1q(mat_y(), q); }
    void z(std::size_t q) { apply_1q(mat_z(), q); }
    void cnot(std::size_t control, std::size_t target);
    void cz(std::size_t a, std::size_t b);

    /// Multiplies by the Pauli operator letter by letter, including its phase.
    void apply_pauli(const PauliString &p);
    /// Returns `<psi|p|psi>` (complex in general).
    Complex expectation(const PauliString &p) const;
    /// Applies (1 + outcome * p) / 2 and returns the squared norm of the result, without renormalizing.
    double project(const PauliString &p, int outcome);

    double norm_squared() const;
    void normalize();

   private:
    std::size_t bit(std::size_t q) const { return std::size_t{1} << (n_ - 1 - q); }

    std::size_t n_;
    std::vector<Complex> amps_;
};

Complex inner(const std::vector<Complex> &a, const std::vector<Complex> &b);
/// |<a|b>|^2 / (|a|^2 |b|^2).
double fidelity(const std::vector<Complex> &a, const std::vector<Complex> &b);

/// Pauli transfer matrix R[i][j] = Tr(P_i E(P_j)) / 2 of a single-qubit channel given by Kraus operators,
/// with the Pauli order I, X, Y, Z.
std::array<std::array<double, 4>, 4> pauli_transfer_matrix(const std::vector<Mat2> &kraus);

/// Applies the channel to a 2x2 density matrix.
Mat2 apply_channel(const std::vector<Mat2> &kraus, const Mat2 &rho);

}  // namespace pfsr::oracle
