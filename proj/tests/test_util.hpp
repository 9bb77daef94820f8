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
#include <random>
#include <vector>

#include "pfsr/clifford_tableau.hpp"
#include "pfsr/oracle/dense_state.hpp"
#include "pfsr/pauli_string.hpp"

namespace pfsr::testutil {

inline PauliString random_pauli(std::size_t n, std::mt19937_64 &rng, bool hermitian = false) {
    PauliString p(n);
    for (std::size_t q = 0; q < n; q++) {
        p.set_letter(q, "IXYZ"[rng() % 4]);
    }
    p.set_phase(hermitian ? 2 * (rng() % 2) : rng() % 4);
    return p;
}

inline oracle::Complex random_complex(std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    return {g(rng), g(rng)};
}

inline std::vector<oracle::Complex> random_vector(std::size_t n, std::mt19937_64 &rng) {
    std::vector<oracle::Complex> v(std::size_t{1} << n);
    for (auto &a : v) {
        a = random_complex(rng);
    }
    return v;
}

/// Dense action of a Pauli on a vector, built letter by letter from 2x2 matrices.
inline std::vector<oracle::Complex> dense_apply(const PauliString &p, const std::vector<oracle::Complex> &v) {
    auto s = oracle::DenseState::from_amplitudes(p.num_qubits(), v);
    s.apply_pauli(p);
    return s.amplitudes();
}

inline std::vector<GateOp> random_clifford_circuit(std::size_t n, std::size_t depth, std::mt19937_64 &rng) {
    static const Gate one[] = {Gate::H, Gate::S, Gate::SDag, Gate::X, Gate::Y, Gate::Z};
    std::vector<GateOp> ops;
    for (std::size_t k = 0; k < depth; k++) {
        if (n >= 2 && rng() % 3 == 0) {
            std::size_t a = rng() % n;
            std::size_t b = rng() % (n - 1);
            if (b >= a) {
                b++;
            }
            ops.push_back({rng() % 2 ? Gate::CNOT : Gate::CZ, a, b});
        } else {
            ops.push_back({one[rng() % 6], rng() % n, 0});
        }
    }
    return ops;
}

inline void apply_dense_gate(oracle::DenseState &s, const GateOp &op) {
    switch (op.gate) {
        case Gate::I:
            break;
        case Gate::X:
            s.x(op.q0);
            break;
        case Gate::Y:
            s.y(op.q0);
            break;
        case Gate::Z:
            s.z(op.q0);
            break;
        case Gate::H:
            s.h(op.q0);
            break;
        case Gate::S:
            s.s(op.q0);
            break;
        case Gate::SDag:
            s.s_dag(op.q0);
            break;
        case Gate::CNOT:
            s.cnot(op.q0, op.q1);
            break;
        case Gate::CZ:
            s.cz(op.q0, op.q1);
            break;
    }
}

inline CliffordTableau tableau_of(std::size_t n, const std::vector<GateOp> &ops) {
    auto t = CliffordTableau::identity(n);
    for (const auto &op : ops) {
        t.append_gate(op.gate, op.q0, op.q1);
    }
    return t;
}

inline double max_diff(const std::vector<oracle::Complex> &a, const std::vector<oracle::Complex> &b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); i++) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

}  // namespace pfsr::testutil
