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

#include "pfsr/oracle/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pfsr/noise.hpp"
#include "pfsr/oracle/dense_state.hpp"
#include "pfsr/pfsr_state.hpp"
#include "pfsr/rng.hpp"

namespace pfsr::oracle {

namespace {

PauliString random_hermitian_pauli(std::size_t n, Rng &rng) {
    PauliString p(n);
    bool any = false;
    for (std::size_t q = 0; q < n; q++) {
        const char c = "IXYZ"[std::uniform_int_distribution<int>(0, 3)(rng)];
        p.set_letter(q, c);
        any |= c != 'I';
    }
    if (!any) {
        p.set_letter(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng), 'Z');
    }
    p.set_phase(bernoulli(rng, 0.5) ? 2 : 0);
    return p;
}

std::vector<PauliTerm> rz_terms(std::size_t n, std::size_t q, double theta) {
    return {{std::cos(theta / 2), PauliString(n)}, {Complex(0, -std::sin(theta / 2)), PauliString::single(n, q, 'Z')}};
}

Mat2 damping_kraus(double gamma, int which) {
    if (which == 0) {
        return {1, 0, 0, std::sqrt(1 - gamma)};
    }
    return {0, std::sqrt(gamma), 0, 0};
}

}  // namespace

EquivalenceReport run_equivalence_suite(const EquivalenceOptions &options) {
    EquivalenceReport report;
    for (std::size_t c = 0; c < options.circuits; c++) {
        Rng rng = make_rng(options.seed, {c});
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, options.max_qubits)(rng);
        const std::size_t depth = std::uniform_int_distribution<std::size_t>(1, options.max_depth)(rng);
        auto sparse = PfsrState::init_zero(n);
        DenseState dense(n);
        std::ostringstream trace;
        bool failed = false;
        for (std::size_t step = 0; step < depth && !failed; step++) {
            const std::size_t q = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
            const int kind = std::uniform_int_distribution<int>(0, 9)(rng);
            if (kind == 0) {
                sparse.apply_gate(Gate::H, q);
                dense.h(q);
                trace << " H" << q;
            } else if (kind == 1) {
                sparse.apply_gate(Gate::S, q);
                dense.s(q);
                trace << " S" << q;
            } else if (kind == 2 && n >= 2) {
                std::size_t t = std::uniform_int_distribution<std::size_t>(0, n - 2)(rng);
                t += t >= q;
                sparse.apply_gate(Gate::CNOT, q, t);
                dense.cnot(q, t);
                trace << " CNOT" << q << ">" << t;
            } else if (kind <= 3) {
                const auto terms = rz_terms(n, q, std::numbers::pi / 4);
                sparse.apply_pauli_sum(terms);
                dense.t(q);
                trace << " T" << q;
            } else if (kind == 4) {
                const double theta = std::uniform_real_distribution<double>(-std::numbers::pi, std::numbers::pi)(rng);
                const auto terms = rz_terms(n, q, theta);
                sparse.apply_pauli_sum(terms);
                dense.rz(q, theta);
                trace << " RZ" << q << "(" << theta << ")";
            } else if (kind <= 6) {
                const auto p = random_hermitian_pauli(n, rng);
                const double e = dense.expectation(p).real();
                int outcome = bernoulli(rng, 0.5) ? 1 : -1;
                if ((1 + outcome * e) / 2 < 1e-6) {
                    outcome = -outcome;
                }
                sparse.measure_forced(p, outcome);
                dense.project(p, outcome);
                dense.normalize();
                report.measurements++;
                trace << " M" << (outcome > 0 ? "+" : "-") << p.to_string();
            } else if (kind == 7) {
                const double gamma = std::uniform_real_distribution<double>(0, 1)(rng);
                const int which = apply_amplitude_damping(sparse, q, gamma, rng);
                dense.apply_1q(damping_kraus(gamma, which), q);
                dense.normalize();
                report.channels++;
                trace << " AD" << q << "[" << which << "]";
            } else if (kind == 8) {
                const double p = std::uniform_real_distribution<double>(0, 1)(rng);
                const char letter = apply_depolarizing(sparse, q, p, rng);
                dense.apply_1q(mat_letter(letter), q);
                report.channels++;
                trace << " DEP" << q << "[" << letter << "]";
            } else {
                const double theta = std::uniform_real_distribution<double>(-1, 1)(rng);
                apply_coherent_z(sparse, q, theta);
                dense.rz(q, theta);
                report.channels++;
                trace << " CZROT" << q;
            }
            report.operations++;
            report.max_entries = std::max(report.max_entries, sparse.num_entries());
            const double f = fidelity(sparse.to_dense(options.max_qubits), dense.amplitudes());
            report.min_fidelity = std::min(report.min_fidelity, f);
            if (!(f >= 1 - options.tolerance)) {
                failed = true;
                if (report.messages.size() < 5) {
                    std::ostringstream msg;
                    msg << "circuit " << c << " (n=" << n << ") step " << step << " fidelity " << f << ":" << trace.str() << "\n"
                        << sparse.dump();
                    report.messages.push_back(msg.str());
                }
            }
        }
        report.failures += failed;
        report.circuits++;
    }
    return report;
}

}  // namespace pfsr::oracle
