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

#include <gtest/gtest.h>

#include <random>

#include "pfsr/clifford_tableau.hpp"
#include "pfsr/errors.hpp"
#include "pfsr/pauli_string.hpp"
#include "pfsr/stabilizer_frame.hpp"
#include "test_util.hpp"

using namespace pfsr;
using namespace pfsr::testutil;

TEST(PauliString, parse_round_trip) {
    for (const char *text : {"+I", "-iXZY", "+iYYI", "-ZZ", "+XIZ"}) {
        EXPECT_EQ(PauliString::parse(text).to_string(), text);
    }
    EXPECT_EQ(PauliString::parse("XZ"), PauliString::parse("+XZ"));
    EXPECT_THROW(PauliString::parse("XQ"), std::invalid_argument);
}

TEST(PauliString, x_times_z) {
    PauliString p = PauliString::parse("X") * PauliString::parse("Z");
    EXPECT_EQ(p.phase(), 3);
    EXPECT_TRUE(p.z()[0]);
    EXPECT_TRUE(p.x()[0]);
    EXPECT_EQ(p, PauliString::parse("-iY"));
}

TEST(PauliString, identity_is_neutral) {
    std::mt19937_64 rng(1);
    for (int k = 0; k < 50; k++) {
        auto p = random_pauli(5, rng);
        EXPECT_EQ(PauliString(5) * p, p);
        EXPECT_EQ(p * PauliString(5), p);
    }
}

TEST(PauliString, size_mismatch) {
    EXPECT_THROW(PauliString(2) * PauliString(3), DimensionError);
    EXPECT_THROW(anticommutes(PauliString(2), PauliString(3)), DimensionError);
}

TEST(PauliString, product_matches_dense_matrices) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 300; trial++) {
        std::size_t n = 1 + rng() % 4;
        auto a = random_pauli(n, rng);
        auto b = random_pauli(n, rng);
        auto v = random_vector(n, rng);
        auto lhs = dense_apply(a * b, v);
        auto rhs = dense_apply(a, dense_apply(b, v));
        EXPECT_LT(max_diff(lhs, rhs), 1e-12) << a.to_string() << " * " << b.to_string();
        auto left = b;
        left.left_multiply(a);
        EXPECT_EQ(left, a * b);
    }
}

TEST(PauliString, associativity) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; trial++) {
        std::size_t n = 1 + rng() % 70;
        auto a = random_pauli(n, rng);
        auto b = random_pauli(n, rng);
        auto c = random_pauli(n, rng);
        EXPECT_EQ((a * b) * c, a * (b * c));
    }
}

TEST(PauliString, commutation_examples) {
    EXPECT_TRUE(anticommutes(PauliString::parse("X"), PauliString::parse("Z")));
    EXPECT_FALSE(anticommutes(PauliString::parse("XX"), PauliString::parse("ZZ")));
}

TEST(PauliString, commutation_matches_dense_matrices) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 300; trial++) {
        std::size_t n = 1 + rng() % 4;
        auto a = random_pauli(n, rng);
        auto b = random_pauli(n, rng);
        auto v = random_vector(n, rng);
        auto ab = dense_apply(a, dense_apply(b, v));
        auto ba = dense_apply(b, dense_apply(a, v));
        bool commute = max_diff(ab, ba) < 1e-12;
        for (auto &x : ba) {
            x = -x;
        }
        bool anti = max_diff(ab, ba) < 1e-12;
        ASSERT_NE(commute, anti);
        EXPECT_EQ(anticommutes(a, b), anti);
        // Symplectic form written out directly.
        bool form = false;
        for (std::size_t q = 0; q < n; q++) {
            form ^= (a.x()[q] && b.z()[q]) ^ (a.z()[q] && b.x()[q]);
        }
        EXPECT_EQ(anticommutes(a, b), form);
    }
}

TEST(CliffordTableau, worked_examples) {
    auto h = CliffordTableau::from_gate(2, Gate::H, 0);
    EXPECT_EQ(h.conjugate(PauliString::parse("ZI")), PauliString::parse("XI"));
    auto cx = CliffordTableau::from_gate(2, Gate::CNOT, 0, 1);
    EXPECT_EQ(cx.conjugate(PauliString::parse("XI")), PauliString::parse("XX"));
    EXPECT_EQ(cx.conjugate(PauliString::parse("IZ")), PauliString::parse("ZZ"));
    auto u = compose(CliffordTableau::from_gate(2, Gate::CNOT, 0, 1), CliffordTableau::from_gate(2, Gate::CNOT, 1, 0));
    EXPECT_EQ(u.conjugate(PauliString::parse("ZZ")), PauliString::parse("ZI"));
}

TEST(CliffordTableau, identity_and_inverse) {
    std::mt19937_64 rng(5);
    auto id = CliffordTableau::identity(4);
    for (int k = 0; k < 20; k++) {
        auto p = random_pauli(4, rng);
        EXPECT_EQ(id.conjugate(p), p);
    }
    auto h = CliffordTableau::from_gate(3, Gate::H, 1);
    EXPECT_EQ(compose(h, h), CliffordTableau::identity(3));
    auto t = tableau_of(4, random_clifford_circuit(4, 40, rng));
    EXPECT_EQ(compose(CliffordTableau::identity(4), t), t);
    EXPECT_EQ(compose(t, t.inverse()), CliffordTableau::identity(4));
    EXPECT_TRUE(t.is_valid());
    EXPECT_THROW(compose(t, CliffordTableau::identity(3)), DimensionError);
    EXPECT_THROW(t.conjugate(PauliString(3)), DimensionError);
}

TEST(CliffordTableau, from_images_rejects_bad_commutation) {
    std::vector<PauliString> z{PauliString::parse("Z")};
    std::vector<PauliString> x{PauliString::parse("Z")};
    EXPECT_THROW(CliffordTableau::from_images(z, x), PreconditionError);
}

// Conjugation by the tableau must agree with U P U^dagger computed on dense vectors.
TEST(CliffordTableau, conjugation_matches_dense_circuits) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 200; trial++) {
        std::size_t n = 1 + rng() % 4;
        auto ops = random_clifford_circuit(n, 1 + rng() % 20, rng);
        auto t = tableau_of(n, ops);
        auto p = random_pauli(n, rng);
        auto v = random_vector(n, rng);
        // U P v
        auto s1 = oracle::DenseState::from_amplitudes(n, v);
        s1.apply_pauli(p);
        for (const auto &op : ops) {
            apply_dense_gate(s1, op);
        }
        // (U P U^dagger) U v
        auto s2 = oracle::DenseState::from_amplitudes(n, v);
        for (const auto &op : ops) {
            apply_dense_gate(s2, op);
        }
        s2.apply_pauli(t.conjugate(p));
        EXPECT_LT(max_diff(s1.amplitudes(), s2.amplitudes()), 1e-10);
        EXPECT_EQ(t.conjugate_inverse(t.conjugate(p)), p);
        EXPECT_EQ(t.conjugate(t.conjugate_inverse(p)), p);
    }
}

TEST(CliffordTableau, compose_conjugates_as_outer_after_inner) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; trial++) {
        auto a = tableau_of(5, random_clifford_circuit(5, 30, rng));
        auto b = tableau_of(5, random_clifford_circuit(5, 30, rng));
        auto p = random_pauli(5, rng);
        EXPECT_EQ(compose(a, b).conjugate(p), a.conjugate(b.conjugate(p)));
    }
}

TEST(StabilizerDecomposition, examples) {
    std::vector<PauliString> frame{PauliString::parse("XX"), PauliString::parse("ZZ")};
    auto d0 = stabilizer_decomposition(frame, frame[0]);
    EXPECT_EQ(d0.subset.to_string(), "10");
    EXPECT_EQ(d0.phase, 0u);
    auto d1 = stabilizer_decomposition(frame, PauliString(2));
    EXPECT_EQ(d1.subset.to_string(), "00");
    EXPECT_EQ(d1.phase, 0u);
    auto d2 = stabilizer_decomposition(frame, PauliString::parse("-YY"));
    EXPECT_EQ(d2.subset.to_string(), "11");
    EXPECT_EQ(d2.phase, 0u);
    EXPECT_EQ(frame[0] * frame[1], PauliString::parse("-YY"));
}

TEST(StabilizerDecomposition, errors) {
    std::vector<PauliString> frame{PauliString::parse("XX"), PauliString::parse("ZZ")};
    EXPECT_THROW(stabilizer_decomposition(frame, PauliString::parse("ZI")), NotInGroupError);
    std::vector<PauliString> dependent{PauliString::parse("ZI"), PauliString::parse("ZI")};
    EXPECT_THROW(stabilizer_decomposition(dependent, PauliString::parse("IZ")), IndependenceError);
    EXPECT_FALSE(is_valid_frame(dependent));
    EXPECT_TRUE(is_valid_frame(frame));
}

TEST(StabilizerDecomposition, round_trip) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 200; trial++) {
        std::size_t n = 1 + rng() % 12;
        auto t = tableau_of(n, random_clifford_circuit(n, 5 * n, rng));
        std::vector<PauliString> frame;
        for (std::size_t q = 0; q < n; q++) {
            frame.push_back(t.z_image(q));
        }
        PauliString p(n);
        for (std::size_t i = 0; i < n; i++) {
            if (rng() % 2) {
                p *= frame[i];
            }
        }
        p.add_phase(rng() % 4);
        auto dec = stabilizer_decomposition(frame, p);
        PauliString rebuilt(n);
        for (std::size_t i = 0; i < n; i++) {
            if (dec.subset[i]) {
                rebuilt *= frame[i];
            }
        }
        rebuilt.add_phase(dec.phase);
        EXPECT_EQ(rebuilt, p);
    }
}

TEST(FrameReduction, examples) {
    auto id = frame_reduction_clifford({}, PauliString::parse("X"), PauliString::parse("Z"));
    EXPECT_EQ(id, CliffordTableau::identity(1));
    auto h = frame_reduction_clifford({}, PauliString::parse("Z"), PauliString::parse("X"));
    EXPECT_EQ(h, CliffordTableau::from_gate(1, Gate::H, 0));

    std::vector<PauliString> stabs{PauliString::parse("ZZ")};
    auto u = frame_reduction_clifford(stabs, PauliString::parse("XX"), PauliString::parse("ZI"));
    EXPECT_EQ(u.conjugate(PauliString::parse("ZZ")), PauliString::parse("ZI"));
    EXPECT_EQ(u.conjugate(PauliString::parse("XX")), PauliString::parse("IX"));
    EXPECT_EQ(u.conjugate(PauliString::parse("ZI")), PauliString::parse("IZ"));
}

TEST(FrameReduction, rejects_bad_inputs) {
    std::vector<PauliString> stabs{PauliString::parse("ZZ")};
    // a and b commute
    EXPECT_THROW(frame_reduction_clifford(stabs, PauliString::parse("XX"), PauliString::parse("YY")), PreconditionError);
    // stabilizer anticommutes with a
    EXPECT_THROW(frame_reduction_clifford(stabs, PauliString::parse("XI"), PauliString::parse("ZI")), PreconditionError);
    // dependent stabilizers
    EXPECT_THROW(
        frame_reduction_clifford(
            std::vector<PauliString>{PauliString::parse("ZIZ"), PauliString::parse("ZIZ")}, PauliString::parse("XXX"),
            PauliString::parse("IZI")),
        PreconditionError);
    EXPECT_THROW(frame_reduction_clifford({}, PauliString::parse("XX"), PauliString::parse("ZI")), DimensionError);
}

// Random valid instances: images of Z_i / X_{n-1} under a random Clifford, with random stabilizer products and signs.
TEST(FrameReduction, random_instances_hit_every_target_with_plus_phase) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 300; trial++) {
        std::size_t n = 2 + rng() % 7;
        auto t = tableau_of(n, random_clifford_circuit(n, 6 * n, rng));
        std::vector<PauliString> stabs;
        for (std::size_t q = 0; q + 1 < n; q++) {
            stabs.push_back(t.z_image(q));
        }
        for (std::size_t q = 0; q + 1 < n; q++) {
            for (std::size_t j = 0; j + 1 < n; j++) {
                if (j != q && rng() % 4 == 0) {
                    stabs[q] *= stabs[j];
                }
            }
        }
        PauliString a = t.x_image(n - 1);
        PauliString b = t.z_image(n - 1);
        for (const auto &s : stabs) {
            if (rng() % 2) {
                a *= s;
            }
            if (rng() % 2) {
                b *= s;
            }
        }
        auto u = frame_reduction_clifford(stabs, a, b);
        for (std::size_t q = 0; q + 1 < n; q++) {
            EXPECT_EQ(u.conjugate(stabs[q]), PauliString::single(n, q, 'Z'));
        }
        EXPECT_EQ(u.conjugate(b), PauliString::single(n, n - 1, 'Z'));
        EXPECT_EQ(u.conjugate(a), PauliString::single(n, n - 1, 'X'));
        EXPECT_TRUE(u.is_valid());
    }
}
