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

#include <cmath>
#include <numbers>
#include <random>

#include "pfsr/errors.hpp"
#include "pfsr/noise.hpp"
#include "pfsr/oracle/dense_state.hpp"
#include "test_util.hpp"

using namespace pfsr;
using namespace pfsr::testutil;
using oracle::Mat2;

namespace {

// The six single-qubit Pauli eigenstates, prepared from |0>.
PfsrState eigenstate(int which) {
    auto s = PfsrState::init_zero(1);
    switch (which) {
        case 1:
            s.apply_gate(Gate::X, 0);
            break;
        case 2:
            s.apply_gate(Gate::H, 0);
            break;
        case 3:
            s.apply_gate(Gate::X, 0);
            s.apply_gate(Gate::H, 0);
            break;
        case 4:
            s.apply_gate(Gate::H, 0);
            s.apply_gate(Gate::S, 0);
            break;
        case 5:
            s.apply_gate(Gate::H, 0);
            s.apply_gate(Gate::SDag, 0);
            break;
        default:
            break;
    }
    return s;
}

Mat2 density(const PfsrState &s) {
    auto v = s.to_dense();
    return {v[0] * std::conj(v[0]), v[0] * std::conj(v[1]), v[1] * std::conj(v[0]), v[1] * std::conj(v[1])};
}

double bloch(const Mat2 &rho, char letter) {
    Mat2 m = oracle::mat_mul(oracle::mat_letter(letter), rho);
    return (m[0] + m[3]).real();
}

std::vector<Mat2> ad_kraus(double g) {
    return {{1, 0, 0, std::sqrt(1 - g)}, {0, std::sqrt(g), 0, 0}};
}

std::vector<Mat2> rz_kraus(double theta) { return {oracle::mat_rz(theta)}; }

std::vector<Mat2> depolarizing_kraus(double p) {
    const double a = std::sqrt(1 - p);
    const double b = std::sqrt(p / 3);
    auto scale = [](Mat2 m, double c) {
        for (auto &x : m) {
            x *= c;
        }
        return m;
    };
    return {scale(oracle::mat_identity(), a), scale(oracle::mat_x(), b), scale(oracle::mat_y(), b), scale(oracle::mat_z(), b)};
}

// Averages Bloch components after one stochastic application and compares to the analytic channel at 5 sigma.
template <typename Apply>
void check_channel_average(const std::vector<Mat2> &kraus, Apply apply, int shots, std::uint64_t seed) {
    Rng rng(seed);
    for (int which = 0; which < 6; which++) {
        const PfsrState start = eigenstate(which);
        const Mat2 expected = oracle::apply_channel(kraus, density(start));
        for (char letter : {'X', 'Y', 'Z'}) {
            double sum = 0;
            double sum2 = 0;
            for (int k = 0; k < shots; k++) {
                PfsrState s = start;
                apply(s, rng);
                double v = s.expectation(PauliString::single(1, 0, letter));
                sum += v;
                sum2 += v * v;
            }
            const double mean = sum / shots;
            const double var = std::max(sum2 / shots - mean * mean, 0.0);
            const double sigma = std::sqrt(var / shots);
            EXPECT_NEAR(mean, bloch(expected, letter), 5 * sigma + 1e-12) << "state " << which << " letter " << letter;
        }
    }
}

std::array<std::array<double, 4>, 4> pauli_channel_ptm(const PauliProbabilities &p) {
    const double pi = 1 - p.px - p.py - p.pz;
    std::array<std::array<double, 4>, 4> r{};
    r[0][0] = 1;
    r[1][1] = pi + p.px - p.py - p.pz;
    r[2][2] = pi - p.px + p.py - p.pz;
    r[3][3] = pi - p.px - p.py + p.pz;
    return r;
}

// Pauli twirl of a channel keeps only the diagonal of its transfer matrix; computed here as the explicit
// average (1/4) sum_P P E(P rho P) P over Kraus sets.
std::array<std::array<double, 4>, 4> twirled_ptm(const std::vector<Mat2> &kraus) {
    std::vector<Mat2> twirled;
    for (char letter : {'I', 'X', 'Y', 'Z'}) {
        Mat2 p = oracle::mat_letter(letter);
        for (const auto &k : kraus) {
            Mat2 m = oracle::mat_mul(oracle::mat_mul(p, k), p);
            for (auto &x : m) {
                x *= 0.5;
            }
            twirled.push_back(m);
        }
    }
    return oracle::pauli_transfer_matrix(twirled);
}

}  // namespace

TEST(Noise, depolarizing_zero_is_identity) {
    Rng rng(1);
    auto s = eigenstate(2);
    auto before = s.dump();
    for (int k = 0; k < 1000; k++) {
        EXPECT_EQ(apply_depolarizing(s, 0, 0, rng), 'I');
    }
    EXPECT_EQ(s.dump(), before);
}

TEST(Noise, depolarizing_one_draws_uniform_letters) {
    Rng rng(2);
    auto s = PfsrState::init_zero(1);
    const int shots = 1000000;
    int counts[3] = {0, 0, 0};
    for (int k = 0; k < shots; k++) {
        char c = apply_depolarizing(s, 0, 1, rng);
        ASSERT_NE(c, 'I');
        counts[c == 'X' ? 0 : c == 'Y' ? 1 : 2]++;
    }
    const double sigma = std::sqrt(shots * (1.0 / 3) * (2.0 / 3));
    for (int c : counts) {
        EXPECT_NEAR(c, shots / 3.0, 3 * sigma);
    }
    EXPECT_EQ(s.num_entries(), 1u);
}

TEST(Noise, exact_channels_average_to_density_matrix_channel) {
    const int shots = 20000;
    check_channel_average(depolarizing_kraus(0.3), [](PfsrState &s, Rng &r) { apply_depolarizing(s, 0, 0.3, r); }, shots, 3);
    check_channel_average(ad_kraus(0.37), [](PfsrState &s, Rng &r) { apply_amplitude_damping(s, 0, 0.37, r); }, shots, 4);
    check_channel_average(rz_kraus(0.41), [](PfsrState &s, Rng &) { apply_coherent_z(s, 0, 0.41); }, 10, 5);
}

TEST(Noise, amplitude_damping_edge_cases) {
    Rng rng(6);
    auto s = eigenstate(2);
    auto before = s.dump();
    EXPECT_EQ(apply_amplitude_damping(s, 0, 0, rng), 0);
    EXPECT_EQ(s.dump(), before);
    for (int k = 0; k < 100; k++) {
        auto one = eigenstate(1);
        EXPECT_EQ(apply_amplitude_damping(one, 0, 1, rng), 1);
        EXPECT_NEAR(one.expectation(PauliString::parse("Z")), 1, 1e-12);
    }
}

TEST(Noise, coherent_z) {
    auto s = eigenstate(2);
    auto before = s.dump();
    apply_coherent_z(s, 0, 0);
    EXPECT_EQ(s.dump(), before);
    apply_coherent_z(s, 0, std::numbers::pi);
    ASSERT_EQ(s.num_entries(), 1u);
    auto ref = eigenstate(2);
    ref.apply_pauli(PauliString::parse("-iZ"));
    EXPECT_EQ(s.frame(), ref.frame());
    EXPECT_NEAR(std::abs(inner_product(s, ref) - Complex(1, 0)), 0, 1e-12);

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; trial++) {
        std::size_t n = 1 + rng() % 6;
        auto ops = random_clifford_circuit(n, 20, rng);
        auto state = PfsrState::init_zero(n);
        oracle::DenseState dense(n);
        for (const auto &op : ops) {
            state.apply_gate(op.gate, op.q0, op.q1);
            apply_dense_gate(dense, op);
        }
        for (int k = 0; k < 3; k++) {
            std::size_t q = rng() % n;
            auto entries = state.num_entries();
            apply_coherent_z(state, q, 0.23);
            dense.rz(q, 0.23);
            EXPECT_LE(state.num_entries(), 2 * entries);
            EXPECT_NEAR(state.norm_squared(), 1, 1e-12);
        }
        EXPECT_GT(oracle::fidelity(state.to_dense(), dense.amplitudes()), 1 - 1e-10);
    }
}

TEST(Noise, pta_values) {
    auto zero = pta_amplitude_damping(0);
    EXPECT_EQ(zero.px + zero.py + zero.pz, 0);
    auto one = pta_amplitude_damping(1);
    EXPECT_DOUBLE_EQ(one.px, 0.25);
    EXPECT_DOUBLE_EQ(one.py, 0.25);
    EXPECT_DOUBLE_EQ(one.pz, 0.25);
    EXPECT_EQ(pta_coherent(0), 0);
    EXPECT_NEAR(pta_coherent(std::numbers::pi), 1, 1e-15);
}

TEST(Noise, pta_is_the_pauli_twirl) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> unit(0, 1);
    for (int k = 0; k < 20; k++) {
        double g = unit(rng);
        auto probs = pta_amplitude_damping(g);
        EXPECT_GE(probs.pz, 0);
        EXPECT_LE(probs.px + probs.py + probs.pz, 1);
        auto lhs = pauli_channel_ptm(probs);
        auto rhs = twirled_ptm(ad_kraus(g));
        for (int i = 0; i < 4; i++) {
            for (int j = 0; j < 4; j++) {
                EXPECT_NEAR(lhs[i][j], rhs[i][j], 1e-12);
            }
        }
        double theta = (2 * unit(rng) - 1) * std::numbers::pi;
        auto lz = pauli_channel_ptm({0, 0, pta_coherent(theta)});
        auto rz = twirled_ptm(rz_kraus(theta));
        for (int i = 0; i < 4; i++) {
            for (int j = 0; j < 4; j++) {
                EXPECT_NEAR(lz[i][j], rz[i][j], 1e-12);
            }
        }
    }
}

TEST(Noise, quasiprob_coefficients) {
    auto q0 = quasiprob_coefficients({ChannelKind::CoherentZ, 0, NoiseMode::Quasiprobability});
    EXPECT_DOUBLE_EQ(q0[0], 1);
    EXPECT_DOUBLE_EQ(q0[1], 0);
    EXPECT_DOUBLE_EQ(q0[2], 0);
    for (double g : {0.0, 0.01, 0.1, 0.5, 0.9, 1.0}) {
        auto q = quasiprob_coefficients({ChannelKind::AmplitudeDamping, g, NoiseMode::Quasiprobability});
        EXPECT_NEAR(q[0] + q[1] + q[2], 1, 1e-15);
    }
    Rng rng(9);
    auto s = eigenstate(2);
    SignedSampleWeight w;
    apply_quasiprob(s, 0, {ChannelKind::CoherentZ, 0, NoiseMode::Quasiprobability}, rng, w);
    EXPECT_EQ(w.value(), 1);
}

// The decomposition reproduces the channel's transfer matrix exactly.
TEST(Noise, quasiprob_decomposition_reproduces_channel) {
    for (double g : {0.05, 0.3, 0.8}) {
        auto q = quasiprob_coefficients({ChannelKind::AmplitudeDamping, g, NoiseMode::Quasiprobability});
        auto exact = oracle::pauli_transfer_matrix(ad_kraus(g));
        auto id = oracle::pauli_transfer_matrix({oracle::mat_identity()});
        auto z = oracle::pauli_transfer_matrix({oracle::mat_z()});
        // Reset to |0>: Kraus |0><0| and |0><1|.
        auto reset = oracle::pauli_transfer_matrix({{1, 0, 0, 0}, {0, 1, 0, 0}});
        for (int i = 0; i < 4; i++) {
            for (int j = 0; j < 4; j++) {
                EXPECT_NEAR(q[0] * id[i][j] + q[1] * z[i][j] + q[2] * reset[i][j], exact[i][j], 1e-12);
            }
        }
    }
    for (double theta : {-0.7, 0.05, 1.2}) {
        auto q = quasiprob_coefficients({ChannelKind::CoherentZ, theta, NoiseMode::Quasiprobability});
        auto exact = oracle::pauli_transfer_matrix(rz_kraus(theta));
        auto id = oracle::pauli_transfer_matrix({oracle::mat_identity()});
        auto z = oracle::pauli_transfer_matrix({oracle::mat_z()});
        auto s = oracle::pauli_transfer_matrix({oracle::mat_s()});
        for (int i = 0; i < 4; i++) {
            for (int j = 0; j < 4; j++) {
                EXPECT_NEAR(q[0] * id[i][j] + q[1] * z[i][j] + q[2] * s[i][j], exact[i][j], 1e-12);
            }
        }
    }
}

TEST(Noise, quasiprob_weighted_mean_is_unbiased) {
    Rng rng(10);
    const NoiseChannel ad{ChannelKind::AmplitudeDamping, 0.1, NoiseMode::Quasiprobability};
    const int shots = 100000;
    double sum = 0;
    double sum2 = 0;
    for (int k = 0; k < shots; k++) {
        auto s = eigenstate(2);
        SignedSampleWeight w;
        apply_quasiprob(s, 0, ad, rng, w);
        double v = w.value() * s.expectation(PauliString::parse("X"));
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / shots;
    const double sigma = std::sqrt((sum2 / shots - mean * mean) / shots);
    EXPECT_NEAR(mean, std::sqrt(0.9), 4 * sigma);

    const NoiseChannel rz{ChannelKind::CoherentZ, 0.3, NoiseMode::Quasiprobability};
    sum = sum2 = 0;
    for (int k = 0; k < shots; k++) {
        auto s = eigenstate(2);
        SignedSampleWeight w;
        apply_quasiprob(s, 0, rz, rng, w);
        double v = w.value() * s.expectation(PauliString::parse("X"));
        sum += v;
        sum2 += v * v;
    }
    const double mean_rz = sum / shots;
    const double sigma_rz = std::sqrt((sum2 / shots - mean_rz * mean_rz) / shots);
    EXPECT_NEAR(mean_rz, std::cos(0.3), 4 * sigma_rz);
}

TEST(Noise, channel_validation) {
    EXPECT_THROW((NoiseChannel{ChannelKind::Depolarizing, 1.5, NoiseMode::Exact}.validate()), PreconditionError);
    EXPECT_THROW((NoiseChannel{ChannelKind::CoherentZ, 4, NoiseMode::Exact}.validate()), PreconditionError);
    EXPECT_THROW((NoiseChannel{ChannelKind::Depolarizing, 0.1, NoiseMode::Quasiprobability}.validate()), PreconditionError);
    EXPECT_THROW((NoiseChannel{ChannelKind::BitFlip, 0.1, NoiseMode::PTA}.validate()), PreconditionError);
    EXPECT_NO_THROW((NoiseChannel{ChannelKind::AmplitudeDamping, 0.2, NoiseMode::PTA}.validate()));
    EXPECT_EQ(parse_channel_kind("amplitude_damping"), ChannelKind::AmplitudeDamping);
    EXPECT_THROW(parse_channel_kind("leakage"), ConfigError);
}
