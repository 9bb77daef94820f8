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

#include "pfsr/noise.hpp"

#include <cmath>
#include <numbers>

#include "pfsr/errors.hpp"

namespace pfsr {

namespace {

struct KindName {
    ChannelKind kind;
    const char *name;
};

constexpr KindName kKindNames[] = {
    {ChannelKind::None, "none"},
    {ChannelKind::Depolarizing, "depolarizing"},
    {ChannelKind::AmplitudeDamping, "amplitude_damping"},
    {ChannelKind::CoherentZ, "coherent_z"},
    {ChannelKind::BitFlip, "bit_flip"},
    {ChannelKind::PhaseFlip, "phase_flip"},
    {ChannelKind::MeasurementFlip, "measurement_flip"},
};

char draw_letter(const PauliProbabilities &probs, Rng &rng) {
    const double u = uniform01(rng);
    if (u < probs.px) {
        return 'X';
    }
    if (u < probs.px + probs.py) {
        return 'Y';
    }
    if (u < probs.px + probs.py + probs.pz) {
        return 'Z';
    }
    return 'I';
}

void apply_letter(PfsrState &state, std::size_t qubit, char letter) {
    if (letter != 'I') {
        state.apply_pauli(PauliString::single(state.num_qubits(), qubit, letter));
    }
}

}  // namespace

std::string channel_name(ChannelKind kind) {
    for (const auto &kn : kKindNames) {
        if (kn.kind == kind) {
            return kn.name;
        }
    }
    return "?";
}

ChannelKind parse_channel_kind(const std::string &text) {
    for (const auto &kn : kKindNames) {
        if (text == kn.name) {
            return kn.kind;
        }
    }
    throw ConfigError("unknown channel kind '" + text + "'");
}

std::string mode_name(NoiseMode mode) {
    switch (mode) {
        case NoiseMode::Exact:
            return "exact";
        case NoiseMode::PTA:
            return "pta";
        case NoiseMode::Quasiprobability:
            return "quasiprobability";
    }
    return "?";
}

NoiseMode parse_noise_mode(const std::string &text) {
    if (text == "exact") {
        return NoiseMode::Exact;
    }
    if (text == "pta") {
        return NoiseMode::PTA;
    }
    if (text == "quasiprobability") {
        return NoiseMode::Quasiprobability;
    }
    throw ConfigError("unknown noise mode '" + text + "'");
}

void NoiseChannel::validate() const {
    if (!std::isfinite(param)) {
        throw PreconditionError("channel parameter must be finite");
    }
    switch (kind) {
        case ChannelKind::None:
            break;
        case ChannelKind::CoherentZ:
            if (param <= -std::numbers::pi || param > std::numbers::pi) {
                throw PreconditionError("rotation angle must lie in (-pi, pi]");
            }
            break;
        default:
            if (param < 0 || param > 1) {
                throw PreconditionError(channel_name(kind) + " parameter must lie in [0, 1]");
            }
    }
    if (mode == NoiseMode::Quasiprobability && kind != ChannelKind::AmplitudeDamping && kind != ChannelKind::CoherentZ) {
        throw PreconditionError("quasiprobability mode needs amplitude_damping or coherent_z");
    }
    if (mode == NoiseMode::PTA && kind != ChannelKind::AmplitudeDamping && kind != ChannelKind::CoherentZ &&
        kind != ChannelKind::Depolarizing && kind != ChannelKind::None) {
        throw PreconditionError("pta mode needs amplitude_damping, coherent_z or depolarizing");
    }
}

bool NoiseChannel::is_noiseless() const { return kind == ChannelKind::None || param == 0; }

bool NoiseChannel::is_pauli() const {
    switch (kind) {
        case ChannelKind::AmplitudeDamping:
        case ChannelKind::CoherentZ:
            return mode == NoiseMode::PTA || param == 0;
        default:
            return true;
    }
}

char apply_pauli_channel(PfsrState &state, std::size_t qubit, const PauliProbabilities &probs, Rng &rng) {
    const char letter = draw_letter(probs, rng);
    apply_letter(state, qubit, letter);
    return letter;
}

char apply_depolarizing(PfsrState &state, std::size_t qubit, double p, Rng &rng) {
    return apply_pauli_channel(state, qubit, {p / 3, p / 3, p / 3}, rng);
}

void apply_amplitude_damping_kraus(PfsrState &state, std::size_t qubit, double gamma, int which) {
    const std::size_t n = state.num_qubits();
    if (which == 0) {
        const double s = std::sqrt(1 - gamma);
        std::vector<PauliTerm> k0{{(1 + s) / 2, PauliString(n)}, {(1 - s) / 2, PauliString::single(n, qubit, 'Z')}};
        state.apply_pauli_sum(k0, true);
    } else {
        const double a = std::sqrt(gamma) / 2;
        std::vector<PauliTerm> k1{{a, PauliString::single(n, qubit, 'X')}, {Complex(0, a), PauliString::single(n, qubit, 'Y')}};
        state.apply_pauli_sum(k1, true);
    }
}

int apply_amplitude_damping(PfsrState &state, std::size_t qubit, double gamma, Rng &rng) {
    if (gamma == 0) {
        return 0;
    }
    // <K0^dagger K0> = (2 - gamma)/2 + (gamma/2) <Z>.
    const double p0 = (2 - gamma) / 2 + gamma / 2 * state.expectation(PauliString::single(state.num_qubits(), qubit, 'Z'));
    if (p0 < -1e-9 || p0 > 1 + 1e-9) {
        throw InternalConsistencyError("amplitude damping no-decay probability out of range");
    }
    const int which = uniform01(rng) < p0 ? 0 : 1;
    apply_amplitude_damping_kraus(state, qubit, gamma, which);
    return which;
}

void apply_coherent_z(PfsrState &state, std::size_t qubit, double theta) {
    if (theta == 0) {
        return;
    }
    const std::size_t n = state.num_qubits();
    std::vector<PauliTerm> terms{
        {std::cos(theta / 2), PauliString(n)}, {Complex(0, -std::sin(theta / 2)), PauliString::single(n, qubit, 'Z')}};
    state.apply_pauli_sum(terms);
}

PauliProbabilities pta_amplitude_damping(double gamma) {
    const double pxy = gamma / 4;
    return {pxy, pxy, (1 - std::sqrt(1 - gamma)) / 2 - pxy};
}

double pta_coherent(double theta) {
    const double s = std::sin(theta / 2);
    return s * s;
}

std::array<double, 3> quasiprob_coefficients(const NoiseChannel &channel) {
    const double x = channel.param;
    if (channel.kind == ChannelKind::AmplitudeDamping) {
        const double s = std::sqrt(1 - x);
        return {((1 - x) + s) / 2, ((1 - x) - s) / 2, x};
    }
    if (channel.kind == ChannelKind::CoherentZ) {
        const double c = std::cos(x);
        const double s = std::sin(x);
        return {(1 + c - s) / 2, (1 - c - s) / 2, s};
    }
    throw PreconditionError("no quasiprobability decomposition for " + channel_name(channel.kind));
}

int apply_quasiprob(PfsrState &state, std::size_t qubit, const NoiseChannel &channel, Rng &rng, SignedSampleWeight &weight) {
    const auto q = quasiprob_coefficients(channel);
    const double total = std::abs(q[0]) + std::abs(q[1]) + std::abs(q[2]);
    double u = uniform01(rng) * total;
    int which = 2;
    if (u < std::abs(q[0])) {
        which = 0;
    } else if (u < std::abs(q[0]) + std::abs(q[1])) {
        which = 1;
    }
    weight.multiply(q[which] < 0 ? -1 : 1, total);
    const std::size_t n = state.num_qubits();
    if (which == 1) {
        state.apply_pauli(PauliString::single(n, qubit, 'Z'));
    } else if (which == 2) {
        if (channel.kind == ChannelKind::AmplitudeDamping) {
            auto out = state.measure(PauliString::single(n, qubit, 'Z'), std::nullopt, rng);
            if (out.eigenvalue == -1) {
                state.apply_pauli(PauliString::single(n, qubit, 'X'));
            }
        } else {
            state.apply_gate(Gate::S, qubit);
        }
    }
    return which;
}

PauliProbabilities pauli_probabilities(const NoiseChannel &channel) {
    const double p = channel.param;
    switch (channel.kind) {
        case ChannelKind::Depolarizing:
            return {p / 3, p / 3, p / 3};
        case ChannelKind::BitFlip:
            return {p, 0, 0};
        case ChannelKind::PhaseFlip:
            return {0, 0, p};
        case ChannelKind::AmplitudeDamping:
            return pta_amplitude_damping(p);
        case ChannelKind::CoherentZ:
            return {0, 0, pta_coherent(p)};
        default:
            return {};
    }
}

void apply_noise(PfsrState &state, std::size_t qubit, const NoiseChannel &channel, Rng &rng, SignedSampleWeight &weight) {
    if (channel.is_noiseless()) {
        return;
    }
    switch (channel.kind) {
        case ChannelKind::AmplitudeDamping:
            if (channel.mode == NoiseMode::Exact) {
                apply_amplitude_damping(state, qubit, channel.param, rng);
                return;
            }
            break;
        case ChannelKind::CoherentZ:
            if (channel.mode == NoiseMode::Exact) {
                apply_coherent_z(state, qubit, channel.param);
                return;
            }
            break;
        case ChannelKind::MeasurementFlip:
            throw PreconditionError("measurement flips act on recorded outcomes, not on qubits");
        default:
            break;
    }
    if (channel.mode == NoiseMode::Quasiprobability) {
        apply_quasiprob(state, qubit, channel, rng, weight);
    } else {
        apply_pauli_channel(state, qubit, pauli_probabilities(channel), rng);
    }
}

double measurement_flip_probability(const NoiseChannel &channel) {
    switch (channel.kind) {
        case ChannelKind::CoherentZ:
            return pta_coherent(channel.param);
        case ChannelKind::None:
            return 0;
        default:
            return channel.param;
    }
}

}  // namespace pfsr
