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
#include <cstddef>
#include <string>

#include "pfsr/pfsr_state.hpp"
#include "pfsr/rng.hpp"

namespace pfsr {

enum class ChannelKind { None, Depolarizing, AmplitudeDamping, CoherentZ, BitFlip, PhaseFlip, MeasurementFlip };

/// How a channel is applied: sampled Kraus operators, its Pauli twirl, or a signed stabilizer decomposition.
enum class NoiseMode { Exact, PTA, Quasiprobability };

std::string channel_name(ChannelKind kind);
ChannelKind parse_channel_kind(const std::string &text);
std::string mode_name(NoiseMode mode);
NoiseMode parse_noise_mode(const std::string &text);

/// Physical error process with its parameter (p, gamma or theta) and application mode.
struct NoiseChannel {
    ChannelKind kind = ChannelKind::None;
    double param = 0;
    NoiseMode mode = NoiseMode::Exact;

    /// Throws PreconditionError on out-of-range parameters or unsupported kind/mode pairs.
    void validate() const;
    bool is_noiseless() const;
    /// True when every application is a Pauli (the state never branches).
    bool is_pauli() const;
};

/// Running sign and magnitude of a quasiprobability trajectory weight.
struct SignedSampleWeight {
    int sign = 1;
    double magnitude = 1;

    double value() const { return sign * magnitude; }
    void multiply(int s, double m) {
        sign *= s;
        magnitude *= m;
    }
};

struct PauliProbabilities {
    double px = 0;
    double py = 0;
    double pz = 0;
};

/// Applies I, X, Y or Z drawn with probabilities (1-p, p/3, p/3, p/3). Returns the letter applied.
char apply_depolarizing(PfsrState &state, std::size_t qubit, double p, Rng &rng);

/// Applies a Pauli channel. Returns the letter applied.
char apply_pauli_channel(PfsrState &state, std::size_t qubit, const PauliProbabilities &probs, Rng &rng);

/// Samples and applies one amplitude-damping Kraus operator. Returns 0 for K0 (no decay) and 1 for K1.
int apply_amplitude_damping(PfsrState &state, std::size_t qubit, double gamma, Rng &rng);

/// Applies the Kraus operator with index `which` of amplitude damping, renormalized.
void apply_amplitude_damping_kraus(PfsrState &state, std::size_t qubit, double gamma, int which);

/// Applies exp(-i theta Z / 2) on `qubit`.
void apply_coherent_z(PfsrState &state, std::size_t qubit, double theta);

/// Pauli-twirled amplitude damping.
PauliProbabilities pta_amplitude_damping(double gamma);
/// Z-flip probability of the twirled Z rotation, sin^2(theta/2).
double pta_coherent(double theta);

/// Coefficients of the stabilizer-channel decomposition: (identity, Z, reset) for amplitude damping
/// and (identity, Z, S) for the Z rotation. They sum to one but may be negative.
std::array<double, 3> quasiprob_coefficients(const NoiseChannel &channel);

/// Draws one sub-channel with probability |q_i| / sum |q_j|, applies it and updates `weight`.
/// Returns the sub-channel index.
int apply_quasiprob(PfsrState &state, std::size_t qubit, const NoiseChannel &channel, Rng &rng, SignedSampleWeight &weight);

/// Applies `channel` on `qubit` according to its mode.
void apply_noise(PfsrState &state, std::size_t qubit, const NoiseChannel &channel, Rng &rng, SignedSampleWeight &weight);

/// Classical outcome-flip probability paired with a channel: p for flip and depolarizing channels,
/// gamma for amplitude damping and sin^2(theta/2) for the Z rotation.
double measurement_flip_probability(const NoiseChannel &channel);

/// Twirled Pauli probabilities of a channel (exact for the Pauli channels).
PauliProbabilities pauli_probabilities(const NoiseChannel &channel);

}  // namespace pfsr
