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
#include <vector>

#include "pfsr/circuit.hpp"
#include "pfsr/decoder.hpp"
#include "pfsr/memory.hpp"
#include "pfsr/rng.hpp"

namespace pfsr {

/// Aggregated outcome of independent memory trajectories at one (distance, parameter) point.
///
/// For quasiprobability runs every trajectory carries a signed weight; `failures` is then the weighted
/// failure sum and the sample standard error (`std_error`) of the weighted indicator.
struct ExperimentResult {
    /// Physical error rate: p, gamma, or sin^2(theta/2) for the Z rotation.
    double param = 0;
    std::size_t distance = 0;
    std::size_t shots = 0;
    double failures = 0;
    /// Trajectories dropped because they raised a runtime error (memory experiments never postselect).
    std::size_t discards = 0;
    double rate = 0;
    double std_error = 0;
    bool weighted = false;
    /// Largest entry count seen in any trajectory, and the mean over trajectories of log2 of each
    /// trajectory's largest count.
    std::size_t max_entries = 1;
    double mean_log2_max_entries = 0;
    std::size_t truncation_fallbacks = 0;
    std::vector<std::string> errors;

    std::size_t kept() const { return shots - discards; }
};

struct RateOptions {
    std::uint64_t seed = 0;
    /// Extra stream index so different grid points draw independent randomness from one master seed.
    std::uint64_t stream = 0;
    std::size_t workers = 1;
};

/// Runs `shots` trajectories of the memory experiment, decodes each, and aggregates. Trajectory i uses
/// `make_rng(seed, {stream, i})`, so the result does not depend on the worker count.
ExperimentResult estimate_rate(const MemoryConfig &config, std::size_t shots, const RateOptions &options = {});

struct ThresholdEstimate {
    double threshold = 0;
    double ci_low = 0;
    double ci_high = 0;
    /// Crossing of each consecutive pair of distances.
    std::vector<double> pairwise;
    /// Bootstrap resamples that produced a crossing (out of the number requested).
    std::size_t bootstrap_used = 0;
};

/// Crossing of log(rate) curves, interpolated linearly in the parameter between grid points; the
/// threshold is the mean crossing over consecutive distance pairs. The interval comes from resampling
/// every point's failure count from its own binomial (or, for weighted runs, normal) distribution.
/// Throws NoCrossingError, with the curves in the message, when some pair never crosses.
ThresholdEstimate estimate_threshold(const std::vector<ExperimentResult> &results, std::size_t bootstrap = 200,
                                     std::uint64_t seed = 1);

/// The point estimate only.
double find_crossing(const std::vector<ExperimentResult> &results, std::vector<double> *pairwise = nullptr);

struct FaultSite {
    std::size_t location;
    FaultKind kind;
};

/// Fault locations that can fire under a channel and a classical flip probability, in circuit order.
struct FaultModel {
    std::vector<FaultSite> sites;
    ChannelKind channel = ChannelKind::None;
    std::size_t num_channel = 0;
    std::size_t num_bit_flip = 0;
    std::size_t num_measurement_flip = 0;

    std::size_t size() const { return sites.size(); }
};

/// Channel locations are included when the channel is a stochastic Pauli channel (depolarizing, bit flip
/// or phase flip), flip locations when `flip_probability` > 0. Coherent and amplitude-damping channels
/// are not fault processes and raise PreconditionError.
FaultModel enumerate_faults(const Circuit &circuit, const NoiseChannel &channel, double flip_probability);

struct FixedKOutcome {
    bool fail = false;
    bool discard = false;
};

/// One trajectory with exactly `k` faults on a uniformly chosen k-subset of sites. Depolarizing sites
/// draw X, Y or Z uniformly; flip sites always fire.
FixedKOutcome sample_fixed_k(const MemoryExperiment &experiment, const MemoryDecoder &decoder, const FaultModel &model,
                             std::size_t k, Rng &rng);

/// The k-subset and Paulis `sample_fixed_k` would inject, sorted by location.
std::vector<InjectedFault> draw_faults(const FaultModel &model, std::size_t k, Rng &rng);

struct FaultCountData {
    std::size_t k = 0;
    std::size_t shots = 0;
    std::size_t failures = 0;
    std::size_t discards = 0;

    double fail_rate() const { return shots == discards ? 0 : static_cast<double>(failures) / static_cast<double>(shots - discards); }
};

struct FaultCountEstimate {
    std::size_t num_locations = 0;
    std::vector<FaultCountData> per_k;  // ascending k
};

/// Samples `shots` fixed-k trajectories for each listed k. Trajectory i at k uses make_rng(seed, {k, i}).
FaultCountEstimate sample_fault_counts(const MemoryExperiment &experiment, const MemoryDecoder &decoder, const FaultModel &model,
                                       const std::vector<std::pair<std::size_t, std::size_t>> &plan, std::uint64_t seed,
                                       std::size_t workers = 1);

/// C(n, k) p^k (1-p)^(n-k), via the incomplete-beta derivative so large n neither overflows nor loses digits.
double binomial_weight(std::size_t n, std::size_t k, double p);

struct ImportancePoint {
    double p = 0;
    double rate = 0;
    double variance = 0;
    double std_error = 0;
    /// Probability mass of fault counts above and below the sampled window.
    double tail_above = 0;
    double tail_below = 0;
};

/// p_fail(p) = sum over sampled k of P(k) * failures_k / kept_k, with variance
/// sum P(k)^2 f_k (1 - f_k) / kept_k.
std::vector<ImportancePoint> importance_estimate(const FaultCountEstimate &data, const std::vector<double> &p_grid);

/// Shots per k (ascending k). Contributions P(k) f_k are normalised per target rate and summed; the
/// window keeps the largest contributions until the rest is below 1% of the total, each active k gets at
/// least 100 shots (fewer only when the budget cannot cover the floor), and the remainder is shared in
/// proportion to contribution. A pilot with no failures falls back to a uniform plan over its ks.
std::vector<std::pair<std::size_t, std::size_t>> allocate_shots(const FaultCountEstimate &pilot, const std::vector<double> &p_targets,
                                                                std::size_t budget);

}  // namespace pfsr
