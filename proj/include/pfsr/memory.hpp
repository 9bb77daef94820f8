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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pfsr/circuit.hpp"
#include "pfsr/noise.hpp"
#include "pfsr/pfsr_state.hpp"
#include "pfsr/surface_code.hpp"

namespace pfsr {

/// Measured stabilizer bits for every round (noisy rounds plus the final ideal one) and the logical bit.
struct SyndromeRecord {
    std::size_t rounds = 0;  // total rows, final ideal round included
    std::size_t num_stabilizers = 0;
    std::vector<std::uint8_t> bits;  // row-major rounds x stabilizers, 1 = eigenvalue -1
    std::uint8_t logical = 0;

    std::uint8_t bit(std::size_t round, std::size_t k) const { return bits[round * num_stabilizers + k]; }
    /// "round,stabilizer,bit" lines with a header, plus a final "logical,,bit" line.
    std::string to_csv() const;
    static SyndromeRecord from_csv(const std::string &text);
};

/// Splits the flat circuit records into a SyndromeRecord.
SyndromeRecord to_syndrome_record(const Circuit &circuit, std::span<const std::uint8_t> records);

struct MemoryConfig {
    std::size_t distance = 3;
    Basis basis = Basis::Z;
    MemoryMode mode = MemoryMode::Phenomenological;
    NoiseChannel channel;
    /// Classical flip probability for measurements and resets; derived from the channel when unset.
    std::optional<double> flip_probability;
    double epsilon = 0;
    /// Noisy rounds; the distance when unset.
    std::optional<std::size_t> rounds;
};

struct TrajectoryResult {
    SyndromeRecord record;
    SignedSampleWeight weight;
    std::size_t max_entries = 1;
    std::size_t truncation_fallbacks = 0;
};

/// A memory experiment with its code, circuit and prepared logical state built once and reused.
class MemoryExperiment {
   public:
    explicit MemoryExperiment(const MemoryConfig &config);

    const MemoryConfig &config() const { return config_; }
    const RotatedSurfaceCode &code() const { return code_; }
    const Circuit &circuit() const { return circuit_; }
    const PfsrState &prepared_state() const { return prepared_; }
    double flip_probability() const { return flip_; }

    /// One stochastic trajectory.
    TrajectoryResult run(Rng &rng) const;
    /// One trajectory with the given faults and no other noise.
    TrajectoryResult run_with_faults(const std::vector<InjectedFault> &faults, Rng &rng) const;

   private:
    TrajectoryResult run_impl(const ExecutionOptions &options, Rng &rng) const;

    MemoryConfig config_;
    RotatedSurfaceCode code_;
    Circuit circuit_;
    PfsrState prepared_;
    double flip_ = 0;
};

/// Convenience wrapper: builds the experiment and runs a single trajectory.
SyndromeRecord run_memory_experiment(
    std::size_t d, Basis basis, const NoiseChannel &channel, MemoryMode mode, double epsilon, Rng &rng);

}  // namespace pfsr
