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

#include "pfsr/memory.hpp"

#include <sstream>

#include "pfsr/errors.hpp"

namespace pfsr {

std::string SyndromeRecord::to_csv() const {
    std::string out = "round,stabilizer,bit\n";
    for (std::size_t r = 0; r < rounds; r++) {
        for (std::size_t k = 0; k < num_stabilizers; k++) {
            out += std::to_string(r) + "," + std::to_string(k) + "," + std::to_string(bit(r, k)) + "\n";
        }
    }
    out += "logical,," + std::to_string(logical) + "\n";
    return out;
}

SyndromeRecord SyndromeRecord::from_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "round,stabilizer,bit") {
        throw ConfigError("syndrome CSV must start with 'round,stabilizer,bit'");
    }
    std::vector<std::array<std::size_t, 3>> rows;
    SyndromeRecord rec;
    bool have_logical = false;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        if (line.rfind("logical,,", 0) == 0) {
            rec.logical = static_cast<std::uint8_t>(std::stoi(line.substr(9)));
            have_logical = true;
            continue;
        }
        std::size_t a = line.find(',');
        std::size_t b = line.find(',', a + 1);
        if (a == std::string::npos || b == std::string::npos) {
            throw ConfigError("malformed syndrome row '" + line + "'");
        }
        rows.push_back({std::stoul(line.substr(0, a)), std::stoul(line.substr(a + 1, b - a - 1)), std::stoul(line.substr(b + 1))});
        rec.rounds = std::max(rec.rounds, rows.back()[0] + 1);
        rec.num_stabilizers = std::max(rec.num_stabilizers, rows.back()[1] + 1);
    }
    if (!have_logical || rows.size() != rec.rounds * rec.num_stabilizers) {
        throw ConfigError("syndrome CSV is incomplete");
    }
    rec.bits.assign(rows.size(), 0);
    for (const auto &row : rows) {
        rec.bits[row[0] * rec.num_stabilizers + row[1]] = static_cast<std::uint8_t>(row[2] & 1);
    }
    return rec;
}

SyndromeRecord to_syndrome_record(const Circuit &circuit, std::span<const std::uint8_t> records) {
    if (records.size() != circuit.num_records()) {
        throw DimensionError("record length does not match the circuit");
    }
    SyndromeRecord rec;
    rec.rounds = circuit.rounds + 1;
    rec.num_stabilizers = circuit.num_stabilizers;
    rec.bits.assign(records.begin(), records.begin() + static_cast<long>(circuit.logical_record()));
    rec.logical = records[circuit.logical_record()];
    return rec;
}

MemoryExperiment::MemoryExperiment(const MemoryConfig &config) : config_(config), code_(build_code(config.distance)) {
    config_.channel.validate();
    if (config_.epsilon < 0) {
        throw PreconditionError("truncation cutoff must be non-negative");
    }
    const std::size_t rounds = config_.rounds.value_or(config_.distance);
    circuit_ = build_memory_circuit(code_, config_.basis, config_.mode, rounds);
    prepared_ = prepare_logical_state(code_, config_.basis, circuit_.num_qubits);
    flip_ = config_.flip_probability.value_or(measurement_flip_probability(config_.channel));
    if (flip_ < 0 || flip_ > 1) {
        throw PreconditionError("flip probability must lie in [0, 1]");
    }
}

TrajectoryResult MemoryExperiment::run_impl(const ExecutionOptions &options, Rng &rng) const {
    PfsrState state = prepared_;
    ExecutionResult exec = execute(circuit_, state, options, rng);
    return {to_syndrome_record(circuit_, exec.records), exec.weight, exec.max_entries, exec.truncation_fallbacks};
}

TrajectoryResult MemoryExperiment::run(Rng &rng) const {
    ExecutionOptions options{config_.channel, flip_, config_.epsilon, nullptr};
    return run_impl(options, rng);
}

TrajectoryResult MemoryExperiment::run_with_faults(const std::vector<InjectedFault> &faults, Rng &rng) const {
    ExecutionOptions options{config_.channel, flip_, config_.epsilon, &faults};
    return run_impl(options, rng);
}

SyndromeRecord run_memory_experiment(
    std::size_t d, Basis basis, const NoiseChannel &channel, MemoryMode mode, double epsilon, Rng &rng) {
    MemoryConfig config;
    config.distance = d;
    config.basis = basis;
    config.mode = mode;
    config.channel = channel;
    config.epsilon = epsilon;
    return MemoryExperiment(config).run(rng).record;
}

}  // namespace pfsr
