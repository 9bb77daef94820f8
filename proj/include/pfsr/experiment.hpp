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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pfsr/circuit.hpp"
#include "pfsr/noise.hpp"

namespace pfsr {

enum class ExperimentKind { MemoryThreshold, TruncationSweep, ScheduleCompare, ImportanceSampling, OracleSuite };

std::string experiment_kind_name(ExperimentKind k);
ExperimentKind parse_experiment_kind(const std::string &text);

/// One experiment file. Grid values are physical error rates: p, gamma, or sin^2(theta/2) for the Z
/// rotation.
struct ExperimentConfig {
    int schema_version = 1;
    std::string id = "experiment";
    ExperimentKind kind = ExperimentKind::MemoryThreshold;
    std::vector<std::size_t> distances{3, 5};
    std::vector<double> grid;
    ChannelKind channel = ChannelKind::Depolarizing;
    NoiseMode noise_mode = NoiseMode::Exact;
    MemoryMode mode = MemoryMode::Phenomenological;
    Basis basis = Basis::Z;
    double epsilon = 0;
    std::optional<double> flip_probability;
    std::optional<std::size_t> rounds;
    std::size_t shots = 1000;
    std::uint64_t seed = 1;
    /// 0 means one worker per hardware thread.
    std::size_t workers = 0;
    std::string output = "results";
    /// Runs whose failed-trajectory fraction exceeds this exit with a runtime error.
    double max_discard_fraction = 0.01;

    // truncation_sweep
    std::vector<double> epsilons;
    // schedule_compare
    std::vector<MemoryMode> modes;
    // importance_sampling
    std::size_t k_min = 1;
    std::size_t k_max = 10;
    std::size_t pilot_shots = 200;
    std::size_t budget = 10000;
    std::size_t brute_force_shots = 0;
    // oracle_suite
    std::size_t circuits = 500;
    std::size_t max_qubits = 8;
    std::size_t max_depth = 40;

    bool operator==(const ExperimentConfig &) const = default;
};

/// Parses JSON text (a config, or a run manifest holding one under "config"). Throws ConfigError naming
/// the offending field.
ExperimentConfig parse_config(const std::string &text);
ExperimentConfig load_config(const std::string &path);
std::string config_to_json(const ExperimentConfig &config);
/// Throws ConfigError on the first violated field constraint.
void check_config(const ExperimentConfig &config);

/// Channel whose physical error rate is `rate` (theta = 2 asin(sqrt(rate)) for the Z rotation).
NoiseChannel channel_at_rate(ChannelKind kind, double rate, NoiseMode mode);

/// experiment_id, d, mode, channel, param, k_or_total, shots, failures, discards, rate, stderr.
/// `param` is empty for per-k importance rows; `k_or_total` is "total", a fault count, or "estimate".
struct CsvRow {
    std::string experiment_id;
    std::size_t d = 0;
    std::string mode;
    std::string channel;
    std::optional<double> param;
    std::string k_or_total = "total";
    std::size_t shots = 0;
    double failures = 0;
    std::size_t discards = 0;
    double rate = 0;
    double std_error = 0;
};

std::string rows_to_csv(const std::vector<CsvRow> &rows);
/// Throws ConfigError on a malformed header or row.
std::vector<CsvRow> parse_csv(const std::string &text);

struct RunOutput {
    std::vector<CsvRow> rows;
    std::string manifest;
    std::size_t trajectories = 0;
    std::size_t discards = 0;
};

/// Runs the experiment, logging progress lines to `log` when given.
RunOutput run_experiment(const ExperimentConfig &config, std::ostream *log = nullptr);
/// Writes <output>/<id>.csv and <output>/<id>.manifest.json; returns the CSV path.
std::string write_outputs(const ExperimentConfig &config, const RunOutput &out);

struct ValidationReport {
    std::vector<std::string> info;
    std::vector<std::string> warnings;
    std::vector<std::string> errors;

    bool ok() const { return errors.empty(); }
    std::string text() const;
};

/// Dry run: builds every code, checks schedules, counts fault locations and bounds state memory.
ValidationReport validate_experiment(const ExperimentConfig &config);

struct GroupThreshold {
    std::string group;
    std::optional<double> threshold;
    double ci_low = 0;
    double ci_high = 0;
    std::string note;
};

struct Report {
    std::string text;
    /// group, d, param, rate, stderr, lower, upper (one standard error).
    std::string long_csv;
    std::vector<GroupThreshold> thresholds;
};

/// Curves per (experiment_id, mode, channel) group and their threshold crossings.
Report report_results(const std::vector<CsvRow> &rows);

}  // namespace pfsr
