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

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pfsr/errors.hpp"
#include "pfsr/experiment.hpp"
#include "pfsr/oracle/equivalence.hpp"
#include "pfsr/pfsr_state.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw pfsr::ConfigError("cannot read '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Pauli frame sparse representation simulator: surface-code memory experiments and thresholds"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> workers, shots;
    auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("--config", config_path, "Experiment config (JSON) or a run manifest")->required();
        cmd->add_option("--seed", seed, "Master seed override");
        cmd->add_option("--workers", workers, "Worker threads (0: one per hardware thread)");
        cmd->add_option("--out", out_dir, "Output directory override");
        cmd->add_option("--shots", shots, "Shots per point override");
    };

    auto *run = app.add_subcommand("run", "Run an experiment and write CSV results and a manifest");
    add_common(run);
    auto *validate = app.add_subcommand("validate", "Dry-run checks of a config");
    add_common(validate);

    std::vector<std::string> report_files;
    auto *report = app.add_subcommand("report", "Summarize result CSVs and estimate thresholds");
    report->add_option("files", report_files, "Result CSV files")->required()->check(CLI::ExistingFile);
    report->add_option("--out", out_dir, "Directory for the plot-ready long-format CSV");

    std::size_t circuits = 500, max_qubits = 8, max_depth = 40;
    std::uint64_t oracle_seed = 1;
    auto *oracle = app.add_subcommand("oracle", "Compare the sparse simulator with a dense state vector on random circuits");
    oracle->add_option("--circuits", circuits, "Number of random circuits");
    oracle->add_option("--max-qubits", max_qubits, "Largest register (capped by PFSR_ORACLE_MAX_QUBITS)");
    oracle->add_option("--max-depth", max_depth, "Largest circuit depth");
    oracle->add_option("--seed", oracle_seed, "Seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    auto load = [&] {
        auto config = pfsr::load_config(config_path);
        if (seed) {
            config.seed = *seed;
        }
        if (workers) {
            config.workers = *workers;
        }
        if (!out_dir.empty()) {
            config.output = out_dir;
        }
        if (shots) {
            config.shots = *shots;
        }
        pfsr::check_config(config);
        return config;
    };

    try {
        if (*run) {
            const auto config = load();
            const auto out = pfsr::run_experiment(config, &std::cerr);
            const auto path = pfsr::write_outputs(config, out);
            std::cout << "wrote " << path << " (" << out.rows.size() << " rows, " << out.trajectories << " trajectories, "
                      << out.discards << " discarded)\n";
            if (static_cast<double>(out.discards) > config.max_discard_fraction * static_cast<double>(out.trajectories)) {
                std::cerr << "error: " << out.discards << " trajectories failed, above the allowed fraction "
                          << config.max_discard_fraction << "\n";
                return kRuntimeError;
            }
            if (config.kind == pfsr::ExperimentKind::OracleSuite && !out.rows.empty() && out.rows.front().failures > 0) {
                std::cerr << "error: oracle mismatches\n";
                return kRuntimeError;
            }
            return kOk;
        }
        if (*validate) {
            pfsr::ExperimentConfig config;
            try {
                config = load();
            } catch (const pfsr::ConfigError &e) {
                std::cout << "error: " << e.what() << "\nconfig INVALID\n";
                return kConfigError;
            }
            const auto rep = pfsr::validate_experiment(config);
            std::cout << rep.text();
            return rep.ok() ? kOk : kConfigError;
        }
        if (*report) {
            std::vector<pfsr::CsvRow> rows;
            for (const auto &f : report_files) {
                try {
                    const auto part = pfsr::parse_csv(read_file(f));
                    rows.insert(rows.end(), part.begin(), part.end());
                } catch (const pfsr::ConfigError &e) {
                    throw std::runtime_error(f + ": " + e.what());
                }
            }
            const auto rep = pfsr::report_results(rows);
            std::cout << rep.text;
            if (!out_dir.empty()) {
                std::filesystem::create_directories(out_dir);
                const auto path = std::filesystem::path(out_dir) / "report_long.csv";
                std::ofstream(path) << rep.long_csv;
                std::cout << "wrote " << path.string() << "\n";
            }
            return kOk;
        }
        if (*oracle) {
            pfsr::oracle::EquivalenceOptions o;
            o.circuits = circuits;
            o.max_qubits = std::min(max_qubits, pfsr::oracle_max_qubits());
            o.max_depth = max_depth;
            o.seed = oracle_seed;
            const auto rep = pfsr::oracle::run_equivalence_suite(o);
            std::cout << rep.circuits - rep.failures << "/" << rep.circuits << " circuits agree (" << rep.operations << " operations, "
                      << rep.measurements << " measurements, " << rep.channels << " channels, max " << rep.max_entries
                      << " entries); min fidelity " << rep.min_fidelity << "\n";
            for (const auto &m : rep.messages) {
                std::cout << m << "\n";
            }
            return rep.passed() ? kOk : kRuntimeError;
        }
    } catch (const pfsr::ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
    return kOk;
}
