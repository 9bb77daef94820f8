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
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pfsr/errors.hpp"
#include "pfsr/experiment.hpp"

using namespace pfsr;

namespace {

ExperimentConfig small(ExperimentKind kind) {
    ExperimentConfig c;
    c.id = "t_" + experiment_kind_name(kind);
    c.kind = kind;
    c.distances = {3};
    c.shots = 60;
    c.seed = 42;
    c.workers = 2;
    c.output = (std::filesystem::temp_directory_path() / "pfsr_experiment_test").string();
    switch (kind) {
        case ExperimentKind::MemoryThreshold:
            c.distances = {3, 5};
            c.grid = {0.02, 0.05};
            break;
        case ExperimentKind::TruncationSweep:
            c.channel = ChannelKind::CoherentZ;
            c.mode = MemoryMode::CircuitLayered;
            c.basis = Basis::X;
            c.grid = {0.001};
            c.epsilons = {1e-4, 1e-5};
            c.shots = 20;
            break;
        case ExperimentKind::ScheduleCompare:
            c.grid = {0.004, 0.008};
            c.modes = {MemoryMode::CircuitParallel, MemoryMode::CircuitLayered};
            break;
        case ExperimentKind::ImportanceSampling:
            c.mode = MemoryMode::CircuitLayered;
            c.grid = {0.005, 0.01};
            c.k_min = 1;
            c.k_max = 5;
            c.pilot_shots = 30;
            c.budget = 300;
            c.brute_force_shots = 50;
            break;
        case ExperimentKind::OracleSuite:
            c.circuits = 20;
            break;
    }
    return c;
}

const ExperimentKind kAllKinds[] = {ExperimentKind::MemoryThreshold, ExperimentKind::TruncationSweep, ExperimentKind::ScheduleCompare,
                                    ExperimentKind::ImportanceSampling, ExperimentKind::OracleSuite};

std::string slurp(const std::string &path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

CsvRow synthetic_row(const std::string &id, const std::string &channel, std::size_t d, double p, double t) {
    const double rate = std::min(1.0, 0.1 * std::pow(p / t, (static_cast<double>(d) + 1) / 2));
    const std::size_t shots = 50000;
    const double failures = std::round(rate * shots);
    const double r = failures / shots;
    return {id, d, "phenomenological", channel, p, "total", shots, failures, 0, r, std::sqrt(r * (1 - r) / shots)};
}

}  // namespace

TEST(Config, RoundTripIsIdentity) {
    for (auto kind : kAllKinds) {
        auto c = small(kind);
        c.flip_probability = 0.003;
        c.rounds = 4;
        const auto again = parse_config(config_to_json(c));
        EXPECT_EQ(again, c) << experiment_kind_name(kind);
        EXPECT_EQ(config_to_json(again), config_to_json(c));
    }
}

TEST(Config, DefaultsFillMissingFields) {
    const auto c = parse_config(R"({"grid": [0.01, 0.02]})");
    EXPECT_EQ(c.kind, ExperimentKind::MemoryThreshold);
    EXPECT_EQ(c.distances, (std::vector<std::size_t>{3, 5}));
    EXPECT_EQ(c.schema_version, 1);
    EXPECT_FALSE(c.rounds.has_value());
}

TEST(Config, ErrorsNameTheField) {
    auto expect_field = [](const std::string &text, const std::string &field) {
        try {
            parse_config(text);
            ADD_FAILURE() << "accepted " << text;
        } catch (const ConfigError &e) {
            EXPECT_NE(std::string(e.what()).find("`" + field + "`"), std::string::npos) << e.what();
        }
    };
    expect_field(R"({"grid": [0.01], "distances": [3, 4]})", "distances[1]");
    expect_field(R"({"grid": [0.02, 0.01]})", "grid[1]");
    expect_field(R"({"grid": [0.01], "shots": 0})", "shots");
    expect_field(R"({"grid": [0.01], "epsilon": -1})", "epsilon");
    expect_field(R"({"grid": [0.01], "channel": "purple"})", "channel");
    expect_field(R"({"grid": [0.01], "shots": "many"})", "shots");
    expect_field(R"({"grid": [0.01], "schema_version": 2})", "schema_version");
    expect_field(R"({"grid": [0.01], "colour": 1})", "colour");
    expect_field(R"({"grid": [0.01], "modes": ["sideways"]})", "modes[0]");
    expect_field(R"({"kind": "importance_sampling", "grid": [0.01], "channel": "amplitude_damping"})", "channel");
    expect_field(R"({"kind": "truncation_sweep", "grid": [0.01]})", "epsilons");
    EXPECT_THROW(parse_config("{not json"), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, CoherentGridIsSinSquared) {
    const auto ch = channel_at_rate(ChannelKind::CoherentZ, 0.02, NoiseMode::Exact);
    EXPECT_NEAR(std::pow(std::sin(ch.param / 2), 2), 0.02, 1e-15);
    EXPECT_EQ(channel_at_rate(ChannelKind::AmplitudeDamping, 0.07, NoiseMode::PTA).param, 0.07);
}

TEST(Validate, RejectsEvenDistance) {
    auto c = small(ExperimentKind::MemoryThreshold);
    c.distances = {4};
    const auto rep = validate_experiment(c);
    EXPECT_FALSE(rep.ok());
    EXPECT_NE(rep.text().find("distances[0]"), std::string::npos);
}

TEST(Validate, ReportsCodeCountsAndLocations) {
    auto c = small(ExperimentKind::MemoryThreshold);
    c.distances = {5};
    c.mode = MemoryMode::CircuitLayered;
    const auto rep = validate_experiment(c);
    ASSERT_TRUE(rep.ok()) << rep.text();
    EXPECT_NE(rep.text().find("d=5: 25 data qubits, 24 stabilizers (12 X, 12 Z)"), std::string::npos) << rep.text();
    EXPECT_NE(rep.text().find("fault locations"), std::string::npos);
    EXPECT_NE(rep.text().find("KiB per trajectory"), std::string::npos);
}

TEST(Validate, WarnsWhenImportanceWindowMissesDistance) {
    auto c = small(ExperimentKind::ImportanceSampling);
    c.distances = {5};
    c.k_min = 1;
    c.k_max = 4;
    auto rep = validate_experiment(c);
    ASSERT_TRUE(rep.ok());
    ASSERT_EQ(rep.warnings.size(), 1u);
    EXPECT_NE(rep.warnings[0].find("excludes k=d=5"), std::string::npos);
    c.k_max = 8;
    EXPECT_TRUE(validate_experiment(c).warnings.empty());
}

TEST(Run, ThresholdSweepHasOneRowPerPoint) {
    const auto c = small(ExperimentKind::MemoryThreshold);
    const auto out = run_experiment(c);
    ASSERT_EQ(out.rows.size(), 4u);
    EXPECT_EQ(out.trajectories, 240u);
    for (const auto &r : out.rows) {
        EXPECT_EQ(r.k_or_total, "total");
        EXPECT_EQ(r.shots, 60u);
        EXPECT_EQ(r.channel, "depolarizing/exact");
        EXPECT_TRUE(r.param.has_value());
    }
    EXPECT_EQ(out.rows[0].d, 3u);
    EXPECT_EQ(*out.rows[1].param, 0.05);
    EXPECT_EQ(out.rows[2].d, 5u);
}

TEST(Run, SameConfigGivesIdenticalFiles) {
    auto c = small(ExperimentKind::MemoryThreshold);
    const auto a = rows_to_csv(run_experiment(c).rows);
    c.workers = 1;
    const auto b = rows_to_csv(run_experiment(c).rows);
    EXPECT_EQ(a, b);
    c.seed = 43;
    EXPECT_NE(a, rows_to_csv(run_experiment(c).rows));
}

TEST(Run, ManifestReplaysEveryKind) {
    for (auto kind : kAllKinds) {
        const auto c = small(kind);
        const auto out = run_experiment(c);
        const auto path = write_outputs(c, out);
        const auto csv = slurp(path);
        EXPECT_EQ(csv, rows_to_csv(out.rows));
        const auto manifest = std::filesystem::path(c.output) / (c.id + ".manifest.json");
        const auto replay_config = load_config(manifest.string());
        EXPECT_EQ(replay_config, c) << experiment_kind_name(kind);
        EXPECT_EQ(rows_to_csv(run_experiment(replay_config).rows), csv) << experiment_kind_name(kind);
        EXPECT_FALSE(out.rows.empty());
    }
}

TEST(Run, KindSpecificRows) {
    const auto tr = run_experiment(small(ExperimentKind::TruncationSweep));
    ASSERT_EQ(tr.rows.size(), 2u);
    EXPECT_EQ(tr.rows[0].experiment_id, "t_truncation_sweep/eps=1e-04");
    EXPECT_EQ(tr.rows[1].experiment_id, "t_truncation_sweep/eps=1e-05");
    EXPECT_EQ(*tr.rows[0].param, 0.001);

    const auto sc = run_experiment(small(ExperimentKind::ScheduleCompare));
    ASSERT_EQ(sc.rows.size(), 4u);
    EXPECT_EQ(sc.rows[0].mode, "circuit_parallel");
    EXPECT_EQ(sc.rows[3].mode, "circuit_layered");

    const auto is = run_experiment(small(ExperimentKind::ImportanceSampling));
    std::size_t per_k = 0, estimates = 0, direct = 0;
    for (const auto &r : is.rows) {
        if (r.k_or_total == "estimate") {
            estimates++;
        } else if (r.k_or_total == "total") {
            direct++;
        } else {
            per_k++;
            EXPECT_FALSE(r.param.has_value());
            if (std::stoul(r.k_or_total) < 2) {
                EXPECT_EQ(r.failures, 0);
            }
        }
    }
    EXPECT_EQ(per_k, 5u);
    EXPECT_EQ(estimates, 2u);
    EXPECT_EQ(direct, 2u);
    EXPECT_NE(is.manifest.find("\"zero_block_violations\": 0"), std::string::npos);

    const auto oc = run_experiment(small(ExperimentKind::OracleSuite));
    ASSERT_EQ(oc.rows.size(), 1u);
    EXPECT_EQ(oc.rows[0].failures, 0);
    EXPECT_EQ(oc.rows[0].shots, 20u);
}

TEST(Csv, RoundTrip) {
    std::vector<CsvRow> rows{synthetic_row("a", "depolarizing/exact", 3, 0.05, 0.07),
                             {"b", 3, "circuit_layered", "depolarizing/exact", std::nullopt, "4", 100, 7, 1, 0.0707, 0.0255}};
    const auto text = rows_to_csv(rows);
    EXPECT_EQ(text.substr(0, text.find('\n')), "experiment_id,d,mode,channel,param,k_or_total,shots,failures,discards,rate,stderr");
    const auto back = parse_csv(text);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(rows_to_csv(back), text);
    EXPECT_FALSE(back[1].param.has_value());
    EXPECT_THROW(parse_csv("d,rate\n3,0.1\n"), ConfigError);
    EXPECT_THROW(parse_csv(text + "x,3,m\n"), ConfigError);
}

TEST(Report, SyntheticCrossingWithInterval) {
    std::vector<CsvRow> rows;
    for (std::size_t d : {3, 5, 7}) {
        for (double p : {0.05, 0.06, 0.07, 0.08, 0.09}) {
            rows.push_back(synthetic_row("syn", "amplitude_damping/exact", d, p, 0.072));
        }
    }
    const auto rep = report_results(rows);
    ASSERT_EQ(rep.thresholds.size(), 1u);
    ASSERT_TRUE(rep.thresholds[0].threshold.has_value());
    EXPECT_NEAR(*rep.thresholds[0].threshold, 0.072, 2e-3);
    EXPECT_LT(rep.thresholds[0].ci_low, rep.thresholds[0].ci_high);
    EXPECT_NE(rep.text.find("threshold 0.07"), std::string::npos) << rep.text;
    EXPECT_NE(rep.text.find("95% CI"), std::string::npos);
    EXPECT_EQ(std::count(rep.long_csv.begin(), rep.long_csv.end(), '\n'), 16);
}

TEST(Report, SingleDistanceSkipsThreshold) {
    std::vector<CsvRow> rows{synthetic_row("one", "depolarizing/exact", 3, 0.05, 0.07), synthetic_row("one", "depolarizing/exact", 3, 0.06, 0.07)};
    const auto rep = report_results(rows);
    ASSERT_EQ(rep.thresholds.size(), 1u);
    EXPECT_FALSE(rep.thresholds[0].threshold.has_value());
    EXPECT_NE(rep.text.find("single distance, threshold skipped"), std::string::npos);
}

TEST(Report, TwoModesSideBySide) {
    std::vector<CsvRow> rows;
    for (std::size_t d : {3, 5}) {
        for (double p : {0.0005, 0.001, 0.002, 0.003, 0.004, 0.005}) {
            rows.push_back(synthetic_row("coh", "coherent_z/exact", d, p, 0.0009));
            rows.push_back(synthetic_row("coh", "coherent_z/pta", d, p, 0.0034));
        }
    }
    const auto rep = report_results(rows);
    ASSERT_EQ(rep.thresholds.size(), 2u);
    ASSERT_TRUE(rep.thresholds[0].threshold && rep.thresholds[1].threshold);
    const double ratio = *rep.thresholds[1].threshold / *rep.thresholds[0].threshold;
    EXPECT_NEAR(ratio, 0.0034 / 0.0009, 0.3);
    EXPECT_NE(rep.text.find("ratio"), std::string::npos) << rep.text;
}
