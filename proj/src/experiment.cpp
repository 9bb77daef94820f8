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

#include "pfsr/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "pfsr/decoder.hpp"
#include "pfsr/errors.hpp"
#include "pfsr/memory.hpp"
#include "pfsr/montecarlo.hpp"
#include "pfsr/oracle/equivalence.hpp"
#include "pfsr/surface_code.hpp"

namespace pfsr {

using nlohmann::json;

namespace {

struct KindName {
    ExperimentKind kind;
    const char *name;
};

constexpr KindName kKinds[] = {
    {ExperimentKind::MemoryThreshold, "memory_threshold"},
    {ExperimentKind::TruncationSweep, "truncation_sweep"},
    {ExperimentKind::ScheduleCompare, "schedule_compare"},
    {ExperimentKind::ImportanceSampling, "importance_sampling"},
    {ExperimentKind::OracleSuite, "oracle_suite"},
};

const char *const kCsvHeader = "experiment_id,d,mode,channel,param,k_or_total,shots,failures,discards,rate,stderr";

std::string fmt(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string channel_label(const ExperimentConfig &c) { return channel_name(c.channel) + "/" + mode_name(c.noise_mode); }

// Reads `key` from `j` into `out` when present, reporting type errors with the field name.
template <typename T>
void read(const json &j, const char *key, T &out) {
    if (!j.contains(key)) {
        return;
    }
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception &e) {
        throw ConfigError(std::string("field `") + key + "`: " + e.what());
    }
}

template <typename T>
void read_optional(const json &j, const char *key, std::optional<T> &out) {
    if (!j.contains(key) || j.at(key).is_null()) {
        return;
    }
    T v{};
    read(j, key, v);
    out = v;
}

template <typename T, typename Parse>
void read_enum(const json &j, const char *key, T &out, Parse parse) {
    std::string text;
    read(j, key, text);
    if (j.contains(key)) {
        try {
            out = parse(text);
        } catch (const std::exception &e) {
            throw ConfigError(std::string("field `") + key + "`: " + e.what());
        }
    }
}

std::size_t resolve_workers(std::size_t workers) {
    return workers > 0 ? workers : std::max(1u, std::thread::hardware_concurrency());
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    Rng rng = make_rng(seed, {a, b, 0x5eed});
    return rng();
}

MemoryConfig memory_config(const ExperimentConfig &c, std::size_t d, double rate, MemoryMode mode, double epsilon) {
    MemoryConfig m;
    m.distance = d;
    m.basis = c.basis;
    m.mode = mode;
    m.channel = channel_at_rate(c.channel, rate, c.noise_mode);
    m.flip_probability = c.flip_probability;
    m.epsilon = epsilon;
    m.rounds = c.rounds;
    return m;
}

CsvRow row_of(const std::string &id, const std::string &mode, const std::string &channel, const ExperimentResult &r) {
    return {id, r.distance, mode, channel, r.param, "total", r.shots, r.failures, r.discards, r.rate, r.std_error};
}

std::string group_key(const CsvRow &r) {
    std::string key = r.experiment_id + " | " + r.mode + " | " + r.channel;
    if (r.k_or_total == "estimate") {
        key += " | importance";
    }
    return key;
}

// Rows grouped into threshold curves, keyed by experiment id, mode and channel.
std::map<std::string, std::vector<ExperimentResult>> curves(const std::vector<CsvRow> &rows) {
    std::map<std::string, std::vector<ExperimentResult>> out;
    for (const auto &r : rows) {
        if (!r.param || (r.k_or_total != "total" && r.k_or_total != "estimate")) {
            continue;
        }
        ExperimentResult e;
        e.param = *r.param;
        e.distance = r.d;
        e.shots = r.shots;
        e.failures = r.failures;
        e.discards = r.discards;
        e.rate = r.rate;
        e.std_error = r.std_error;
        e.weighted = r.k_or_total == "estimate" || r.channel.find("quasiprobability") != std::string::npos;
        out[group_key(r)].push_back(e);
    }
    return out;
}

GroupThreshold threshold_of(const std::string &group, const std::vector<ExperimentResult> &points, std::uint64_t seed) {
    GroupThreshold g{group, std::nullopt, 0, 0, ""};
    std::set<std::size_t> ds;
    for (const auto &p : points) {
        ds.insert(p.distance);
    }
    if (ds.size() < 2) {
        g.note = "single distance, threshold skipped";
        return g;
    }
    try {
        const auto est = estimate_threshold(points, 200, seed);
        g.threshold = est.threshold;
        g.ci_low = est.ci_low;
        g.ci_high = est.ci_high;
        g.note = std::to_string(est.bootstrap_used) + "/200 bootstrap resamples crossed";
    } catch (const NoCrossingError &e) {
        g.note = e.what();
    } catch (const PreconditionError &e) {
        g.note = e.what();
    }
    return g;
}

json thresholds_json(const std::vector<CsvRow> &rows, std::uint64_t seed) {
    json out = json::array();
    for (const auto &[group, points] : curves(rows)) {
        const auto g = threshold_of(group, points, seed);
        json t = {{"group", g.group}, {"note", g.note}};
        if (g.threshold) {
            t["threshold"] = *g.threshold;
            t["ci"] = {g.ci_low, g.ci_high};
        } else {
            t["threshold"] = nullptr;
        }
        out.push_back(t);
    }
    return out;
}

json point_json(const std::string &id, const std::string &mode, const ExperimentResult &r) {
    return {{"experiment_id", id},
            {"d", r.distance},
            {"mode", mode},
            {"param", r.param},
            {"weighted", r.weighted},
            {"max_entries", r.max_entries},
            {"mean_log2_max_entries", r.mean_log2_max_entries},
            {"truncation_fallbacks", r.truncation_fallbacks},
            {"errors", r.errors}};
}

void log_line(std::ostream *log, const std::string &line) {
    if (log) {
        *log << line << std::endl;
    }
}

// Memory sweeps over every (variant, distance, grid point); variant is an epsilon or a mode.
void run_sweeps(const ExperimentConfig &c, const std::vector<std::pair<std::string, std::pair<MemoryMode, double>>> &variants,
                RunOutput &out, json &points, std::ostream *log) {
    const std::size_t workers = resolve_workers(c.workers);
    for (std::size_t v = 0; v < variants.size(); v++) {
        const auto &[id, setting] = variants[v];
        const auto [mode, epsilon] = setting;
        for (std::size_t di = 0; di < c.distances.size(); di++) {
            for (std::size_t pi = 0; pi < c.grid.size(); pi++) {
                const auto cfg = memory_config(c, c.distances[di], c.grid[pi], mode, epsilon);
                const std::uint64_t stream = (std::uint64_t{v} << 40) | (std::uint64_t{di} << 20) | pi;
                auto r = estimate_rate(cfg, c.shots, {c.seed, stream, workers});
                r.param = c.grid[pi];
                out.rows.push_back(row_of(id, memory_mode_name(mode), channel_label(c), r));
                out.trajectories += r.shots;
                out.discards += r.discards;
                points.push_back(point_json(id, memory_mode_name(mode), r));
                log_line(log, id + " d=" + std::to_string(r.distance) + " param=" + fmt(r.param) + " rate=" + fmt(r.rate) +
                                  " +- " + fmt(r.std_error) + " max_entries=" + std::to_string(r.max_entries));
            }
        }
    }
}

void run_importance(const ExperimentConfig &c, RunOutput &out, json &manifest, std::ostream *log) {
    const std::size_t workers = resolve_workers(c.workers);
    const std::string mode = memory_mode_name(c.mode), channel = channel_label(c);
    json per_d = json::array();
    for (std::size_t di = 0; di < c.distances.size(); di++) {
        const std::size_t d = c.distances[di];
        const auto cfg = memory_config(c, d, c.grid.front(), c.mode, 0);
        const MemoryExperiment experiment(cfg);
        const MemoryDecoder decoder(experiment);
        const auto model = enumerate_faults(experiment.circuit(), cfg.channel, experiment.flip_probability());
        const std::size_t k_max = std::min(c.k_max, model.size());
        std::vector<std::pair<std::size_t, std::size_t>> pilot_plan;
        for (std::size_t k = c.k_min; k <= k_max; k++) {
            pilot_plan.push_back({k, c.pilot_shots});
        }
        const auto pilot = sample_fault_counts(experiment, decoder, model, pilot_plan, derive_seed(c.seed, di, 0), workers);
        const auto plan = allocate_shots(pilot, c.grid, c.budget);
        const auto main = sample_fault_counts(experiment, decoder, model, plan, derive_seed(c.seed, di, 1), workers);

        FaultCountEstimate merged = pilot;
        for (const auto &m : main.per_k) {
            for (auto &p : merged.per_k) {
                if (p.k == m.k) {
                    p.shots += m.shots;
                    p.failures += m.failures;
                    p.discards += m.discards;
                }
            }
        }
        const std::size_t floor_k = (d + 1) / 2;
        std::size_t violations = 0, total_shots = 0, total_failures = 0, total_discards = 0;
        json plan_json = json::array();
        for (const auto &[k, shots] : plan) {
            plan_json.push_back({k, shots});
        }
        for (const auto &k : merged.per_k) {
            if (k.k < floor_k) {
                violations += k.failures;
            }
            total_shots += k.shots;
            total_failures += k.failures;
            total_discards += k.discards;
            const double f = k.fail_rate();
            const double kept = static_cast<double>(k.shots - k.discards);
            out.rows.push_back({c.id, d, mode, channel, std::nullopt, std::to_string(k.k), k.shots, static_cast<double>(k.failures),
                                k.discards, f, kept > 0 ? std::sqrt(f * (1 - f) / kept) : 0.0});
        }
        if (violations > 0) {
            log_line(log, "warning: " + std::to_string(violations) + " failures below " + std::to_string(floor_k) +
                              " faults at d=" + std::to_string(d));
        }
        out.trajectories += total_shots;
        out.discards += total_discards;
        json tails = json::array();
        for (const auto &pt : importance_estimate(merged, c.grid)) {
            out.rows.push_back({c.id, d, mode, channel, pt.p, "estimate", total_shots, static_cast<double>(total_failures),
                                total_discards, pt.rate, pt.std_error});
            tails.push_back({{"p", pt.p}, {"tail_above", pt.tail_above}, {"tail_below", pt.tail_below}});
            log_line(log, c.id + " d=" + std::to_string(d) + " p=" + fmt(pt.p) + " importance=" + fmt(pt.rate) + " +- " +
                              fmt(pt.std_error));
        }
        if (c.brute_force_shots > 0) {
            for (std::size_t pi = 0; pi < c.grid.size(); pi++) {
                auto r = estimate_rate(memory_config(c, d, c.grid[pi], c.mode, 0), c.brute_force_shots,
                                       {c.seed, (std::uint64_t{1} << 40) | (std::uint64_t{di} << 20) | pi, workers});
                r.param = c.grid[pi];
                out.rows.push_back(row_of(c.id, mode, channel, r));
                out.trajectories += r.shots;
                out.discards += r.discards;
                log_line(log, c.id + " d=" + std::to_string(d) + " p=" + fmt(r.param) + " direct=" + fmt(r.rate) + " +- " +
                                  fmt(r.std_error));
            }
        }
        per_d.push_back({{"d", d},
                         {"num_locations", model.size()},
                         {"channel_sites", model.num_channel},
                         {"reset_sites", model.num_bit_flip},
                         {"measurement_sites", model.num_measurement_flip},
                         {"plan", plan_json},
                         {"zero_block_violations", violations},
                         {"tails", tails}});
    }
    manifest["importance"] = per_d;
}

void run_oracle(const ExperimentConfig &c, RunOutput &out, json &manifest, std::ostream *log) {
    oracle::EquivalenceOptions o;
    o.circuits = c.circuits;
    o.max_qubits = std::min(c.max_qubits, oracle_max_qubits());
    o.max_depth = c.max_depth;
    o.seed = c.seed;
    const auto rep = oracle::run_equivalence_suite(o);
    const double rate = static_cast<double>(rep.failures) / static_cast<double>(rep.circuits);
    out.rows.push_back({c.id, o.max_qubits, "oracle", "mixed", std::nullopt, "total", rep.circuits, static_cast<double>(rep.failures), 0,
                        rate, std::sqrt(rate * (1 - rate) / static_cast<double>(rep.circuits))});
    out.trajectories += rep.circuits;
    manifest["oracle"] = {{"operations", rep.operations},   {"measurements", rep.measurements}, {"channels", rep.channels},
                          {"min_fidelity", rep.min_fidelity}, {"max_entries", rep.max_entries},   {"messages", rep.messages}};
    log_line(log, "oracle: " + std::to_string(rep.circuits - rep.failures) + "/" + std::to_string(rep.circuits) +
                      " circuits agree, min fidelity " + fmt(rep.min_fidelity));
}

}  // namespace

std::string experiment_kind_name(ExperimentKind k) {
    for (const auto &e : kKinds) {
        if (e.kind == k) {
            return e.name;
        }
    }
    throw PreconditionError("unknown experiment kind");
}

ExperimentKind parse_experiment_kind(const std::string &text) {
    for (const auto &e : kKinds) {
        if (text == e.name) {
            return e.kind;
        }
    }
    throw ConfigError("unknown experiment kind '" + text + "'");
}

NoiseChannel channel_at_rate(ChannelKind kind, double rate, NoiseMode mode) {
    NoiseChannel ch{kind, rate, mode};
    if (kind == ChannelKind::CoherentZ) {
        ch.param = 2 * std::asin(std::sqrt(std::clamp(rate, 0.0, 1.0)));
    } else if (kind == ChannelKind::None) {
        ch.param = 0;
    }
    return ch;
}

ExperimentConfig parse_config(const std::string &text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("not valid JSON: ") + e.what());
    }
    if (j.is_object() && j.contains("config") && j.at("config").is_object()) {
        j = j.at("config");
    }
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    ExperimentConfig c;
    static const std::set<std::string> known = {
        "schema_version", "id",       "kind",   "distances",   "grid",        "channel",  "noise_mode",
        "mode",           "basis",    "epsilon", "flip_probability", "rounds", "shots",    "seed",
        "workers",        "output",   "max_discard_fraction", "epsilons", "modes", "k_min", "k_max",
        "pilot_shots",    "budget",   "brute_force_shots", "circuits", "max_qubits", "max_depth"};
    for (const auto &[key, value] : j.items()) {
        if (!known.contains(key)) {
            throw ConfigError("field `" + key + "`: unknown field");
        }
    }
    read(j, "schema_version", c.schema_version);
    read(j, "id", c.id);
    read_enum(j, "kind", c.kind, parse_experiment_kind);
    read(j, "distances", c.distances);
    read(j, "grid", c.grid);
    read_enum(j, "channel", c.channel, parse_channel_kind);
    read_enum(j, "noise_mode", c.noise_mode, parse_noise_mode);
    read_enum(j, "mode", c.mode, parse_memory_mode);
    read_enum(j, "basis", c.basis, parse_basis);
    read(j, "epsilon", c.epsilon);
    read_optional(j, "flip_probability", c.flip_probability);
    read_optional(j, "rounds", c.rounds);
    read(j, "shots", c.shots);
    read(j, "seed", c.seed);
    read(j, "workers", c.workers);
    read(j, "output", c.output);
    read(j, "max_discard_fraction", c.max_discard_fraction);
    read(j, "epsilons", c.epsilons);
    std::vector<std::string> modes;
    read(j, "modes", modes);
    for (std::size_t i = 0; i < modes.size(); i++) {
        try {
            c.modes.push_back(parse_memory_mode(modes[i]));
        } catch (const std::exception &e) {
            throw ConfigError("field `modes[" + std::to_string(i) + "]`: " + e.what());
        }
    }
    read(j, "k_min", c.k_min);
    read(j, "k_max", c.k_max);
    read(j, "pilot_shots", c.pilot_shots);
    read(j, "budget", c.budget);
    read(j, "brute_force_shots", c.brute_force_shots);
    read(j, "circuits", c.circuits);
    read(j, "max_qubits", c.max_qubits);
    read(j, "max_depth", c.max_depth);
    check_config(c);
    return c;
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string config_to_json(const ExperimentConfig &c) {
    json modes = json::array();
    for (auto m : c.modes) {
        modes.push_back(memory_mode_name(m));
    }
    json j = {{"schema_version", c.schema_version},
              {"id", c.id},
              {"kind", experiment_kind_name(c.kind)},
              {"distances", c.distances},
              {"grid", c.grid},
              {"channel", channel_name(c.channel)},
              {"noise_mode", mode_name(c.noise_mode)},
              {"mode", memory_mode_name(c.mode)},
              {"basis", basis_name(c.basis)},
              {"epsilon", c.epsilon},
              {"flip_probability", c.flip_probability ? json(*c.flip_probability) : json(nullptr)},
              {"rounds", c.rounds ? json(*c.rounds) : json(nullptr)},
              {"shots", c.shots},
              {"seed", c.seed},
              {"workers", c.workers},
              {"output", c.output},
              {"max_discard_fraction", c.max_discard_fraction},
              {"epsilons", c.epsilons},
              {"modes", modes},
              {"k_min", c.k_min},
              {"k_max", c.k_max},
              {"pilot_shots", c.pilot_shots},
              {"budget", c.budget},
              {"brute_force_shots", c.brute_force_shots},
              {"circuits", c.circuits},
              {"max_qubits", c.max_qubits},
              {"max_depth", c.max_depth}};
    return j.dump(2);
}

void check_config(const ExperimentConfig &c) {
    auto fail = [](const std::string &field, const std::string &why) { throw ConfigError("field `" + field + "`: " + why); };
    if (c.schema_version != 1) {
        fail("schema_version", "only version 1 is supported");
    }
    if (c.id.empty() || c.id.find_first_of(",\n\"") != std::string::npos) {
        fail("id", "must be non-empty without commas, quotes or newlines");
    }
    if (c.kind == ExperimentKind::OracleSuite) {
        if (c.circuits < 1) {
            fail("circuits", "must be at least 1");
        }
        if (c.max_qubits < 1 || c.max_qubits > 16) {
            fail("max_qubits", "must be between 1 and 16");
        }
        if (c.max_depth < 1) {
            fail("max_depth", "must be at least 1");
        }
        return;
    }
    if (c.distances.empty()) {
        fail("distances", "at least one distance is required");
    }
    for (std::size_t i = 0; i < c.distances.size(); i++) {
        if (c.distances[i] < 3 || c.distances[i] % 2 == 0) {
            fail("distances[" + std::to_string(i) + "]", "distance " + std::to_string(c.distances[i]) + " must be odd and at least 3");
        }
    }
    if (c.grid.empty()) {
        fail("grid", "at least one grid point is required");
    }
    for (std::size_t i = 0; i < c.grid.size(); i++) {
        const std::string field = "grid[" + std::to_string(i) + "]";
        if (i > 0 && !(c.grid[i] > c.grid[i - 1])) {
            fail(field, "grid must be strictly increasing");
        }
        if (!(c.grid[i] >= 0 && c.grid[i] <= 1)) {
            fail(field, "error rates lie in [0, 1]");
        }
        try {
            channel_at_rate(c.channel, c.grid[i], c.noise_mode).validate();
        } catch (const std::exception &e) {
            fail(field, e.what());
        }
    }
    if (c.shots < 1) {
        fail("shots", "must be at least 1");
    }
    if (!(c.epsilon >= 0)) {
        fail("epsilon", "must be non-negative");
    }
    if (c.flip_probability && !(*c.flip_probability >= 0 && *c.flip_probability <= 1)) {
        fail("flip_probability", "must lie in [0, 1]");
    }
    if (c.rounds && *c.rounds < 1) {
        fail("rounds", "must be at least 1");
    }
    if (!(c.max_discard_fraction >= 0 && c.max_discard_fraction <= 1)) {
        fail("max_discard_fraction", "must lie in [0, 1]");
    }
    if (c.kind == ExperimentKind::TruncationSweep) {
        if (c.epsilons.empty()) {
            fail("epsilons", "a truncation sweep needs at least one cutoff");
        }
        for (std::size_t i = 0; i < c.epsilons.size(); i++) {
            if (!(c.epsilons[i] >= 0)) {
                fail("epsilons[" + std::to_string(i) + "]", "must be non-negative");
            }
        }
    }
    if (c.kind == ExperimentKind::ImportanceSampling) {
        if (c.channel != ChannelKind::Depolarizing && c.channel != ChannelKind::BitFlip && c.channel != ChannelKind::PhaseFlip) {
            fail("channel", "importance sampling needs a stochastic Pauli channel");
        }
        if (c.noise_mode != NoiseMode::Exact) {
            fail("noise_mode", "importance sampling uses the exact Pauli channel");
        }
        if (c.k_min > c.k_max) {
            fail("k_min", "must not exceed k_max");
        }
        if (c.pilot_shots < 1) {
            fail("pilot_shots", "must be at least 1");
        }
        if (c.budget < 1) {
            fail("budget", "must be at least 1");
        }
    }
}

std::string rows_to_csv(const std::vector<CsvRow> &rows) {
    std::ostringstream out;
    out << kCsvHeader << "\n";
    for (const auto &r : rows) {
        out << r.experiment_id << "," << r.d << "," << r.mode << "," << r.channel << "," << (r.param ? fmt(*r.param) : "") << ","
            << r.k_or_total << "," << r.shots << "," << fmt(r.failures) << "," << r.discards << "," << fmt(r.rate) << ","
            << fmt(r.std_error) << "\n";
    }
    return out.str();
}

std::vector<CsvRow> parse_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw ConfigError("results CSV must start with the header `" + std::string(kCsvHeader) + "`");
    }
    std::vector<CsvRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        line_no++;
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            f.push_back(cell);
        }
        if (line.back() == ',') {
            f.push_back("");
        }
        if (f.size() != 11) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 11 columns, found " + std::to_string(f.size()));
        }
        try {
            CsvRow r;
            r.experiment_id = f[0];
            r.d = std::stoul(f[1]);
            r.mode = f[2];
            r.channel = f[3];
            if (!f[4].empty()) {
                r.param = std::stod(f[4]);
            }
            r.k_or_total = f[5];
            r.shots = std::stoul(f[6]);
            r.failures = std::stod(f[7]);
            r.discards = std::stoul(f[8]);
            r.rate = std::stod(f[9]);
            r.std_error = std::stod(f[10]);
            if (r.discards > r.shots) {
                throw ConfigError("discards exceed shots");
            }
            rows.push_back(r);
        } catch (const std::exception &e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return rows;
}

RunOutput run_experiment(const ExperimentConfig &c, std::ostream *log) {
    check_config(c);
    RunOutput out;
    json manifest = {{"schema_version", 1}, {"config", json::parse(config_to_json(c))}};
    json points = json::array();
    switch (c.kind) {
        case ExperimentKind::MemoryThreshold:
            run_sweeps(c, {{c.id, {c.mode, c.epsilon}}}, out, points, log);
            break;
        case ExperimentKind::TruncationSweep: {
            std::vector<std::pair<std::string, std::pair<MemoryMode, double>>> variants;
            for (double eps : c.epsilons) {
                variants.push_back({c.id + "/eps=" + fmt(eps), {c.mode, eps}});
            }
            run_sweeps(c, variants, out, points, log);
            break;
        }
        case ExperimentKind::ScheduleCompare: {
            std::vector<std::pair<std::string, std::pair<MemoryMode, double>>> variants;
            const auto modes = c.modes.empty() ? std::vector{MemoryMode::CircuitParallel, MemoryMode::CircuitLayered} : c.modes;
            for (auto m : modes) {
                variants.push_back({c.id, {m, c.epsilon}});
            }
            run_sweeps(c, variants, out, points, log);
            break;
        }
        case ExperimentKind::ImportanceSampling:
            run_importance(c, out, manifest, log);
            break;
        case ExperimentKind::OracleSuite:
            run_oracle(c, out, manifest, log);
            break;
    }
    if (!points.empty()) {
        manifest["points"] = points;
    }
    if (c.kind != ExperimentKind::OracleSuite) {
        manifest["thresholds"] = thresholds_json(out.rows, c.seed);
    }
    manifest["trajectories"] = out.trajectories;
    manifest["discards"] = out.discards;
    out.manifest = manifest.dump(2);
    return out;
}

std::string write_outputs(const ExperimentConfig &c, const RunOutput &out) {
    namespace fs = std::filesystem;
    const fs::path dir(c.output);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory '" + c.output + "': " + ec.message());
    }
    const auto csv = dir / (c.id + ".csv");
    const auto manifest = dir / (c.id + ".manifest.json");
    for (const auto &[path, body] : {std::pair{csv, rows_to_csv(out.rows)}, std::pair{manifest, out.manifest + "\n"}}) {
        std::ofstream f(path);
        f << body;
        if (!f) {
            throw std::runtime_error("cannot write '" + path.string() + "'");
        }
    }
    return csv.string();
}

std::string ValidationReport::text() const {
    std::ostringstream out;
    for (const auto &l : info) {
        out << l << "\n";
    }
    for (const auto &l : warnings) {
        out << "warning: " << l << "\n";
    }
    for (const auto &l : errors) {
        out << "error: " << l << "\n";
    }
    out << (ok() ? "config OK" : "config INVALID") << "\n";
    return out.str();
}

ValidationReport validate_experiment(const ExperimentConfig &c) {
    ValidationReport rep;
    try {
        check_config(c);
    } catch (const ConfigError &e) {
        rep.errors.push_back(e.what());
        return rep;
    }
    rep.info.push_back("experiment " + c.id + " (" + experiment_kind_name(c.kind) + ")");
    if (c.kind == ExperimentKind::OracleSuite) {
        rep.info.push_back(std::to_string(c.circuits) + " random circuits on up to " + std::to_string(std::min(c.max_qubits, oracle_max_qubits())) +
                           " qubits, depth up to " + std::to_string(c.max_depth));
        return rep;
    }
    std::vector<MemoryMode> modes{c.mode};
    if (c.kind == ExperimentKind::ScheduleCompare) {
        modes = c.modes.empty() ? std::vector{MemoryMode::CircuitParallel, MemoryMode::CircuitLayered} : c.modes;
    }
    for (auto d : c.distances) {
        try {
            const auto code = build_code(d);
            std::size_t nx = 0;
            for (const auto &s : code.stabilizers()) {
                nx += s.type == PauliType::X;
            }
            rep.info.push_back("d=" + std::to_string(d) + ": " + std::to_string(code.num_data()) + " data qubits, " +
                               std::to_string(code.num_stabilizers()) + " stabilizers (" + std::to_string(nx) + " X, " +
                               std::to_string(code.num_stabilizers() - nx) + " Z)");
            check_phenomenological_round(code, phenomenological_schedule(code));
            std::size_t n = 0;
            for (auto mode : modes) {
                const auto cfg = memory_config(c, d, c.grid.back(), mode, c.epsilon);
                const MemoryExperiment e(cfg);
                n = std::max(n, e.circuit().num_qubits);
                std::size_t sites[3] = {0, 0, 0};
                for (const auto &loc : e.circuit().locations) {
                    sites[static_cast<int>(loc.kind)]++;
                }
                rep.info.push_back("  " + memory_mode_name(mode) + ": " + std::to_string(e.circuit().rounds) + " rounds, " +
                                   std::to_string(e.circuit().locations.size()) + " fault locations (" + std::to_string(sites[0]) +
                                   " channel, " + std::to_string(sites[1]) + " reset, " + std::to_string(sites[2]) + " measurement)");
            }
            const std::size_t words = (n + 63) / 64, label_words = (code.num_stabilizers() + n + 63) / 64;
            const double bytes = std::ldexp(1.0, static_cast<int>(d)) * (16.0 + 8.0 * (2 * words + label_words) + 32.0);
            rep.info.push_back("  worst-case state (2^d entries): about " + fmt(std::ceil(bytes / 1024)) + " KiB per trajectory");
        } catch (const std::exception &e) {
            rep.errors.push_back("d=" + std::to_string(d) + ": " + e.what());
        }
        if (c.kind == ExperimentKind::ImportanceSampling) {
            if (d < c.k_min || d > c.k_max) {
                rep.warnings.push_back("k window [" + std::to_string(c.k_min) + ", " + std::to_string(c.k_max) + "] excludes k=d=" +
                                       std::to_string(d) + ", where the leading contributions sit");
            }
            if (c.k_min < (d + 1) / 2) {
                rep.info.push_back("  k < " + std::to_string((d + 1) / 2) + " cannot fail at d=" + std::to_string(d) +
                                   "; those shots only confirm the zero block");
            }
        }
    }
    const bool truncated = c.epsilon > 0 || (c.kind == ExperimentKind::TruncationSweep &&
                                              std::all_of(c.epsilons.begin(), c.epsilons.end(), [](double e) { return e > 0; }));
    if (c.noise_mode == NoiseMode::Exact && !truncated && c.mode != MemoryMode::Phenomenological &&
        (c.channel == ChannelKind::AmplitudeDamping || c.channel == ChannelKind::CoherentZ)) {
        rep.warnings.push_back("untruncated circuit-level " + channel_name(c.channel) + " runs can grow far beyond 2^d entries; set epsilon");
    }
    return rep;
}

Report report_results(const std::vector<CsvRow> &rows) {
    Report rep;
    std::ostringstream text, csv;
    csv << "group,d,param,rate,stderr,lower,upper\n";
    for (const auto &[group, points] : curves(rows)) {
        text << group << "\n";
        auto sorted = points;
        std::sort(sorted.begin(), sorted.end(),
                  [](const auto &a, const auto &b) { return std::pair(a.distance, a.param) < std::pair(b.distance, b.param); });
        for (const auto &p : sorted) {
            char line[160];
            std::snprintf(line, sizeof(line), "  d=%-3zu param=%-10.6g rate=%-12.6g +- %-10.3g (%zu shots)\n", p.distance, p.param, p.rate,
                          p.std_error, p.shots);
            text << line;
            csv << group << "," << p.distance << "," << fmt(p.param) << "," << fmt(p.rate) << "," << fmt(p.std_error) << ","
                << fmt(std::max(0.0, p.rate - p.std_error)) << "," << fmt(p.rate + p.std_error) << "\n";
        }
        auto g = threshold_of(group, points, 1);
        if (g.threshold) {
            char line[160];
            std::snprintf(line, sizeof(line), "  threshold %.5g  (95%% CI %.5g .. %.5g; %s)\n", *g.threshold, g.ci_low, g.ci_high,
                          g.note.c_str());
            text << line;
        } else {
            text << "  " << g.note << "\n";
        }
        rep.thresholds.push_back(std::move(g));
    }
    std::map<std::string, std::vector<const CsvRow *>> per_k;
    for (const auto &r : rows) {
        if (!r.param) {
            per_k[r.experiment_id + " | " + r.mode + " | " + r.channel + " | d=" + std::to_string(r.d)].push_back(&r);
        }
    }
    for (const auto &[group, list] : per_k) {
        text << group << " (fault counts)\n";
        for (const auto *r : list) {
            char line[160];
            std::snprintf(line, sizeof(line), "  k=%-4s shots=%-8zu failures=%-8.0f rate=%.6g\n", r->k_or_total.c_str(), r->shots,
                          r->failures, r->rate);
            text << line;
        }
    }
    std::vector<const GroupThreshold *> found;
    for (const auto &g : rep.thresholds) {
        if (g.threshold) {
            found.push_back(&g);
        }
    }
    if (found.size() >= 2) {
        text << "threshold comparison\n";
        for (std::size_t i = 1; i < found.size(); i++) {
            char line[400];
            std::snprintf(line, sizeof(line), "  [%s] %.5g vs [%s] %.5g: ratio %.4g\n", found[0]->group.c_str(), *found[0]->threshold,
                          found[i]->group.c_str(), *found[i]->threshold, *found[i]->threshold / *found[0]->threshold);
            text << line;
        }
    }
    rep.text = text.str();
    rep.long_csv = csv.str();
    return rep;
}

}  // namespace pfsr
