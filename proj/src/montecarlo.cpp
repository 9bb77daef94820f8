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

#include "pfsr/montecarlo.hpp"

#include <algorithm>
#include <boost/math/distributions/binomial.hpp>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "pfsr/errors.hpp"

namespace pfsr {

namespace {

// Calls fn(i) for i in [0, n) on `workers` threads pulling indices from a shared counter.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn fn) {
    workers = std::max<std::size_t>(1, std::min(workers, n));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; i++) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; w++) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                fn(i);
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
}

}  // namespace

ExperimentResult estimate_rate(const MemoryConfig &config, std::size_t shots, const RateOptions &options) {
    const MemoryExperiment experiment(config);
    const MemoryDecoder decoder(experiment);
    struct Shot {
        double value = 0;
        bool discarded = false;
        std::size_t max_entries = 1;
        std::size_t fallbacks = 0;
        std::string error;
    };
    std::vector<Shot> outcome(shots);
    parallel_for(shots, options.workers, [&](std::size_t i) {
        Rng rng = make_rng(options.seed, {options.stream, i});
        Shot &s = outcome[i];
        try {
            const auto t = experiment.run(rng);
            s.value = decoder.failed(t.record) ? t.weight.value() : 0.0;
            s.max_entries = t.max_entries;
            s.fallbacks = t.truncation_fallbacks;
        } catch (const std::exception &e) {
            s.discarded = true;
            s.error = e.what();
        }
    });

    ExperimentResult r;
    r.param = measurement_flip_probability(config.channel);
    r.distance = config.distance;
    r.shots = shots;
    r.weighted = config.channel.mode == NoiseMode::Quasiprobability && !config.channel.is_pauli();
    double sum_sq = 0, log_sum = 0;
    for (const auto &s : outcome) {
        if (s.discarded) {
            r.discards++;
            if (r.errors.size() < 10) {
                r.errors.push_back(s.error);
            }
            continue;
        }
        r.failures += s.value;
        sum_sq += s.value * s.value;
        r.max_entries = std::max(r.max_entries, s.max_entries);
        log_sum += std::log2(static_cast<double>(s.max_entries));
        r.truncation_fallbacks += s.fallbacks;
    }
    const double kept = static_cast<double>(r.kept());
    if (kept > 0) {
        r.rate = r.failures / kept;
        r.mean_log2_max_entries = log_sum / kept;
        if (r.weighted) {
            const double var = kept > 1 ? (sum_sq - kept * r.rate * r.rate) / (kept - 1) : 0.0;
            r.std_error = std::sqrt(std::max(0.0, var) / kept);
        } else {
            r.std_error = std::sqrt(r.rate * (1 - r.rate) / kept);
        }
    }
    return r;
}

namespace {

struct Curve {
    std::size_t distance;
    std::vector<double> params;
    std::vector<double> rates;
    std::vector<double> floors;  // smallest resolvable rate, used in place of zero before taking logs
};

std::vector<Curve> curves_of(const std::vector<ExperimentResult> &results) {
    std::map<std::size_t, std::vector<const ExperimentResult *>> by_d;
    for (const auto &r : results) {
        by_d[r.distance].push_back(&r);
    }
    if (by_d.size() < 2) {
        throw PreconditionError("threshold estimation needs at least two distances");
    }
    std::vector<Curve> curves;
    for (auto &[d, points] : by_d) {
        std::sort(points.begin(), points.end(), [](auto *a, auto *b) { return a->param < b->param; });
        Curve c{d, {}, {}, {}};
        for (const auto *p : points) {
            c.params.push_back(p->param);
            c.rates.push_back(p->rate);
            c.floors.push_back(0.5 / std::max<double>(1.0, static_cast<double>(p->kept())));
        }
        if (!curves.empty() && c.params != curves.front().params) {
            throw PreconditionError("all distances must share one parameter grid");
        }
        curves.push_back(std::move(c));
    }
    if (curves.front().params.size() < 2) {
        throw PreconditionError("threshold estimation needs at least two grid points");
    }
    return curves;
}

std::string describe(const std::vector<Curve> &curves) {
    std::ostringstream out;
    for (const auto &c : curves) {
        out << "\n  d=" << c.distance << ":";
        for (std::size_t i = 0; i < c.params.size(); i++) {
            out << " " << c.params[i] << "->" << c.rates[i];
        }
    }
    return out.str();
}

// First grid interval where the larger code goes from better to not better.
std::optional<double> crossing(const Curve &small, const Curve &large) {
    const std::size_t n = small.params.size();
    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; i++) {
        diff[i] = std::log(std::max(large.rates[i], large.floors[i])) - std::log(std::max(small.rates[i], small.floors[i]));
    }
    for (std::size_t i = 0; i + 1 < n; i++) {
        if (diff[i] < 0 && diff[i + 1] >= 0) {
            const double t = -diff[i] / (diff[i + 1] - diff[i]);
            return small.params[i] + t * (small.params[i + 1] - small.params[i]);
        }
    }
    return std::nullopt;
}

std::optional<double> mean_crossing(const std::vector<Curve> &curves, std::vector<double> *pairwise) {
    double sum = 0;
    for (std::size_t i = 0; i + 1 < curves.size(); i++) {
        const auto c = crossing(curves[i], curves[i + 1]);
        if (!c) {
            return std::nullopt;
        }
        sum += *c;
        if (pairwise) {
            pairwise->push_back(*c);
        }
    }
    return sum / static_cast<double>(curves.size() - 1);
}

}  // namespace

double find_crossing(const std::vector<ExperimentResult> &results, std::vector<double> *pairwise) {
    const auto curves = curves_of(results);
    const auto t = mean_crossing(curves, pairwise);
    if (!t) {
        throw NoCrossingError("logical error curves do not cross inside the grid:" + describe(curves));
    }
    return *t;
}

ThresholdEstimate estimate_threshold(const std::vector<ExperimentResult> &results, std::size_t bootstrap, std::uint64_t seed) {
    ThresholdEstimate est;
    est.threshold = find_crossing(results, &est.pairwise);
    const auto base = curves_of(results);
    std::map<std::pair<std::size_t, double>, const ExperimentResult *> lookup;
    for (const auto &r : results) {
        lookup[{r.distance, r.param}] = &r;
    }
    std::vector<double> samples;
    for (std::size_t b = 0; b < bootstrap; b++) {
        Rng rng = make_rng(seed, {b});
        auto curves = base;
        for (auto &c : curves) {
            for (std::size_t i = 0; i < c.params.size(); i++) {
                const auto *r = lookup.at({c.distance, c.params[i]});
                const double kept = static_cast<double>(r->kept());
                if (kept == 0) {
                    continue;
                }
                if (r->weighted) {
                    std::normal_distribution<double> noise(r->rate, r->std_error);
                    c.rates[i] = std::clamp(noise(rng), 0.0, 1.0);
                } else {
                    std::binomial_distribution<std::size_t> draw(r->kept(), std::clamp(r->rate, 0.0, 1.0));
                    c.rates[i] = static_cast<double>(draw(rng)) / kept;
                }
            }
        }
        if (const auto t = mean_crossing(curves, nullptr)) {
            samples.push_back(*t);
        }
    }
    est.bootstrap_used = samples.size();
    est.ci_low = est.ci_high = est.threshold;
    if (!samples.empty()) {
        std::sort(samples.begin(), samples.end());
        auto quantile = [&](double q) {
            const double pos = q * static_cast<double>(samples.size() - 1);
            const auto lo = static_cast<std::size_t>(std::floor(pos));
            const auto hi = std::min(lo + 1, samples.size() - 1);
            return samples[lo] + (pos - static_cast<double>(lo)) * (samples[hi] - samples[lo]);
        };
        est.ci_low = quantile(0.025);
        est.ci_high = quantile(0.975);
    }
    return est;
}

FaultModel enumerate_faults(const Circuit &circuit, const NoiseChannel &channel, double flip_probability) {
    FaultModel model;
    model.channel = channel.kind;
    bool channel_sites = false;
    switch (channel.kind) {
        case ChannelKind::None:
            break;
        case ChannelKind::Depolarizing:
        case ChannelKind::BitFlip:
        case ChannelKind::PhaseFlip:
            channel_sites = channel.param > 0;
            break;
        default:
            throw PreconditionError("fault enumeration needs a stochastic Pauli channel, not " + channel_name(channel.kind));
    }
    const bool flip_sites = flip_probability > 0;
    for (std::size_t loc = 0; loc < circuit.locations.size(); loc++) {
        const auto kind = circuit.locations[loc].kind;
        if (kind == FaultKind::Channel ? channel_sites : flip_sites) {
            model.sites.push_back({loc, kind});
            (kind == FaultKind::Channel ? model.num_channel : kind == FaultKind::BitFlip ? model.num_bit_flip : model.num_measurement_flip)++;
        }
    }
    return model;
}

std::vector<InjectedFault> draw_faults(const FaultModel &model, std::size_t k, Rng &rng) {
    const std::size_t n = model.size();
    if (k > n) {
        throw PreconditionError("more faults requested than there are locations");
    }
    // Floyd's algorithm: a uniform k-subset with k draws.
    std::vector<std::size_t> chosen;
    chosen.reserve(k);
    for (std::size_t j = n - k; j < n; j++) {
        const std::size_t t = std::uniform_int_distribution<std::size_t>(0, j)(rng);
        chosen.push_back(std::find(chosen.begin(), chosen.end(), t) == chosen.end() ? t : j);
    }
    std::sort(chosen.begin(), chosen.end());
    std::vector<InjectedFault> faults;
    for (auto idx : chosen) {
        const auto &site = model.sites[idx];
        char pauli = 'X';
        if (site.kind == FaultKind::Channel) {
            if (model.channel == ChannelKind::Depolarizing) {
                pauli = "XYZ"[std::uniform_int_distribution<int>(0, 2)(rng)];
            } else if (model.channel == ChannelKind::PhaseFlip) {
                pauli = 'Z';
            }
        }
        faults.push_back({site.location, pauli});
    }
    return faults;
}

FixedKOutcome sample_fixed_k(const MemoryExperiment &experiment, const MemoryDecoder &decoder, const FaultModel &model,
                             std::size_t k, Rng &rng) {
    const auto faults = draw_faults(model, k, rng);
    const auto t = experiment.run_with_faults(faults, rng);
    return {decoder.failed(t.record), false};
}

FaultCountEstimate sample_fault_counts(const MemoryExperiment &experiment, const MemoryDecoder &decoder, const FaultModel &model,
                                       const std::vector<std::pair<std::size_t, std::size_t>> &plan, std::uint64_t seed,
                                       std::size_t workers) {
    FaultCountEstimate est;
    est.num_locations = model.size();
    for (const auto &[k, shots] : plan) {
        std::vector<FixedKOutcome> out(shots);
        parallel_for(shots, workers, [&, k = k](std::size_t i) {
            Rng rng = make_rng(seed, {k, i});
            out[i] = sample_fixed_k(experiment, decoder, model, k, rng);
        });
        FaultCountData data{k, shots, 0, 0};
        for (const auto &o : out) {
            data.discards += o.discard;
            data.failures += o.fail && !o.discard;
        }
        est.per_k.push_back(data);
    }
    std::sort(est.per_k.begin(), est.per_k.end(), [](const auto &a, const auto &b) { return a.k < b.k; });
    return est;
}

double binomial_weight(std::size_t n, std::size_t k, double p) {
    if (k > n) {
        return 0;
    }
    if (p <= 0) {
        return k == 0 ? 1 : 0;
    }
    if (p >= 1) {
        return k == n ? 1 : 0;
    }
    return boost::math::pdf(boost::math::binomial_distribution<double>(static_cast<double>(n), p), static_cast<double>(k));
}

std::vector<ImportancePoint> importance_estimate(const FaultCountEstimate &data, const std::vector<double> &p_grid) {
    if (data.per_k.empty()) {
        throw PreconditionError("importance estimate needs at least one sampled fault count");
    }
    for (const auto &d : data.per_k) {
        if (d.shots == d.discards) {
            throw PreconditionError("fault count " + std::to_string(d.k) + " has no kept samples");
        }
    }
    const std::size_t n = data.num_locations;
    const std::size_t k_min = data.per_k.front().k, k_max = data.per_k.back().k;
    std::vector<ImportancePoint> out;
    for (double p : p_grid) {
        ImportancePoint pt;
        pt.p = p;
        for (const auto &d : data.per_k) {
            const double w = binomial_weight(n, d.k, p);
            const double f = d.fail_rate();
            pt.rate += w * f;
            pt.variance += w * w * f * (1 - f) / static_cast<double>(d.shots - d.discards);
        }
        for (std::size_t k = 0; k < k_min; k++) {
            pt.tail_below += binomial_weight(n, k, p);
        }
        double inside = 0;
        for (std::size_t k = k_min; k <= k_max; k++) {
            inside += binomial_weight(n, k, p);
        }
        pt.tail_above = std::max(0.0, 1.0 - pt.tail_below - inside);
        pt.std_error = std::sqrt(pt.variance);
        out.push_back(pt);
    }
    return out;
}

std::vector<std::pair<std::size_t, std::size_t>> allocate_shots(const FaultCountEstimate &pilot, const std::vector<double> &p_targets,
                                                                std::size_t budget) {
    if (pilot.per_k.empty()) {
        throw PreconditionError("shot allocation needs pilot data");
    }
    const std::size_t m = pilot.per_k.size();
    std::vector<double> contribution(m, 0.0);
    for (double p : p_targets) {
        std::vector<double> c(m);
        double total = 0;
        for (std::size_t i = 0; i < m; i++) {
            c[i] = binomial_weight(pilot.num_locations, pilot.per_k[i].k, p) * pilot.per_k[i].fail_rate();
            total += c[i];
        }
        if (total > 0) {
            for (std::size_t i = 0; i < m; i++) {
                contribution[i] += c[i] / total;
            }
        }
    }
    const double total = std::accumulate(contribution.begin(), contribution.end(), 0.0);
    std::vector<std::pair<std::size_t, std::size_t>> plan;
    if (total <= 0) {
        for (const auto &d : pilot.per_k) {
            plan.push_back({d.k, budget / m});
        }
        return plan;
    }
    // Window: largest contributions first until the neglected rest is under 1%.
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return contribution[a] > contribution[b]; });
    std::vector<bool> active(m, false);
    double covered = 0;
    std::size_t num_active = 0;
    for (auto i : order) {
        if (covered >= 0.99 * total) {
            break;
        }
        active[i] = true;
        covered += contribution[i];
        num_active++;
    }
    const std::size_t floor = std::min<std::size_t>(100, budget / num_active);
    const std::size_t spare = budget - floor * num_active;
    for (std::size_t i = 0; i < m; i++) {
        if (active[i]) {
            const auto extra = static_cast<std::size_t>(std::floor(static_cast<double>(spare) * contribution[i] / covered));
            plan.push_back({pilot.per_k[i].k, floor + extra});
        }
    }
    return plan;
}

}  // namespace pfsr
