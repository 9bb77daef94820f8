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

#include <algorithm>
#include <limits>
#include <random>
#include <set>

#include "pfsr/blossom.hpp"
#include "pfsr/circuit.hpp"
#include "pfsr/decoder.hpp"
#include "pfsr/errors.hpp"
#include "pfsr/memory.hpp"
#include "pfsr/surface_code.hpp"

using namespace pfsr;

namespace {

// Full enumeration of matchings: each event pairs with a later one or with the boundary.
int brute_force_weight(const std::vector<std::size_t> &nodes, const MatchingGraph &g, std::vector<bool> &used) {
    std::size_t i = 0;
    while (i < nodes.size() && used[i]) {
        i++;
    }
    if (i == nodes.size()) {
        return 0;
    }
    used[i] = true;
    int best = g.boundary_distance(nodes[i]) + brute_force_weight(nodes, g, used);
    for (std::size_t j = i + 1; j < nodes.size(); j++) {
        if (!used[j]) {
            used[j] = true;
            best = std::min(best, g.distance(nodes[i], nodes[j]) + brute_force_weight(nodes, g, used));
            used[j] = false;
        }
    }
    used[i] = false;
    return best;
}

std::vector<std::size_t> random_events(std::size_t count, std::size_t num_nodes, std::mt19937_64 &rng) {
    std::set<std::size_t> s;
    while (s.size() < count) {
        s.insert(rng() % num_nodes);
    }
    return {s.begin(), s.end()};
}

// Breadth-first search over explicit lattice coordinates, independent of the graph's adjacency lists.
int lattice_bfs(const RotatedSurfaceCode &code, std::size_t rounds, Basis basis, std::size_t from, std::size_t to) {
    const auto detectors = code.stabilizers_of_type(detector_type(basis));
    const std::size_t m = detectors.size();
    auto shares_qubit = [&](std::size_t a, std::size_t b) {
        const auto &sa = code.stabilizer(detectors[a]).support;
        const auto &sb = code.stabilizer(detectors[b]).support;
        for (auto q : sa) {
            if (std::count(sb.begin(), sb.end(), q)) {
                return true;
            }
        }
        return false;
    };
    std::vector<int> dist(rounds * m, -1);
    std::vector<std::size_t> queue{from};
    dist[from] = 0;
    for (std::size_t h = 0; h < queue.size(); h++) {
        const std::size_t u = queue[h], r = u / m, j = u % m;
        std::vector<std::size_t> next;
        if (r > 0) {
            next.push_back(u - m);
        }
        if (r + 1 < rounds) {
            next.push_back(u + m);
        }
        for (std::size_t k = 0; k < m; k++) {
            if (k != j && shares_qubit(j, k)) {
                next.push_back(r * m + k);
            }
        }
        for (auto v : next) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist[to];
}

SyndromeRecord quiet_record(const RotatedSurfaceCode &code, std::size_t rows) {
    SyndromeRecord r;
    r.rounds = rows;
    r.num_stabilizers = code.num_stabilizers();
    r.bits.assign(rows * r.num_stabilizers, 0);
    return r;
}

}  // namespace

TEST(Decoder, QuietRecordHasNoEvents) {
    const auto code = build_code(3);
    const auto rec = quiet_record(code, 4);
    EXPECT_TRUE(extract_events(rec, code, Basis::Z).nodes.empty());
    const auto g = build_matching_graph(code, 4, Basis::Z);
    EXPECT_EQ(decode({}, g), 0);
    EXPECT_EQ(logical_failure(rec, 0, Basis::Z), 0);
}

TEST(Decoder, MeasurementFlipGivesTimeLikePair) {
    const auto code = build_code(3);
    auto rec = quiet_record(code, 4);
    const auto z = code.stabilizers_of_type(PauliType::Z);
    rec.bits[1 * rec.num_stabilizers + z[2]] = 1;
    const auto ev = extract_events(rec, code, Basis::Z);
    EXPECT_EQ(ev.nodes, (std::vector<std::size_t>{1 * z.size() + 2, 2 * z.size() + 2}));
    EXPECT_EQ(ev.to_csv(code, Basis::Z), "round,stabilizer\n1," + std::to_string(z[2]) + "\n2," + std::to_string(z[2]) + "\n");
    const auto g = build_matching_graph(code, 4, Basis::Z);
    EXPECT_EQ(decode(ev, g), 0);
}

TEST(Decoder, MalformedRecordRejected) {
    const auto code = build_code(3);
    auto rec = quiet_record(code, 4);
    rec.bits.pop_back();
    EXPECT_THROW(extract_events(rec, code, Basis::Z), PreconditionError);
}

TEST(Decoder, GraphShapeAndMetric) {
    const auto code = build_code(3);
    const auto g = build_matching_graph(code, 4, Basis::Z);
    EXPECT_EQ(g.num_nodes(), 16u);
    EXPECT_EQ(g.boundary(), 16u);
    for (std::size_t a = 0; a < g.num_nodes(); a++) {
        EXPECT_EQ(g.distance(a, a), 0);
        for (std::size_t b = 0; b < g.num_nodes(); b++) {
            EXPECT_EQ(g.distance(a, b), g.distance(b, a));
            EXPECT_EQ(g.parity(a, b), g.parity(b, a));
            for (std::size_t c = 0; c < g.num_nodes(); c++) {
                EXPECT_LE(g.distance(a, c), g.distance(a, b) + g.distance(b, c));
            }
        }
        EXPECT_LT(g.boundary_distance(a), MatchingGraph::kUnreachable);
    }
}

TEST(Decoder, DistancesMatchLatticeBfs) {
    std::mt19937_64 rng(21);
    for (auto basis : {Basis::Z, Basis::X}) {
        const auto code = build_code(5);
        const std::size_t rows = 6;
        const auto g = build_matching_graph(code, rows, basis);
        for (int t = 0; t < 20; t++) {
            const std::size_t a = rng() % g.num_nodes(), b = rng() % g.num_nodes();
            EXPECT_EQ(g.distance(a, b), lattice_bfs(code, rows, basis, a, b));
        }
    }
}

TEST(Decoder, EverySingleDataErrorIsCorrected) {
    // d=3: an error on any data qubit in any round leaves events the decoder undoes exactly.
    for (auto basis : {Basis::Z, Basis::X}) {
        const auto code = build_code(3);
        const char letter = basis == Basis::Z ? 'X' : 'Z';
        const auto g = build_matching_graph(code, 4, basis);
        const auto circuit = build_memory_circuit(code, basis, MemoryMode::Phenomenological, 3);
        for (std::size_t loc = 0; loc < circuit.locations.size(); loc++) {
            if (circuit.locations[loc].kind != FaultKind::Channel) {
                continue;
            }
            InjectedFault f{loc, letter};
            const auto flips = propagate_faults(circuit, std::span<const InjectedFault>(&f, 1));
            const auto rec = to_syndrome_record(circuit, flips);
            const auto ev = extract_events(rec, code, basis);
            EXPECT_TRUE(ev.nodes.size() == 1 || ev.nodes.size() == 2);
            EXPECT_EQ(logical_failure(rec, decode(ev, g), basis), 0) << "location " << loc;
        }
    }
}

TEST(Decoder, UndetectableLogicalIsAFailure) {
    const MemoryExperiment exp([] {
        MemoryConfig c;
        c.distance = 3;
        c.basis = Basis::X;
        c.channel = NoiseChannel{ChannelKind::PhaseFlip, 0.01};
        return c;
    }());
    const auto &circuit = exp.circuit();
    // Z on every qubit of the logical Z representative in round 0.
    std::vector<InjectedFault> faults;
    for (auto q : exp.code().logical_z_support()) {
        for (std::size_t loc = 0; loc < circuit.locations.size(); loc++) {
            if (circuit.locations[loc].kind == FaultKind::Channel && circuit.ops[circuit.locations[loc].op].q0 == q) {
                faults.push_back({loc, 'Z'});
                break;
            }
        }
    }
    std::sort(faults.begin(), faults.end(), [](const auto &a, const auto &b) { return a.location < b.location; });
    Rng rng(1);
    const auto rec = exp.run_with_faults(faults, rng).record;
    EXPECT_TRUE(extract_events(rec, exp.code(), Basis::X).nodes.empty());
    MemoryDecoder dec(exp);
    EXPECT_TRUE(dec.failed(rec));
}

TEST(Decoder, ExactMatchingEqualsBruteForce) {
    std::mt19937_64 rng(3);
    const auto code = build_code(5);
    const auto g = build_matching_graph(code, 6, Basis::Z);
    for (int t = 0; t < 200; t++) {
        DetectionEvents ev;
        ev.num_detectors = 12;
        ev.nodes = random_events(1 + rng() % 8, g.num_nodes(), rng);
        std::vector<bool> used(ev.nodes.size(), false);
        const int oracle = brute_force_weight(ev.nodes, g, used);
        const auto pairs = match(ev, g);
        EXPECT_EQ(matching_weight(pairs, g), oracle);
        // Every event appears exactly once.
        std::multiset<std::size_t> covered;
        for (const auto &[u, v] : pairs) {
            covered.insert(u);
            if (v != g.boundary()) {
                covered.insert(v);
            }
        }
        EXPECT_EQ(covered, std::multiset<std::size_t>(ev.nodes.begin(), ev.nodes.end()));
    }
}

TEST(Decoder, BlossomAgreesWithSubsetDp) {
    std::mt19937_64 rng(17);
    const auto code = build_code(5);
    const auto g = build_matching_graph(code, 6, Basis::X);
    DecodeOptions dp, blossom, greedy;
    dp.exact_cap = 14;
    blossom.exact_cap = 0;
    greedy.exact_cap = 0;
    greedy.blossom_beyond_cap = false;
    int greedy_worse = 0;
    for (int t = 0; t < 100; t++) {
        DetectionEvents ev;
        ev.num_detectors = 12;
        ev.nodes = random_events(6 + rng() % 9, g.num_nodes(), rng);
        const int w = matching_weight(match(ev, g, dp), g);
        EXPECT_EQ(matching_weight(match(ev, g, blossom), g), w);
        const int wg = matching_weight(match(ev, g, greedy), g);
        EXPECT_GE(wg, w);
        greedy_worse += wg > w;
    }
    EXPECT_GT(greedy_worse, 0);
}

TEST(Decoder, DecodingIsDeterministic) {
    std::mt19937_64 rng(8);
    const auto code = build_code(5);
    const auto g = build_matching_graph(code, 6, Basis::Z);
    for (int t = 0; t < 50; t++) {
        DetectionEvents ev;
        ev.num_detectors = 12;
        ev.nodes = random_events(1 + rng() % 20, g.num_nodes(), rng);
        EXPECT_EQ(match(ev, g), match(ev, g));
    }
}

namespace {

// Decodes the phenomenological record produced by the given data and measurement faults.
bool fails_with(const Circuit &circuit, const RotatedSurfaceCode &code, const MatchingGraph &g, Basis basis,
                const std::vector<InjectedFault> &faults) {
    auto sorted = faults;
    std::sort(sorted.begin(), sorted.end(), [](const auto &a, const auto &b) { return a.location < b.location; });
    const auto rec = to_syndrome_record(circuit, propagate_faults(circuit, sorted));
    return logical_failure(rec, decode(extract_events(rec, code, basis), g), basis) != 0;
}

// Locations that can flip the decoded sector: channel locations (with the relevant letter) and
// measurement flips on stabilizers of the decoded type.
std::vector<InjectedFault> relevant_faults(const Circuit &circuit, const RotatedSurfaceCode &code, Basis basis) {
    const char letter = basis == Basis::Z ? 'X' : 'Z';
    std::vector<InjectedFault> out;
    for (std::size_t loc = 0; loc < circuit.locations.size(); loc++) {
        const auto &l = circuit.locations[loc];
        if (l.kind == FaultKind::Channel) {
            out.push_back({loc, letter});
        } else if (l.kind == FaultKind::MeasurementFlip) {
            const auto obs = circuit.ops[l.op].observable;
            if (obs < code.num_stabilizers() && code.stabilizer(obs).type == detector_type(basis)) {
                out.push_back({loc, 'X'});
            }
        }
    }
    return out;
}

}  // namespace

TEST(Decoder, DistanceThreeCorrectsEverySingleFault) {
    for (auto basis : {Basis::Z, Basis::X}) {
        const auto code = build_code(3);
        const auto circuit = build_memory_circuit(code, basis, MemoryMode::Phenomenological, 3);
        const auto g = build_matching_graph(code, 4, basis);
        for (const auto &f : relevant_faults(circuit, code, basis)) {
            EXPECT_FALSE(fails_with(circuit, code, g, basis, {f})) << "location " << f.location;
        }
    }
}

TEST(Decoder, DistanceFiveCorrectsRandomDoubleFaults) {
    std::mt19937_64 rng(99);
    for (auto basis : {Basis::Z, Basis::X}) {
        const auto code = build_code(5);
        const auto circuit = build_memory_circuit(code, basis, MemoryMode::Phenomenological, 5);
        const auto g = build_matching_graph(code, 6, basis);
        const auto faults = relevant_faults(circuit, code, basis);
        int failures = 0;
        for (int t = 0; t < 50000; t++) {
            const auto a = faults[rng() % faults.size()], b = faults[rng() % faults.size()];
            if (a.location == b.location) {
                continue;
            }
            failures += fails_with(circuit, code, g, basis, {a, b});
        }
        EXPECT_EQ(failures, 0);
    }
}

TEST(Decoder, CircuitGraphCorrectsSingleCircuitFaults) {
    for (auto mode : {MemoryMode::CircuitLayered, MemoryMode::CircuitParallel}) {
        for (auto basis : {Basis::Z, Basis::X}) {
            MemoryConfig c;
            c.distance = 3;
            c.basis = basis;
            c.mode = mode;
            c.channel = NoiseChannel{ChannelKind::Depolarizing, 0.001};
            const MemoryExperiment exp(c);
            const MemoryDecoder dec(exp);
            const auto &circuit = exp.circuit();
            int failures = 0;
            for (std::size_t loc = 0; loc < circuit.locations.size(); loc++) {
                for (char p : {'X', 'Y', 'Z'}) {
                    InjectedFault f{loc, p};
                    const auto rec = to_syndrome_record(circuit, propagate_faults(circuit, std::span<const InjectedFault>(&f, 1)));
                    failures += dec.failed(rec);
                    if (circuit.locations[loc].kind != FaultKind::Channel) {
                        break;
                    }
                }
            }
            EXPECT_EQ(failures, 0) << memory_mode_name(mode) << " " << basis_name(basis);
        }
    }
}

namespace {

// (cardinality, weight) of the best matching by enumeration: each vertex is skipped or paired.
std::pair<int, std::int64_t> brute_matching(std::size_t v, std::vector<bool> &used, const std::vector<std::vector<std::int64_t>> &w,
                                             bool max_cardinality) {
    const std::size_t n = w.size();
    while (v < n && used[v]) {
        v++;
    }
    if (v == n) {
        return {0, 0};
    }
    used[v] = true;
    auto best = brute_matching(v + 1, used, w, max_cardinality);
    for (std::size_t u = v + 1; u < n; u++) {
        if (used[u] || w[v][u] == std::numeric_limits<std::int64_t>::min()) {
            continue;
        }
        used[u] = true;
        auto sub = brute_matching(v + 1, used, w, max_cardinality);
        used[u] = false;
        sub.first += 1;
        sub.second += w[v][u];
        const bool better = max_cardinality ? sub > best : sub.second > best.second;
        if (better) {
            best = sub;
        }
    }
    used[v] = false;
    return best;
}

}  // namespace

TEST(Blossom, MatchesEnumerationOnRandomGraphs) {
    std::mt19937_64 rng(1234);
    for (int t = 0; t < 3000; t++) {
        const std::size_t n = 2 + rng() % 9;
        const double density = 0.2 + 0.8 * static_cast<double>(rng() % 100) / 100.0;
        const std::int64_t range = 1 + static_cast<std::int64_t>(rng() % 20);
        std::vector<std::vector<std::int64_t>> w(n, std::vector<std::int64_t>(n, std::numeric_limits<std::int64_t>::min()));
        std::vector<WeightedEdge> edges;
        for (std::size_t a = 0; a < n; a++) {
            for (std::size_t b = a + 1; b < n; b++) {
                if (static_cast<double>(rng() % 1000) / 1000.0 < density) {
                    const std::int64_t x = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(range)) + 1;
                    w[a][b] = w[b][a] = x;
                    edges.push_back({a, b, x});
                }
            }
        }
        for (bool card : {false, true}) {
            const auto mate = max_weight_matching(n, edges, card);
            int count = 0;
            std::int64_t total = 0;
            for (std::size_t a = 0; a < n; a++) {
                if (mate[a] >= 0) {
                    ASSERT_EQ(mate[static_cast<std::size_t>(mate[a])], static_cast<long>(a));
                    ASSERT_NE(w[a][static_cast<std::size_t>(mate[a])], std::numeric_limits<std::int64_t>::min());
                    if (static_cast<long>(a) < mate[a]) {
                        count++;
                        total += w[a][static_cast<std::size_t>(mate[a])];
                    }
                }
            }
            std::vector<bool> used(n, false);
            const auto oracle = brute_matching(0, used, w, card);
            if (card) {
                EXPECT_EQ(count, oracle.first) << "trial " << t;
            }
            EXPECT_EQ(total, oracle.second) << "trial " << t << " cardinality " << card;
        }
    }
}
