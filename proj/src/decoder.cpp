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

#include "pfsr/decoder.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

#include "pfsr/blossom.hpp"
#include "pfsr/errors.hpp"

namespace pfsr {

PauliType detector_type(Basis basis) { return basis == Basis::Z ? PauliType::Z : PauliType::X; }

std::string DetectionEvents::to_csv(const RotatedSurfaceCode &code, Basis basis) const {
    const auto detectors = code.stabilizers_of_type(detector_type(basis));
    std::string out = "round,stabilizer\n";
    for (auto node : nodes) {
        out += std::to_string(node / num_detectors) + "," + std::to_string(detectors[node % num_detectors]) + "\n";
    }
    return out;
}

DetectionEvents extract_events(const SyndromeRecord &record, const RotatedSurfaceCode &code, Basis basis) {
    if (record.num_stabilizers != code.num_stabilizers() || record.bits.size() != record.rounds * record.num_stabilizers) {
        throw PreconditionError("syndrome record does not match the code");
    }
    const auto detectors = code.stabilizers_of_type(detector_type(basis));
    DetectionEvents ev;
    ev.num_detectors = detectors.size();
    for (std::size_t r = 0; r < record.rounds; r++) {
        for (std::size_t j = 0; j < detectors.size(); j++) {
            const std::uint8_t prev = r == 0 ? 0 : record.bit(r - 1, detectors[j]);
            if (record.bit(r, detectors[j]) != prev) {
                ev.nodes.push_back(r * detectors.size() + j);
            }
        }
    }
    return ev;
}

MatchingGraph::MatchingGraph(std::size_t num_nodes, const std::vector<MatchingEdge> &edges) : n_(num_nodes), adj_(num_nodes + 1) {
    std::map<std::pair<std::size_t, std::size_t>, std::uint8_t> seen;
    for (const auto &e : edges) {
        if (e.u > n_ || e.v > n_ || e.u == e.v) {
            throw PreconditionError("bad matching edge");
        }
        auto key = std::minmax(e.u, e.v);
        if (seen.emplace(key, e.parity).second) {
            adj_[e.u].push_back({e.v, e.parity});
            adj_[e.v].push_back({e.u, e.parity});
        }
    }
    num_edges_ = seen.size();
    for (auto &a : adj_) {
        std::sort(a.begin(), a.end());
    }
    dist_.assign(n_ * n_, kUnreachable);
    par_.assign(n_ * n_, 0);
    std::vector<std::size_t> queue;
    for (std::size_t s = 0; s < n_; s++) {
        int *dist = &dist_[s * n_];
        std::uint8_t *par = &par_[s * n_];
        dist[s] = 0;
        queue.assign(1, s);
        for (std::size_t head = 0; head < queue.size(); head++) {
            const std::size_t u = queue[head];
            for (const auto &[v, p] : adj_[u]) {
                if (v == n_ || dist[v] != kUnreachable) {
                    continue;
                }
                dist[v] = dist[u] + 1;
                par[v] = par[u] ^ p;
                queue.push_back(v);
            }
        }
    }
    bdist_.assign(n_, kUnreachable);
    bpar_.assign(n_, 0);
    for (std::size_t w = 0; w < n_; w++) {
        for (const auto &[v, p] : adj_[w]) {
            if (v != n_) {
                continue;
            }
            for (std::size_t u = 0; u < n_; u++) {
                const int cand = distance(u, w) + 1;
                if (cand < bdist_[u]) {
                    bdist_[u] = cand;
                    bpar_[u] = parity(u, w) ^ p;
                }
            }
        }
    }
}

MatchingGraph build_matching_graph(const RotatedSurfaceCode &code, std::size_t rounds, Basis basis) {
    const auto detectors = code.stabilizers_of_type(detector_type(basis));
    const std::size_t m = detectors.size();
    std::vector<std::size_t> position(code.num_stabilizers(), m);
    for (std::size_t j = 0; j < m; j++) {
        position[detectors[j]] = j;
    }
    std::vector<std::vector<std::size_t>> touching(code.num_data());
    for (auto k : detectors) {
        for (auto q : code.stabilizer(k).support) {
            touching[q].push_back(position[k]);
        }
    }
    const auto logical = basis == Basis::Z ? code.logical_z_support() : code.logical_x_support();
    std::vector<std::uint8_t> on_logical(code.num_data(), 0);
    for (auto q : logical) {
        on_logical[q] = 1;
    }
    const std::size_t n = rounds * m;
    std::vector<MatchingEdge> edges;
    for (std::size_t r = 0; r < rounds; r++) {
        for (std::size_t q = 0; q < code.num_data(); q++) {
            const auto &t = touching[q];
            if (t.size() == 2) {
                edges.push_back({r * m + t[0], r * m + t[1], on_logical[q]});
            } else if (t.size() == 1) {
                edges.push_back({r * m + t[0], n, on_logical[q]});
            }
        }
        if (r + 1 < rounds) {
            for (std::size_t j = 0; j < m; j++) {
                edges.push_back({r * m + j, (r + 1) * m + j, 0});
            }
        }
    }
    return MatchingGraph(n, edges);
}

MatchingGraph build_matching_graph(const Circuit &circuit, const RotatedSurfaceCode &code, Basis basis) {
    const auto detectors = code.stabilizers_of_type(detector_type(basis));
    const std::size_t m = detectors.size();
    const std::size_t rows = circuit.rounds + 1;
    const std::size_t n = rows * m;
    std::vector<MatchingEdge> edges;
    SyndromeRecord rec;
    rec.rounds = rows;
    rec.num_stabilizers = circuit.num_stabilizers;
    auto add = [&](const std::vector<std::uint8_t> &flips) {
        rec.bits.assign(flips.begin(), flips.begin() + static_cast<long>(circuit.logical_record()));
        const auto ev = extract_events(rec, code, basis);
        const std::uint8_t logical = flips[circuit.logical_record()];
        if (ev.nodes.size() == 1) {
            edges.push_back({ev.nodes[0], n, logical});
        } else if (ev.nodes.size() == 2) {
            edges.push_back({ev.nodes[0], ev.nodes[1], logical});
        }
    };
    for (std::size_t loc = 0; loc < circuit.locations.size(); loc++) {
        if (circuit.locations[loc].kind == FaultKind::Channel) {
            for (char p : {'X', 'Y', 'Z'}) {
                InjectedFault f{loc, p};
                add(propagate_faults(circuit, std::span<const InjectedFault>(&f, 1)));
            }
        } else {
            InjectedFault f{loc, 'X'};
            add(propagate_faults(circuit, std::span<const InjectedFault>(&f, 1)));
        }
    }
    return MatchingGraph(n, edges);
}

namespace {

struct Matcher {
    const MatchingGraph &g;
    const std::vector<std::size_t> &nodes;

    int pair_cost(std::size_t i, std::size_t j) const { return g.distance(nodes[i], nodes[j]); }
    int boundary_cost(std::size_t i) const { return g.boundary_distance(nodes[i]); }

    // Exact matching of the events listed in `members` by subset dynamic programming.
    void exact(const std::vector<std::size_t> &members, std::vector<MatchedPair> &out) const {
        const std::size_t m = members.size();
        const std::size_t full = (std::size_t{1} << m) - 1;
        std::vector<int> cost(full + 1, 0);
        std::vector<std::int8_t> choice(full + 1, -1);  // partner index, or m for the boundary
        for (std::size_t mask = 1; mask <= full; mask++) {
            const std::size_t i = static_cast<std::size_t>(std::countr_zero(mask));
            const std::size_t rest = mask & ~(std::size_t{1} << i);
            int best = cost[rest] + boundary_cost(members[i]);
            std::int8_t pick = static_cast<std::int8_t>(m);
            for (std::size_t j = i + 1; j < m; j++) {
                if (!(rest >> j & 1)) {
                    continue;
                }
                const int c = cost[rest & ~(std::size_t{1} << j)] + pair_cost(members[i], members[j]);
                if (c < best) {
                    best = c;
                    pick = static_cast<std::int8_t>(j);
                }
            }
            cost[mask] = best;
            choice[mask] = pick;
        }
        std::size_t mask = full;
        while (mask) {
            const std::size_t i = static_cast<std::size_t>(std::countr_zero(mask));
            const auto pick = static_cast<std::size_t>(choice[mask]);
            mask &= ~(std::size_t{1} << i);
            if (pick == m) {
                out.push_back({nodes[members[i]], g.boundary()});
            } else {
                out.push_back({nodes[members[i]], nodes[members[pick]]});
                mask &= ~(std::size_t{1} << pick);
            }
        }
    }

    // Exact matching through the blossom algorithm. Each event gets a private boundary copy; copies pair
    // among themselves at no cost. Costs become weights `big - cost`, and a maximum-cardinality
    // maximum-weight matching is then a perfect matching of minimum cost.
    bool blossom(const std::vector<std::size_t> &members, std::vector<MatchedPair> &out) const {
        const std::size_t m = members.size();
        std::int64_t big = 1;
        for (std::size_t a = 0; a < m; a++) {
            big += boundary_cost(members[a]);
        }
        std::vector<WeightedEdge> edges;
        for (std::size_t a = 0; a < m; a++) {
            edges.push_back({a, m + a, big - boundary_cost(members[a])});
            for (std::size_t b = a + 1; b < m; b++) {
                const int c = pair_cost(members[a], members[b]);
                if (c < boundary_cost(members[a]) + boundary_cost(members[b])) {
                    edges.push_back({a, b, big - c});
                }
                edges.push_back({m + a, m + b, big});
            }
        }
        const auto mate = max_weight_matching(2 * m, edges, true);
        std::vector<MatchedPair> found;
        for (std::size_t a = 0; a < m; a++) {
            const long b = mate[a];
            if (b < 0) {
                return false;
            }
            if (static_cast<std::size_t>(b) == m + a) {
                found.push_back({nodes[members[a]], g.boundary()});
            } else if (static_cast<std::size_t>(b) < m && a < static_cast<std::size_t>(b)) {
                found.push_back({nodes[members[a]], nodes[members[b]]});
            } else if (static_cast<std::size_t>(b) >= m) {
                return false;
            }
        }
        out.insert(out.end(), found.begin(), found.end());
        return true;
    }

    // Repeatedly commits the cheapest remaining pairing.
    void greedy(const std::vector<std::size_t> &members, std::vector<MatchedPair> &out) const {
        struct Option {
            int cost;
            std::size_t a;
            std::size_t b;  // == members.size() for the boundary
        };
        const std::size_t m = members.size();
        std::vector<Option> options;
        for (std::size_t a = 0; a < m; a++) {
            options.push_back({boundary_cost(members[a]), a, m});
            for (std::size_t b = a + 1; b < m; b++) {
                options.push_back({pair_cost(members[a], members[b]), a, b});
            }
        }
        std::stable_sort(options.begin(), options.end(), [](const Option &x, const Option &y) { return x.cost < y.cost; });
        std::vector<bool> used(m, false);
        for (const auto &o : options) {
            if (used[o.a] || (o.b < m && used[o.b])) {
                continue;
            }
            used[o.a] = true;
            if (o.b == m) {
                out.push_back({nodes[members[o.a]], g.boundary()});
            } else {
                used[o.b] = true;
                out.push_back({nodes[members[o.a]], nodes[members[o.b]]});
            }
        }
    }
};

}  // namespace

std::vector<MatchedPair> match(const DetectionEvents &events, const MatchingGraph &graph, const DecodeOptions &options) {
    const auto &nodes = events.nodes;
    const std::size_t k = nodes.size();
    std::vector<MatchedPair> out;
    if (k == 0) {
        return out;
    }
    for (auto v : nodes) {
        if (v >= graph.num_nodes()) {
            throw PreconditionError("detection event outside the matching graph");
        }
    }
    // Events can only share a matching pair when pairing beats sending both to the boundary; clusters
    // under that relation decode independently.
    std::vector<std::size_t> parent(k);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            x = parent[x] = parent[parent[x]];
        }
        return x;
    };
    for (std::size_t a = 0; a < k; a++) {
        for (std::size_t b = a + 1; b < k; b++) {
            if (graph.distance(nodes[a], nodes[b]) < graph.boundary_distance(nodes[a]) + graph.boundary_distance(nodes[b])) {
                parent[find(b)] = find(a);
            }
        }
    }
    std::map<std::size_t, std::vector<std::size_t>> clusters;
    for (std::size_t a = 0; a < k; a++) {
        clusters[find(a)].push_back(a);
    }
    Matcher matcher{graph, nodes};
    for (const auto &[root, members] : clusters) {
        if (members.size() <= options.exact_cap) {
            matcher.exact(members, out);
        } else if (!options.blossom_beyond_cap || !matcher.blossom(members, out)) {
            matcher.greedy(members, out);
        }
    }
    return out;
}

int matching_weight(const std::vector<MatchedPair> &pairs, const MatchingGraph &graph) {
    int w = 0;
    for (const auto &[u, v] : pairs) {
        w += v == graph.boundary() ? graph.boundary_distance(u) : graph.distance(u, v);
    }
    return w;
}

std::uint8_t matching_parity(const std::vector<MatchedPair> &pairs, const MatchingGraph &graph) {
    std::uint8_t parity = 0;
    for (const auto &[u, v] : pairs) {
        parity ^= v == graph.boundary() ? graph.boundary_parity(u) : graph.parity(u, v);
    }
    return parity;
}

std::uint8_t decode(const DetectionEvents &events, const MatchingGraph &graph, const DecodeOptions &options) {
    return matching_parity(match(events, graph, options), graph);
}

std::uint8_t logical_failure(const SyndromeRecord &record, std::uint8_t correction, Basis) {
    return static_cast<std::uint8_t>((record.logical ^ correction) & 1);
}

MemoryDecoder::MemoryDecoder(const MemoryExperiment &experiment)
    : code_(&experiment.code()), basis_(experiment.config().basis) {
    if (experiment.config().mode == MemoryMode::Phenomenological) {
        graph_ = build_matching_graph(experiment.code(), experiment.circuit().rounds + 1, basis_);
    } else {
        graph_ = build_matching_graph(experiment.circuit(), experiment.code(), basis_);
    }
}

bool MemoryDecoder::failed(const SyndromeRecord &record) const {
    const auto ev = extract_events(record, *code_, basis_);
    return logical_failure(record, decode(ev, graph_), basis_) != 0;
}

bool MemoryDecoder::detected(const SyndromeRecord &record) const {
    return !extract_events(record, *code_, basis_).nodes.empty();
}

}  // namespace pfsr
