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
#include <utility>
#include <vector>

#include "pfsr/circuit.hpp"
#include "pfsr/memory.hpp"
#include "pfsr/surface_code.hpp"

namespace pfsr {

/// Stabilizer type whose outcomes are decoded in a memory experiment of the given basis.
PauliType detector_type(Basis basis);

/// Detection events as node ids `round * num_detectors + j`, where j indexes the stabilizers of the
/// decoded type in sweep order. Sorted ascending.
struct DetectionEvents {
    std::size_t num_detectors = 0;
    std::vector<std::size_t> nodes;

    /// "round,stabilizer" lines (stabilizer as the code's index) with a header.
    std::string to_csv(const RotatedSurfaceCode &code, Basis basis) const;
};

/// XOR of consecutive rounds for each stabilizer of the decoded type; round 0 is compared to +1.
DetectionEvents extract_events(const SyndromeRecord &record, const RotatedSurfaceCode &code, Basis basis);

struct MatchingEdge {
    std::size_t u;
    std::size_t v;  // may be the boundary node
    std::uint8_t parity;
};

/// Unit-weight detector graph with a virtual boundary node and all-pairs shortest paths.
class MatchingGraph {
   public:
    MatchingGraph() = default;
    /// Nodes are 0..num_nodes-1; node `num_nodes` is the boundary. Duplicate edges keep the first parity.
    MatchingGraph(std::size_t num_nodes, const std::vector<MatchingEdge> &edges);

    std::size_t num_nodes() const { return n_; }
    std::size_t boundary() const { return n_; }
    std::size_t num_edges() const { return num_edges_; }
    const std::vector<std::pair<std::size_t, std::uint8_t>> &neighbors(std::size_t u) const { return adj_[u]; }

    /// Shortest path length between two detector nodes, never passing through the boundary.
    int distance(std::size_t u, std::size_t v) const { return dist_[u * n_ + v]; }
    /// Logical parity of that path.
    std::uint8_t parity(std::size_t u, std::size_t v) const { return par_[u * n_ + v]; }
    int boundary_distance(std::size_t u) const { return bdist_[u]; }
    std::uint8_t boundary_parity(std::size_t u) const { return bpar_[u]; }

    static constexpr int kUnreachable = 1 << 20;

   private:
    std::size_t n_ = 0;
    std::size_t num_edges_ = 0;
    std::vector<std::vector<std::pair<std::size_t, std::uint8_t>>> adj_;
    std::vector<int> dist_;
    std::vector<std::uint8_t> par_;
    std::vector<int> bdist_;
    std::vector<std::uint8_t> bpar_;
};

/// Lattice graph for phenomenological noise: a space edge per data qubit per round (to the boundary on
/// the code edge), a time edge per stabilizer per consecutive round pair, and parity 1 on data qubits
/// of the measured logical operator. `rounds` counts all rows, the final ideal one included.
MatchingGraph build_matching_graph(const RotatedSurfaceCode &code, std::size_t rounds, Basis basis);

/// Graph whose edges are the detection-event pairs of every single fault of the circuit, found by Pauli
/// propagation. Faults producing more than two events in the decoded sector are skipped.
MatchingGraph build_matching_graph(const Circuit &circuit, const RotatedSurfaceCode &code, Basis basis);

struct DecodeOptions {
    /// Largest connected event cluster matched by subset dynamic programming.
    std::size_t exact_cap = 14;
    /// Larger clusters use the blossom algorithm when set, greedy nearest-pair matching otherwise.
    bool blossom_beyond_cap = true;
};

/// A matched pair of detector nodes; `second` is the boundary node for a boundary match.
using MatchedPair = std::pair<std::size_t, std::size_t>;

/// Minimum-weight matching of the events to each other or to the boundary.
std::vector<MatchedPair> match(const DetectionEvents &events, const MatchingGraph &graph, const DecodeOptions &options = {});
int matching_weight(const std::vector<MatchedPair> &pairs, const MatchingGraph &graph);
std::uint8_t matching_parity(const std::vector<MatchedPair> &pairs, const MatchingGraph &graph);

/// Minimum-weight perfect matching (events to each other or to the boundary); returns the logical parity
/// of the matched paths.
std::uint8_t decode(const DetectionEvents &events, const MatchingGraph &graph, const DecodeOptions &options = {});

/// Measured logical bit XOR correction (the prepared logical value is +1). 1 means failure.
std::uint8_t logical_failure(const SyndromeRecord &record, std::uint8_t correction, Basis basis);

/// Decoder bundle for one memory experiment: the graph is built once.
class MemoryDecoder {
   public:
    explicit MemoryDecoder(const MemoryExperiment &experiment);
    const MatchingGraph &graph() const { return graph_; }
    /// True when the trajectory ended in a logical error.
    bool failed(const SyndromeRecord &record) const;
    /// True when the record has any detection event.
    bool detected(const SyndromeRecord &record) const;

   private:
    const RotatedSurfaceCode *code_;
    Basis basis_;
    MatchingGraph graph_;
};

}  // namespace pfsr
