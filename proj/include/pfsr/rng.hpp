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

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace pfsr {

/// Per-trajectory random stream.
using Rng = std::mt19937_64;

/// Derives an independent stream from a master seed and a tuple of stream indices
/// (for example trajectory number, or fault count and trajectory number).
inline Rng make_rng(std::uint64_t master_seed, std::initializer_list<std::uint64_t> stream) {
    std::vector<std::uint32_t> words;
    words.reserve(2 + 2 * stream.size());
    auto push = [&](std::uint64_t v) {
        words.push_back(static_cast<std::uint32_t>(v));
        words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(master_seed);
    for (auto v : stream) {
        push(v);
    }
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
}

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Rng &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// True with probability `p`.
inline bool bernoulli(Rng &rng, double p) { return uniform01(rng) < p; }

}  // namespace pfsr
