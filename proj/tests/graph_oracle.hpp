/*
   Copyright 2026 The ShockHash Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Independent reference implementations used as test oracles

#pragma once

#include <cstdint>
#include <queue>
#include <span>
#include <vector>

#include <shockhash/hashing.hpp>
#include <shockhash/pseudoforest.hpp>

namespace oracle {

struct Components {
    std::size_t count{0};
    bool pseudoforest{true};  // every component has at most as many edges as nodes
};

//! Breadth-first search per component counting its nodes and edges
inline Components components(std::span<const shockhash::Edge> edges, std::size_t n) {
    std::vector<std::vector<std::size_t>> incident(n);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        incident[edges[i].u].push_back(i);
        if (edges[i].v != edges[i].u) incident[edges[i].v].push_back(i);
    }
    std::vector<bool> seen_node(n, false), seen_edge(edges.size(), false);
    Components out;
    for (std::size_t s = 0; s < n; ++s) {
        if (seen_node[s]) continue;
        ++out.count;
        std::size_t nodes = 0, edge_count = 0;
        std::queue<std::size_t> q;
        q.push(s);
        seen_node[s] = true;
        while (!q.empty()) {
            const std::size_t x = q.front();
            q.pop();
            ++nodes;
            for (const std::size_t e : incident[x]) {
                if (!seen_edge[e]) {
                    seen_edge[e] = true;
                    ++edge_count;
                }
                const std::size_t y = edges[e].u == x ? edges[e].v : edges[e].u;
                if (!seen_node[y]) {
                    seen_node[y] = true;
                    q.push(y);
                }
            }
        }
        if (edge_count > nodes) out.pseudoforest = false;
    }
    return out;
}

//! Number of choice vectors f in {0,1}^m placing all keys in distinct cells (m <= 20)
inline std::uint64_t count_valid_choices(std::span<const shockhash::Edge> edges, std::size_t n) {
    const std::size_t m = edges.size();
    std::uint64_t valid = 0;
    for (std::uint64_t f = 0; f < (std::uint64_t{1} << m); ++f) {
        std::vector<bool> used(n, false);
        bool ok = true;
        for (std::size_t i = 0; i < m && ok; ++i) {
            const std::uint32_t cell = (f >> i) & 1 ? edges[i].v : edges[i].u;
            ok = !used[cell];
            used[cell] = true;
        }
        valid += ok;
    }
    return valid;
}

//! First seed whose leaf graph is a pseudoforest, by direct scan through the checked leaf_hash
inline std::uint64_t naive_min_seed(std::span<const shockhash::HashedKey> keys) {
    const auto n = static_cast<unsigned>(keys.size());
    for (std::uint64_t seed = 0;; ++seed) {
        std::vector<shockhash::Edge> edges(n);
        for (unsigned i = 0; i < n; ++i) {
            edges[i] = {shockhash::leaf_hash(keys[i], seed, 0, n), shockhash::leaf_hash(keys[i], seed, 1, n)};
        }
        if (components(edges, n).pseudoforest) return seed;
    }
}

}  // namespace oracle
