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

#include <shockhash/pseudoforest.hpp>

namespace shockhash {

namespace {

    void check_edges(std::span<const Edge> edges, std::size_t n) {
        if (edges.size() != n) {
            throw InvalidParameter("expected " + std::to_string(n) + " edges, got " + std::to_string(edges.size()));
        }
        for (const Edge& e : edges) {
            if (e.u >= n || e.v >= n) throw InvalidParameter("edge endpoint out of range");
        }
    }

    bool pseudoforest_unchecked(std::span<const Edge> edges, std::size_t n, UnionFindPF& uf) {
        uf.reset(n);
        for (const Edge& e : edges) {
            if (!uf.insert_unchecked(e.u, e.v)) return false;
        }
        return true;
    }

}  // namespace

bool is_pseudoforest(std::span<const Edge> edges, std::size_t n) {
    check_edges(edges, n);
    UnionFindPF uf;
    return pseudoforest_unchecked(edges, n, uf);
}

Orientation orient(std::span<const Edge> edges, std::size_t n) {
    check_edges(edges, n);
    {
        UnionFindPF uf;
        if (!pseudoforest_unchecked(edges, n, uf)) {
            throw ContractViolation("orient() called on a graph that is not a pseudoforest");
        }
    }

    // Incidence lists in CSR form; a self-loop is listed twice at its node.
    std::vector<std::uint32_t> degree(n, 0);
    for (const Edge& e : edges) {
        ++degree[e.u];
        ++degree[e.v];
    }
    std::vector<std::uint32_t> first(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) first[i + 1] = first[i] + degree[i];
    std::vector<std::uint32_t> incident(first[n]);
    {
        std::vector<std::uint32_t> fill(first.begin(), first.end() - 1);
        for (std::uint32_t i = 0; i < edges.size(); ++i) {
            incident[fill[edges[i].u]++] = i;
            incident[fill[edges[i].v]++] = i;
        }
    }

    Orientation result;
    result.choice.assign(n, 0);
    std::vector<std::uint8_t> placed(n, 0);

    auto unplaced_at = [&](std::uint32_t node) -> std::uint32_t {
        for (std::uint32_t j = first[node]; j < first[node + 1]; ++j) {
            if (!placed[incident[j]]) return incident[j];
        }
        throw ContractViolation("orientation walk found no free edge");
    };
    auto place = [&](std::uint32_t key, std::uint32_t node) {
        placed[key] = 1;
        result.choice[key] = edges[key].u == node ? 0 : 1;
    };

    // Peel: a node with one remaining edge must take that edge's key.
    std::vector<std::uint32_t> stack;
    for (std::uint32_t v = 0; v < n; ++v) {
        if (degree[v] == 1) stack.push_back(v);
    }
    while (!stack.empty()) {
        const std::uint32_t v = stack.back();
        stack.pop_back();
        if (degree[v] != 1) continue;
        const std::uint32_t key = unplaced_at(v);
        place(key, v);
        degree[v] = 0;
        const std::uint32_t other = edges[key].u == v ? edges[key].v : edges[key].u;
        if (--degree[other] == 1) stack.push_back(other);
    }

    // What is left is a disjoint union of cycles.
    for (std::uint32_t key = 0; key < n; ++key) {
        if (placed[key]) continue;
        const std::uint32_t start = edges[key].u;
        place(key, start);
        std::uint32_t node = edges[key].v;
        while (node != start) {
            const std::uint32_t next_key = unplaced_at(node);
            place(next_key, node);
            node = edges[next_key].u == node ? edges[next_key].v : edges[next_key].u;
        }
    }
    return result;
}

std::size_t component_count(std::span<const Edge> edges, std::size_t n) {
    for (const Edge& e : edges) {
        if (e.u >= n || e.v >= n) throw InvalidParameter("edge endpoint out of range");
    }
    // Plain union-find: the pseudotree labels do not matter here.
    std::vector<std::uint32_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<std::uint32_t>(i);
    auto find = [&](std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    std::size_t components = n;
    for (const Edge& e : edges) {
        const std::uint32_t a = find(e.u);
        const std::uint32_t b = find(e.v);
        if (a != b) {
            parent[a] = b;
            --components;
        }
    }
    return components;
}

std::uint64_t count_orientations(std::span<const Edge> edges, std::size_t n) {
    check_edges(edges, n);
    UnionFindPF uf;
    if (!pseudoforest_unchecked(edges, n, uf)) return 0;
    const std::size_t c = uf.component_count();
    if (c >= 64) throw InvalidParameter("orientation count 2^" + std::to_string(c) + " does not fit in 64 bits");
    return std::uint64_t{1} << c;
}

}  // namespace shockhash
