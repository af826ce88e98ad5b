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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <shockhash/errors.hpp>

namespace shockhash {

//! Edge of the cuckoo graph: the two candidate cells of one key. u == v is a self-loop.
struct Edge {
    std::uint32_t u;
    std::uint32_t v;
};

//! Disjoint-set forest over cells that tracks, per component, whether it already holds a cycle.
//! Components are trees (edges = nodes - 1) or pseudotrees (edges = nodes); an edge that would
//! exceed that is rejected and poisons the structure until reset().
class UnionFindPF {
  public:
    explicit UnionFindPF(std::size_t n = 0) { reset(n); }

    void reset(std::size_t n) {
        parent_.resize(n);
        size_.assign(n, 1);
        cyclic_.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) parent_[i] = static_cast<std::uint32_t>(i);
        poisoned_ = false;
    }

    [[nodiscard]] std::size_t node_count() const { return parent_.size(); }
    [[nodiscard]] bool poisoned() const { return poisoned_; }

    //! Full path compression
    std::uint32_t find(std::uint32_t x) {
        std::uint32_t root = x;
        while (parent_[root] != root) root = parent_[root];
        while (parent_[x] != root) {
            const std::uint32_t next = parent_[x];
            parent_[x] = root;
            x = next;
        }
        return root;
    }

    //! Accepts iff every component stays a tree or pseudotree after adding {u, v}
    [[nodiscard]] bool try_insert_edge(std::uint32_t u, std::uint32_t v) {
        if (u >= parent_.size() || v >= parent_.size()) {
            throw InvalidParameter("edge endpoint out of range");
        }
        if (poisoned_) {
            throw ContractViolation("union-find used after a rejected edge; call reset()");
        }
        return insert_unchecked(u, v);
    }

    //! try_insert_edge without range and poison checks (hot loop of the leaf search)
    bool insert_unchecked(std::uint32_t u, std::uint32_t v) {
        std::uint32_t a = find(u);
        std::uint32_t b = find(v);
        if (a == b) {
            if (cyclic_[a]) return poison();
            cyclic_[a] = 1;
            return true;
        }
        if (cyclic_[a] && cyclic_[b]) return poison();
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        cyclic_[a] = static_cast<std::uint8_t>(cyclic_[a] | cyclic_[b]);
        return true;
    }

    [[nodiscard]] bool is_pseudotree(std::uint32_t x) { return cyclic_[find(x)] != 0; }
    [[nodiscard]] std::uint32_t component_size(std::uint32_t x) { return size_[find(x)]; }

    //! Parent pointer without compression (structural tests)
    [[nodiscard]] std::uint32_t parent_of(std::uint32_t x) const { return parent_[x]; }

    [[nodiscard]] std::size_t component_count() const {
        std::size_t roots = 0;
        for (std::size_t i = 0; i < parent_.size(); ++i) roots += parent_[i] == i;
        return roots;
    }

  private:
    bool poison() {
        poisoned_ = true;
        return false;
    }

    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> size_;
    std::vector<std::uint8_t> cyclic_;
    bool poisoned_{false};
};

//! One choice bit per key: 0 places the key in edge.u (its h0 cell), 1 in edge.v (its h1 cell)
struct Orientation {
    std::vector<std::uint8_t> choice;
};

//! True iff every component of the n-node graph has at most as many edges as nodes.
//! Throws InvalidParameter unless edges.size() == n.
bool is_pseudoforest(std::span<const Edge> edges, std::size_t n);

//! A 1-orientation of a pseudoforest with n edges on n nodes. Degree-1 nodes are peeled first; each
//! remaining cycle gives its lowest-index key the h0 cell. Throws ContractViolation on a non-pseudoforest.
Orientation orient(std::span<const Edge> edges, std::size_t n);

//! 2^(number of components) for a pseudoforest with n edges on n nodes, else 0.
//! Throws InvalidParameter if the count does not fit in 64 bits.
std::uint64_t count_orientations(std::span<const Edge> edges, std::size_t n);

//! Number of connected components (isolated nodes count)
std::size_t component_count(std::span<const Edge> edges, std::size_t n);

}  // namespace shockhash
