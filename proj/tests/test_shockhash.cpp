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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include <shockhash/errors.hpp>
#include <shockhash/experiments.hpp>
#include <shockhash/shockhash.hpp>

#include "graph_oracle.hpp"

using namespace shockhash;

namespace {

std::vector<HashedKey> leaf(unsigned n, std::uint64_t rep) { return experiments::random_leaf(n, rep, 2024); }

bool placement_is_bijection(std::span<const HashedKey> keys, const LeafSolution& sol, LeafMode mode) {
    const auto n = static_cast<unsigned>(keys.size());
    std::vector<int> used(n, 0);
    for (unsigned i = 0; i < n; ++i) {
        const std::uint32_t cell = query_leaf(keys[i], sol.encoded_seed, n, mode, sol.choices[i]);
        if (cell >= n || used[cell]++) return false;
    }
    return true;
}

// Minimum (base seed, rotation) by direct evaluation of the rotation-fitting definition
std::uint64_t naive_rotation_seed(std::span<const HashedKey> keys, unsigned period) {
    const auto n = static_cast<unsigned>(keys.size());
    for (std::uint64_t x = 0;; ++x) {
        const std::uint64_t aligned = x - x % period;
        for (unsigned r = 0; r < n; ++r) {
            std::vector<Edge> edges(n);
            for (unsigned i = 0; i < n; ++i) {
                const bool shifted = rotation_side(keys[i], aligned) == 1;
                const std::uint64_t s = shifted ? x : aligned;
                std::uint32_t a = leaf_hash(keys[i], s, 0, n);
                std::uint32_t b = leaf_hash(keys[i], s, 1, n);
                if (shifted) {
                    a = (a + r) % n;
                    b = (b + r) % n;
                }
                edges[i] = {a, b};
            }
            if (oracle::components(edges, n).pseudoforest) return x * n + r;
        }
    }
}

}  // namespace

TEST_CASE("cell mask rotation") {
    CHECK(rotate_cells(0b0011, 1, 4) == 0b0110);
    CHECK(rotate_cells(0b1001, 1, 4) == 0b0011);
    CHECK(rotate_cells(0b1001, 0, 4) == 0b1001);
    CHECK(rotate_cells(1, 3, 4) == 0b1000);
    CHECK(rotate_cells(1ULL << 63, 1, 64) == 1);
    CHECK(full_mask(64) == ~0ULL);
    CHECK(full_mask(5) == 0b11111);
}

TEST_CASE("build mask marks exactly the candidate cells") {
    for (std::uint64_t rep = 0; rep < 50; ++rep) {
        const auto keys = leaf(20, rep);
        const CellMask mask = build_mask(keys, rep, 20);
        std::uint64_t expected = 0;
        for (const HashedKey& k : keys) {
            expected |= 1ULL << leaf_hash(k, rep, 0, 20);
            expected |= 1ULL << leaf_hash(k, rep, 1, 20);
        }
        CHECK(mask.bits == expected);
        CHECK(mask.covers_all() == (expected == full_mask(20)));
    }
    CHECK_THROWS_AS(build_mask(leaf(4, 0), 0, 65), UnsupportedLeafSize);
}

TEST_CASE("plain search finds the minimum seed of a naive scan") {
    for (unsigned n = 1; n <= 12; ++n) {
        for (std::uint64_t rep = 0; rep < 20; ++rep) {
            const auto keys = leaf(n, rep);
            SearchCounters c;
            const LeafSolution sol = search_plain(keys, &c);
            CHECK(sol.encoded_seed == oracle::naive_min_seed(keys));
            CHECK(placement_is_bijection(keys, sol, LeafMode::plain));
            CHECK(c.base_seeds == sol.encoded_seed + 1);
            CHECK(c.exact_checks == c.filter_passes);
            CHECK(c.key_hashes == n * c.base_seeds);
        }
    }
}

TEST_CASE("rotation fitting finds the lexicographically minimum base seed and rotation") {
    for (const unsigned n : {2u, 5u, 9u, 14u, 20u}) {
        for (std::uint64_t rep = 0; rep < 8; ++rep) {
            const auto keys = leaf(n, rep);
            const LeafSolution sol = search_rotate(keys);
            CHECK(sol.encoded_seed == naive_rotation_seed(keys, 1));
            CHECK(placement_is_bijection(keys, sol, LeafMode::rotate));
        }
    }
}

TEST_CASE("cached rotation fitting equals plain rotation fitting up to 32 keys") {
    for (const unsigned n : {8u, 24u, 32u}) {
        for (std::uint64_t rep = 0; rep < 10; ++rep) {
            const auto keys = leaf(n, rep);
            CHECK(search_rotate_cached(keys).encoded_seed == search_rotate(keys).encoded_seed);
        }
    }
}

TEST_CASE("cached rotation fitting above 32 keys follows the aligned-seed definition") {
    for (std::uint64_t rep = 0; rep < 3; ++rep) {
        const auto keys = leaf(34, rep);
        SearchCounters c;
        const LeafSolution sol = search_rotate_cached(keys, kDefaultCachePeriod, &c);
        CHECK(sol.encoded_seed == naive_rotation_seed(keys, kDefaultCachePeriod));
        CHECK(placement_is_bijection(keys, sol, LeafMode::rotate_cached));
        // the unshifted set is hashed only once per cache period
        CHECK(c.unshifted_set_hashes <= 34 * ((c.base_seeds + kDefaultCachePeriod - 1) / kDefaultCachePeriod));
    }
    CHECK_THROWS_AS(search_rotate_cached(leaf(34, 0), 0), InvalidParameter);
}

TEST_CASE("solutions of larger leaves are valid in every mode") {
    for (const LeafMode mode : {LeafMode::plain, LeafMode::rotate, LeafMode::rotate_cached}) {
        for (const unsigned n : {1u, 2u, 16u, 30u, 40u}) {
            if (mode == LeafMode::plain && n > 30) continue;
            const auto keys = leaf(n, 99);
            const LeafSolution sol = search_leaf(keys, mode);
            CHECK(placement_is_bijection(keys, sol, mode));
            const std::vector<Edge> edges = solution_edges(keys, sol.encoded_seed, mode);
            CHECK(oracle::components(edges, n).pseudoforest);
        }
    }
}

TEST_CASE("trial counts from encoded seeds") {
    CHECK(trials_used(0, 10, LeafMode::plain) == 1);
    CHECK(trials_used(41, 10, LeafMode::plain) == 42);
    CHECK(trials_used(9, 10, LeafMode::rotate) == 1);
    CHECK(trials_used(10, 10, LeafMode::rotate) == 2);
    CHECK(trials_used(75, 30, LeafMode::rotate_cached) == 3);
}

TEST_CASE("bijection baseline returns a seed whose first hash is already a bijection") {
    for (const unsigned n : {1u, 3u, 6u}) {
        const auto keys = leaf(n, 3);
        const std::uint64_t seed = search_bijection(keys);
        std::vector<int> used(n, 0);
        for (const HashedKey& k : keys) ++used[leaf_hash(k, seed, 0, n)];
        for (const int u : used) CHECK(u == 1);
    }
}

TEST_CASE("leaf size limits") {
    const std::vector<HashedKey> none;
    CHECK_THROWS_AS(search_plain(none), UnsupportedLeafSize);
    CHECK_THROWS_AS(search_rotate(leaf(65, 0)), UnsupportedLeafSize);
}

TEST_CASE("leaf mode names") {
    for (const LeafMode m : {LeafMode::plain, LeafMode::rotate, LeafMode::rotate_cached}) {
        CHECK(parse_leaf_mode(to_string(m)) == m);
    }
    CHECK_FALSE(parse_leaf_mode("fast").has_value());
    CHECK(static_cast<int>(LeafMode::rotate_cached) == 2);
}
