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

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <shockhash/hashing.hpp>
#include <shockhash/pseudoforest.hpp>

namespace shockhash {

//! How a leaf searches its seed. The numeric values are part of the descriptor format.
enum class LeafMode : std::uint8_t {
    plain = 0,          //!< one seed per trial
    rotate = 1,         //!< rotation fitting: n rotations of the second key set per base seed
    rotate_cached = 2,  //!< rotation fitting, first key set rehashed only every cache period
};

std::string_view to_string(LeafMode mode);
std::optional<LeafMode> parse_leaf_mode(std::string_view name);

inline constexpr unsigned kDefaultCachePeriod = 8;

//! Hash caching only pays off (and only costs negligible space) for large leaves
constexpr unsigned effective_cache_period(unsigned n, unsigned cache_period = kDefaultCachePeriod) {
    return n > 32 ? cache_period : 1;
}

constexpr std::uint64_t full_mask(unsigned n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

//! Cyclic left rotation of the low n bits by r, 0 <= r < n
constexpr std::uint64_t rotate_cells(std::uint64_t mask, unsigned r, unsigned n) {
    if (r == 0) return mask;
    return ((mask << r) | (mask >> (n - r))) & full_mask(n);
}

//! Bit j set iff cell j is a candidate cell of some key
struct CellMask {
    std::uint64_t bits{0};
    unsigned n{0};

    [[nodiscard]] constexpr bool covers_all() const { return bits == full_mask(n); }
};

//! Instrumentation for one search (callers aggregate per worker)
struct SearchCounters {
    std::uint64_t base_seeds{0};            //!< seeds for which keys were hashed
    std::uint64_t key_hashes{0};            //!< (key, seed) candidate-cell evaluations
    std::uint64_t unshifted_set_hashes{0};  //!< of those, evaluations for the unrotated key set
    std::uint64_t filter_checks{0};         //!< mask coverage tests (one per seed or rotation)
    std::uint64_t filter_passes{0};
    std::uint64_t exact_checks{0};  //!< union-find pseudoforest tests

    void merge(const SearchCounters& other);
};

//! Seed plus the per-key choice bits, in the order of the input keys
struct LeafSolution {
    std::uint64_t encoded_seed{0};
    std::vector<std::uint8_t> choices;
};

//! OR over keys of both candidate cells under `seed`. Throws UnsupportedLeafSize for n > 64 or n = 0.
CellMask build_mask(std::span<const HashedKey> keys, Seed seed, unsigned n);

//! Minimum seed s whose graph covers every cell and is a pseudoforest; n = keys.size().
LeafSolution search_plain(std::span<const HashedKey> keys, SearchCounters* counters = nullptr);

//! Minimum (base seed i, rotation r) in lexicographic order; encoded seed i * n + r.
LeafSolution search_rotate(std::span<const HashedKey> keys, SearchCounters* counters = nullptr);

//! search_rotate with the unrotated set hashed by seed x - (x mod k); k applies only for n > 32.
LeafSolution search_rotate_cached(std::span<const HashedKey> keys, unsigned cache_period = kDefaultCachePeriod,
                                  SearchCounters* counters = nullptr);

LeafSolution search_leaf(std::span<const HashedKey> keys, LeafMode mode, SearchCounters* counters = nullptr);

//! Final cell of a key in a leaf of n cells given its stored choice bit
std::uint32_t query_leaf(const HashedKey& k, std::uint64_t encoded_seed, unsigned n, LeafMode mode, unsigned choice,
                         unsigned cache_period = kDefaultCachePeriod);

//! 1-based number of hashing rounds a solution took: q + 1 for plain, floor(q / n) + 1 for rotation modes
constexpr std::uint64_t trials_used(std::uint64_t encoded_seed, unsigned n, LeafMode mode) {
    return mode == LeafMode::plain ? encoded_seed + 1 : encoded_seed / n + 1;
}

//! Edge list of the graph the solution was found on (after rotation)
std::vector<Edge> solution_edges(std::span<const HashedKey> keys, std::uint64_t encoded_seed, LeafMode mode,
                                 unsigned cache_period = kDefaultCachePeriod);

//! Brute-force baseline: minimum seed whose single hash h0 is already a bijection onto [0, n)
std::uint64_t search_bijection(std::span<const HashedKey> keys, SearchCounters* counters = nullptr);

}  // namespace shockhash
