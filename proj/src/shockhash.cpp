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

#include <shockhash/shockhash.hpp>

#include <array>
#include <limits>

namespace shockhash {

namespace {

    void check_leaf(std::size_t n) {
        if (n == 0 || n > kMaxLeafSize) {
            throw UnsupportedLeafSize("leaf size must be in [1, 64], got " + std::to_string(n));
        }
    }

    constexpr std::uint64_t cell_bit(std::uint32_t cell) { return std::uint64_t{1} << cell; }

    constexpr std::uint32_t shift_cell(std::uint32_t cell, unsigned r, unsigned n) {
        const std::uint32_t shifted = cell + r;
        return shifted >= n ? shifted - n : shifted;
    }

    //! Reusable scratch for one leaf search; cells never exceed one word, so fixed arrays suffice.
    struct Scratch {
        explicit Scratch(unsigned n) : uf(n) {}

        std::array<Edge, kMaxLeafSize> edges{};
        std::array<Edge, kMaxLeafSize> shifted{};
        std::array<std::uint8_t, kMaxLeafSize> side{};
        std::array<LeafBases, kMaxLeafSize> bases{};
        UnionFindPF uf;

        void load(std::span<const HashedKey> keys) {
            for (std::size_t i = 0; i < keys.size(); ++i) bases[i] = leaf_bases(keys[i]);
        }
    };

    bool exact_check(std::span<const Edge> edges, UnionFindPF& uf, SearchCounters& c) {
        ++c.exact_checks;
        uf.reset(edges.size());
        for (const Edge& e : edges) {
            if (!uf.insert_unchecked(e.u, e.v)) return false;
        }
        return true;
    }

    LeafSolution solved(std::uint64_t encoded_seed, std::span<const Edge> edges) {
        return {encoded_seed, orient(edges, edges.size()).choice};
    }

    LeafSolution search_rotation_fitting(std::span<const HashedKey> keys, unsigned cache_period, SearchCounters& c) {
        const auto n = static_cast<unsigned>(keys.size());
        const std::uint64_t full = full_mask(n);
        const std::uint64_t max_base = std::numeric_limits<std::uint64_t>::max() / n - 1;
        Scratch s(n);
        s.load(keys);
        std::uint64_t mask_unshifted = 0;

        for (std::uint64_t x = 0; x <= max_base; ++x) {
            ++c.base_seeds;
            const std::uint64_t aligned = x - x % cache_period;
            if (x == aligned) {
                mask_unshifted = 0;
                for (unsigned i = 0; i < n; ++i) {
                    s.side[i] = static_cast<std::uint8_t>(rotation_side(s.bases[i], aligned));
                    if (s.side[i] == 0) {
                        const LeafCells cells = leaf_cells(s.bases[i], aligned, n);
                        s.edges[i] = {cells.h0, cells.h1};
                        mask_unshifted |= cell_bit(cells.h0) | cell_bit(cells.h1);
                        ++c.key_hashes;
                        ++c.unshifted_set_hashes;
                    }
                }
            }
            std::uint64_t mask_shifted = 0;
            for (unsigned i = 0; i < n; ++i) {
                if (s.side[i] == 1) {
                    const LeafCells cells = leaf_cells(s.bases[i], x, n);
                    s.edges[i] = {cells.h0, cells.h1};
                    mask_shifted |= cell_bit(cells.h0) | cell_bit(cells.h1);
                    ++c.key_hashes;
                }
            }
            for (unsigned r = 0; r < n; ++r) {
                ++c.filter_checks;
                if ((mask_unshifted | rotate_cells(mask_shifted, r, n)) != full) continue;
                ++c.filter_passes;
                for (unsigned i = 0; i < n; ++i) {
                    s.shifted[i] = s.side[i] == 0 ? s.edges[i]
                                                  : Edge{shift_cell(s.edges[i].u, r, n), shift_cell(s.edges[i].v, r, n)};
                }
                const std::span<const Edge> graph(s.shifted.data(), n);
                if (exact_check(graph, s.uf, c)) return solved(x * n + r, graph);
            }
        }
        throw ConstructionFailure("rotation-fitting seed counter overflow");
    }

}  // namespace

std::string_view to_string(LeafMode mode) {
    switch (mode) {
        case LeafMode::plain: return "plain";
        case LeafMode::rotate: return "rotate";
        case LeafMode::rotate_cached: return "rotate-cached";
    }
    return "unknown";
}

std::optional<LeafMode> parse_leaf_mode(std::string_view name) {
    if (name == "plain") return LeafMode::plain;
    if (name == "rotate") return LeafMode::rotate;
    if (name == "rotate-cached") return LeafMode::rotate_cached;
    return std::nullopt;
}

void SearchCounters::merge(const SearchCounters& other) {
    base_seeds += other.base_seeds;
    key_hashes += other.key_hashes;
    unshifted_set_hashes += other.unshifted_set_hashes;
    filter_checks += other.filter_checks;
    filter_passes += other.filter_passes;
    exact_checks += other.exact_checks;
}

CellMask build_mask(std::span<const HashedKey> keys, Seed seed, unsigned n) {
    check_leaf(n);
    CellMask mask{0, n};
    for (const HashedKey& k : keys) {
        const LeafCells cells = leaf_cells(k, seed, n);
        mask.bits |= cell_bit(cells.h0) | cell_bit(cells.h1);
    }
    return mask;
}

LeafSolution search_plain(std::span<const HashedKey> keys, SearchCounters* counters) {
    check_leaf(keys.size());
    SearchCounters local;
    SearchCounters& c = counters != nullptr ? *counters : local;
    const auto n = static_cast<unsigned>(keys.size());
    const std::uint64_t full = full_mask(n);
    Scratch s(n);
    s.load(keys);

    for (Seed seed = 0; seed < std::numeric_limits<Seed>::max(); ++seed) {
        ++c.base_seeds;
        std::uint64_t mask = 0;
        for (unsigned i = 0; i < n; ++i) {
            const LeafCells cells = leaf_cells(s.bases[i], seed, n);
            s.edges[i] = {cells.h0, cells.h1};
            mask |= cell_bit(cells.h0) | cell_bit(cells.h1);
        }
        c.key_hashes += n;
        ++c.filter_checks;
        if (mask != full) continue;
        ++c.filter_passes;
        const std::span<const Edge> graph(s.edges.data(), n);
        if (exact_check(graph, s.uf, c)) return solved(seed, graph);
    }
    throw ConstructionFailure("seed counter overflow");
}

LeafSolution search_rotate(std::span<const HashedKey> keys, SearchCounters* counters) {
    check_leaf(keys.size());
    SearchCounters local;
    return search_rotation_fitting(keys, 1, counters != nullptr ? *counters : local);
}

LeafSolution search_rotate_cached(std::span<const HashedKey> keys, unsigned cache_period, SearchCounters* counters) {
    check_leaf(keys.size());
    if (cache_period == 0) throw InvalidParameter("cache period must be at least 1");
    SearchCounters local;
    const unsigned k = effective_cache_period(static_cast<unsigned>(keys.size()), cache_period);
    return search_rotation_fitting(keys, k, counters != nullptr ? *counters : local);
}

LeafSolution search_leaf(std::span<const HashedKey> keys, LeafMode mode, SearchCounters* counters) {
    switch (mode) {
        case LeafMode::plain: return search_plain(keys, counters);
        case LeafMode::rotate: return search_rotate(keys, counters);
        case LeafMode::rotate_cached: return search_rotate_cached(keys, kDefaultCachePeriod, counters);
    }
    throw InvalidParameter("unknown leaf mode");
}

std::uint32_t query_leaf(const HashedKey& k, std::uint64_t encoded_seed, unsigned n, LeafMode mode, unsigned choice,
                         unsigned cache_period) {
    if (mode == LeafMode::plain) {
        const LeafCells cells = leaf_cells(k, encoded_seed, n);
        return choice != 0 ? cells.h1 : cells.h0;
    }
    const std::uint64_t x = encoded_seed / n;
    const auto r = static_cast<unsigned>(encoded_seed % n);
    const unsigned period = mode == LeafMode::rotate ? 1 : effective_cache_period(n, cache_period);
    const std::uint64_t aligned = x - x % period;
    const unsigned side = rotation_side(k, aligned);
    const LeafCells cells = leaf_cells(k, side == 0 ? aligned : x, n);
    const std::uint32_t cell = choice != 0 ? cells.h1 : cells.h0;
    return side == 0 ? cell : shift_cell(cell, r, n);
}

std::vector<Edge> solution_edges(std::span<const HashedKey> keys, std::uint64_t encoded_seed, LeafMode mode,
                                 unsigned cache_period) {
    check_leaf(keys.size());
    const auto n = static_cast<unsigned>(keys.size());
    std::vector<Edge> edges;
    edges.reserve(n);
    for (const HashedKey& k : keys) {
        edges.push_back({query_leaf(k, encoded_seed, n, mode, 0, cache_period),
                         query_leaf(k, encoded_seed, n, mode, 1, cache_period)});
    }
    return edges;
}

std::uint64_t search_bijection(std::span<const HashedKey> keys, SearchCounters* counters) {
    check_leaf(keys.size());
    SearchCounters local;
    SearchCounters& c = counters != nullptr ? *counters : local;
    const auto n = static_cast<unsigned>(keys.size());
    const std::uint64_t full = full_mask(n);
    std::array<std::uint64_t, kMaxLeafSize> bases{};
    for (unsigned i = 0; i < n; ++i) bases[i] = detail::family_base(keys[i], detail::kLeafTag0);
    for (Seed seed = 0; seed < std::numeric_limits<Seed>::max(); ++seed) {
        ++c.base_seeds;
        std::uint64_t mask = 0;
        for (unsigned i = 0; i < n; ++i) {
            mask |= cell_bit(static_cast<std::uint32_t>(mul_high(detail::seeded(bases[i], seed), n)));
        }
        c.key_hashes += n;
        if (mask == full) return seed;
    }
    throw ConstructionFailure("seed counter overflow");
}

}  // namespace shockhash
