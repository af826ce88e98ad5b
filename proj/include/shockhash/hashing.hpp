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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace shockhash {

//! Identifier written into descriptor headers for the master hash below (MurmurHash3 x64 128, seed 0)
inline constexpr std::uint8_t kMasterHashMurmur3x64_128 = 1;

//! Largest leaf for which the candidate cells of a leaf fit in one 64-bit word
inline constexpr unsigned kMaxLeafSize = 64;

using Seed = std::uint64_t;

//! 128-bit master hash code of a key. Every other hash value is derived from it.
struct HashedKey {
    std::uint64_t hi{0};
    std::uint64_t lo{0};

    friend constexpr auto operator<=>(const HashedKey&, const HashedKey&) = default;
};

//! David Stafford's mix13 variant of the MurmurHash3 64-bit finalizer
constexpr std::uint64_t remix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

//! High word of the 128-bit product, i.e. floor(x * range / 2^64): maps a uniform word to [0, range)
constexpr std::uint64_t mul_high(std::uint64_t x, std::uint64_t range) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * range) >> 64);
}

HashedKey master_hash(std::string_view key);
HashedKey master_hash(std::span<const std::byte> key);

//! Raw MurmurHash3_x64_128 (exposed for the reference vectors in the tests)
std::pair<std::uint64_t, std::uint64_t> murmur3_x64_128(const void* data, std::size_t len, std::uint64_t seed);

namespace detail {

    inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
    inline constexpr std::uint64_t kLeafTag0 = 0x2d358dccaa6c78a5ULL;
    inline constexpr std::uint64_t kLeafTag1 = 0x8bb84b93962eacc9ULL;
    inline constexpr std::uint64_t kSideTag = 0x4b33a62ed433d4a3ULL;
    inline constexpr std::uint64_t kSplitTag = 0x3cd0eb9d47532dfbULL;

    //! Seed-independent part of a hash family; distinct tags give independent families
    constexpr std::uint64_t family_base(const HashedKey& k, std::uint64_t tag) { return remix(k.lo ^ remix(k.hi + tag)); }

    //! Hash of seed `seed` given the family base: a single remix, so searches precompute the base per key
    constexpr std::uint64_t seeded(std::uint64_t base, Seed seed) { return remix(base + seed * kGolden); }

    //! One 64-bit value per (key, seed, tag)
    constexpr std::uint64_t seeded_mix(const HashedKey& k, Seed seed, std::uint64_t tag) {
        return seeded(family_base(k, tag), seed);
    }

    constexpr std::uint64_t split_tag(std::uint64_t node_size, std::uint64_t fanout) {
        return remix(kSplitTag + (node_size << 8) + fanout);
    }

}  // namespace detail

//! Both candidate cells of a key in a leaf of n cells
struct LeafCells {
    std::uint32_t h0;
    std::uint32_t h1;
};

//! Family bases of the leaf hash functions of one key
struct LeafBases {
    std::uint64_t h0;
    std::uint64_t h1;
    std::uint64_t side;
};

constexpr LeafBases leaf_bases(const HashedKey& k) {
    return {detail::family_base(k, detail::kLeafTag0), detail::family_base(k, detail::kLeafTag1),
            detail::family_base(k, detail::kSideTag)};
}

//! leaf_cells from precomputed bases
constexpr LeafCells leaf_cells(const LeafBases& b, Seed seed, unsigned n) {
    const auto h0 = static_cast<std::uint32_t>(mul_high(detail::seeded(b.h0, seed), n));
    if (n == 1) return {0, 0};
    auto h1 = h0 + 1 + static_cast<std::uint32_t>(mul_high(detail::seeded(b.h1, seed), n - 1));
    if (h1 >= n) h1 -= n;
    return {h0, h1};
}

//! h0 is uniform on [0, n); h1 is uniform on the n - 1 other cells (n = 1 gives the self-loop 0, 0).
//! Unchecked: 1 <= n <= 64.
constexpr LeafCells leaf_cells(const HashedKey& k, Seed seed, unsigned n) { return leaf_cells(leaf_bases(k), seed, n); }

//! Checked single candidate cell h_which(k) for leaf size n. Throws InvalidParameter unless 1 <= n <= 64.
std::uint32_t leaf_hash(const HashedKey& k, Seed seed, unsigned which, unsigned n);

//! One bit per (key, base seed) choosing the rotation-fitting set: 0 = unshifted set, 1 = rotated set
constexpr unsigned rotation_side(const LeafBases& b, Seed base_seed) {
    return static_cast<unsigned>(detail::seeded(b.side, base_seed) >> 63);
}

constexpr unsigned rotation_side(const HashedKey& k, Seed base_seed) {
    return static_cast<unsigned>(detail::seeded_mix(k, base_seed, detail::kSideTag) >> 63);
}

//! Position in [0, node_size) used by splittings; the part is the prefix-sum interval containing it.
constexpr std::uint64_t split_position(const HashedKey& k, Seed seed, std::uint64_t node_size, std::uint64_t fanout) {
    return mul_high(detail::seeded_mix(k, seed, detail::split_tag(node_size, fanout)), node_size);
}

//! Family base of split_position for one key and node shape
constexpr std::uint64_t split_base(const HashedKey& k, std::uint64_t node_size, std::uint64_t fanout) {
    return detail::family_base(k, detail::split_tag(node_size, fanout));
}

//! Part of the key under the split seed: part j is hit with probability part_sizes[j] / sum.
//! Throws InvalidParameter for fewer than two parts or an all-zero size list.
unsigned split_hash(const HashedKey& k, Seed seed, std::span<const std::uint32_t> part_sizes);

//! Bucket in [0, bucket_count)
constexpr std::uint64_t bucket_of(const HashedKey& k, std::uint64_t bucket_count) {
    return mul_high(k.hi, bucket_count);
}

//! Counter-based synthetic master hash codes, reproducible from (generator seed, index)
constexpr HashedKey synthetic_hashed_key(std::uint64_t generator_seed, std::uint64_t index) {
    const std::uint64_t base = remix(generator_seed) ^ (index * 2 * detail::kGolden);
    return {remix(base), remix(base + detail::kGolden)};
}

std::vector<HashedKey> synthetic_hashed_keys(std::uint64_t generator_seed, std::size_t count);

//! Synthetic byte-string key number `index`; distinct indices give distinct strings, never containing '\n'
std::string synthetic_key(std::uint64_t generator_seed, std::uint64_t index);

std::vector<std::string> synthetic_keys(std::uint64_t generator_seed, std::size_t count);

}  // namespace shockhash
