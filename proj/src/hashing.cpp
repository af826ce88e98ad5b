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

#include <shockhash/hashing.hpp>

#include <bit>
#include <cstring>
#include <numeric>

#include <shockhash/errors.hpp>

namespace shockhash {

namespace {

    inline std::uint64_t load_le64(const unsigned char* p) {
        std::uint64_t v;
        std::memcpy(&v, p, sizeof v);
        if constexpr (std::endian::native == std::endian::big) {
            v = __builtin_bswap64(v);
        }
        return v;
    }

    constexpr std::uint64_t fmix64(std::uint64_t k) {
        k ^= k >> 33;
        k *= 0xff51afd7ed558ccdULL;
        k ^= k >> 33;
        k *= 0xc4ceb9fe1a85ec53ULL;
        k ^= k >> 33;
        return k;
    }

}  // namespace

std::pair<std::uint64_t, std::uint64_t> murmur3_x64_128(const void* data, std::size_t len, std::uint64_t seed) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    const std::size_t nblocks = len / 16;

    std::uint64_t h1 = seed;
    std::uint64_t h2 = seed;
    constexpr std::uint64_t c1 = 0x87c37b91114253d5ULL;
    constexpr std::uint64_t c2 = 0x4cf5ad432745937fULL;

    for (std::size_t i = 0; i < nblocks; ++i) {
        std::uint64_t k1 = load_le64(bytes + 16 * i);
        std::uint64_t k2 = load_le64(bytes + 16 * i + 8);

        k1 *= c1;
        k1 = std::rotl(k1, 31);
        k1 *= c2;
        h1 ^= k1;
        h1 = std::rotl(h1, 27);
        h1 += h2;
        h1 = h1 * 5 + 0x52dce729;

        k2 *= c2;
        k2 = std::rotl(k2, 33);
        k2 *= c1;
        h2 ^= k2;
        h2 = std::rotl(h2, 31);
        h2 += h1;
        h2 = h2 * 5 + 0x38495ab5;
    }

    const unsigned char* tail = bytes + nblocks * 16;
    std::uint64_t k1 = 0;
    std::uint64_t k2 = 0;
    switch (len & 15) {
        case 15: k2 ^= std::uint64_t{tail[14]} << 48; [[fallthrough]];
        case 14: k2 ^= std::uint64_t{tail[13]} << 40; [[fallthrough]];
        case 13: k2 ^= std::uint64_t{tail[12]} << 32; [[fallthrough]];
        case 12: k2 ^= std::uint64_t{tail[11]} << 24; [[fallthrough]];
        case 11: k2 ^= std::uint64_t{tail[10]} << 16; [[fallthrough]];
        case 10: k2 ^= std::uint64_t{tail[9]} << 8; [[fallthrough]];
        case 9:
            k2 ^= std::uint64_t{tail[8]};
            k2 *= c2;
            k2 = std::rotl(k2, 33);
            k2 *= c1;
            h2 ^= k2;
            [[fallthrough]];
        case 8: k1 ^= std::uint64_t{tail[7]} << 56; [[fallthrough]];
        case 7: k1 ^= std::uint64_t{tail[6]} << 48; [[fallthrough]];
        case 6: k1 ^= std::uint64_t{tail[5]} << 40; [[fallthrough]];
        case 5: k1 ^= std::uint64_t{tail[4]} << 32; [[fallthrough]];
        case 4: k1 ^= std::uint64_t{tail[3]} << 24; [[fallthrough]];
        case 3: k1 ^= std::uint64_t{tail[2]} << 16; [[fallthrough]];
        case 2: k1 ^= std::uint64_t{tail[1]} << 8; [[fallthrough]];
        case 1:
            k1 ^= std::uint64_t{tail[0]};
            k1 *= c1;
            k1 = std::rotl(k1, 31);
            k1 *= c2;
            h1 ^= k1;
            break;
        default: break;
    }

    h1 ^= len;
    h2 ^= len;
    h1 += h2;
    h2 += h1;
    h1 = fmix64(h1);
    h2 = fmix64(h2);
    h1 += h2;
    h2 += h1;
    return {h1, h2};
}

HashedKey master_hash(std::string_view key) {
    const auto [h1, h2] = murmur3_x64_128(key.data(), key.size(), 0);
    return {h1, h2};
}

HashedKey master_hash(std::span<const std::byte> key) {
    const auto [h1, h2] = murmur3_x64_128(key.data(), key.size(), 0);
    return {h1, h2};
}

std::uint32_t leaf_hash(const HashedKey& k, Seed seed, unsigned which, unsigned n) {
    if (n == 0 || n > kMaxLeafSize) {
        throw InvalidParameter("leaf size must be in [1, 64], got " + std::to_string(n));
    }
    if (which > 1) {
        throw InvalidParameter("hash function index must be 0 or 1");
    }
    const LeafCells cells = leaf_cells(k, seed, n);
    return which == 0 ? cells.h0 : cells.h1;
}

unsigned split_hash(const HashedKey& k, Seed seed, std::span<const std::uint32_t> part_sizes) {
    if (part_sizes.size() < 2) {
        throw InvalidParameter("a splitting needs at least two parts");
    }
    const std::uint64_t total = std::accumulate(part_sizes.begin(), part_sizes.end(), std::uint64_t{0});
    if (total == 0) {
        throw InvalidParameter("part sizes sum to zero");
    }
    const std::uint64_t pos = split_position(k, seed, total, part_sizes.size());
    std::uint64_t end = 0;
    for (unsigned j = 0; j < part_sizes.size(); ++j) {
        end += part_sizes[j];
        if (pos < end) return j;
    }
    return static_cast<unsigned>(part_sizes.size() - 1);  // unreachable: pos < total
}

std::vector<HashedKey> synthetic_hashed_keys(std::uint64_t generator_seed, std::size_t count) {
    std::vector<HashedKey> keys(count);
    for (std::size_t i = 0; i < count; ++i) keys[i] = synthetic_hashed_key(generator_seed, i);
    return keys;
}

std::string synthetic_key(std::uint64_t generator_seed, std::uint64_t index) {
    static constexpr char kHex[] = "0123456789abcdef";
    static constexpr char kFiller[] = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
    std::string key;
    key.reserve(48);
    key.push_back('k');
    std::uint64_t v = index;
    do {
        key.push_back(kHex[v & 15]);
        v >>= 4;
    } while (v != 0);
    key.push_back(':');
    std::uint64_t state = remix(generator_seed * detail::kGolden + index);
    const std::size_t filler = 4 + mul_high(state, 28);
    for (std::size_t i = 0; i < filler; ++i) {
        state = remix(state + detail::kGolden);
        key.push_back(kFiller[mul_high(state, sizeof kFiller - 1)]);
    }
    return key;
}

std::vector<std::string> synthetic_keys(std::uint64_t generator_seed, std::size_t count) {
    std::vector<std::string> keys;
    keys.reserve(count);
    for (std::size_t i = 0; i < count; ++i) keys.push_back(synthetic_key(generator_seed, i));
    return keys;
}

}  // namespace shockhash
