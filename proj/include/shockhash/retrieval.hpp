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
#include <vector>

#include <shockhash/hashing.hpp>
#include <shockhash/serialization.hpp>

namespace shockhash {

#ifndef SHOCKHASH_RIBBON_WIDTH
#define SHOCKHASH_RIBBON_WIDTH 128
#endif

//! 1-bit static function over a fixed key set, stored as the solution of a banded GF(2) system.
//! Row of key k: a random w-bit coefficient (lowest bit forced to 1) placed at a start column;
//! the stored bit is the parity of coefficient AND solution[start, start + w).
class RibbonRetrieval {
  public:
    static constexpr unsigned kBandWidth = SHOCKHASH_RIBBON_WIDTH;
    static constexpr double kDefaultEpsilon = 0.05;
    static constexpr unsigned kMaxAttempts = 64;

    RibbonRetrieval() = default;

    //! Solves for bits[i] at keys[i]. Keys must be distinct. On an inconsistent system the seed is
    //! incremented and everything is rebuilt; ConstructionFailure after kMaxAttempts.
    static RibbonRetrieval build(std::span<const HashedKey> keys, std::span<const std::uint8_t> bits,
                                 double epsilon = kDefaultEpsilon);

    //! m = N + ceil(N * epsilon) + w - 1, or 0 for an empty key set
    static std::uint64_t column_count_for(std::uint64_t keys, std::uint32_t epsilon_fixed);

    //! Stored bit for construction keys, an arbitrary but fixed bit for any other key
    [[nodiscard]] unsigned query(const HashedKey& k) const;

    [[nodiscard]] double epsilon() const { return static_cast<double>(epsilon_fixed_) / 65536.0; }
    [[nodiscard]] std::uint32_t epsilon_fixed() const { return epsilon_fixed_; }
    [[nodiscard]] std::uint64_t seed() const { return seed_; }
    [[nodiscard]] std::uint64_t column_count() const { return columns_; }
    //! Number of solution attempts the last build needed (1 = first seed worked)
    [[nodiscard]] unsigned attempts() const { return attempts_; }

    //! Serialized block: u32 epsilon (16.16 fixed point), u64 seed, u64 m, ceil(m / 64) words
    void serialize(ByteWriter& out) const;
    static RibbonRetrieval deserialize(ByteReader& in);
    [[nodiscard]] std::size_t serialized_bits() const { return 8 * (4 + 8 + 8) + 64 * word_count(); }
    [[nodiscard]] std::size_t solution_bits() const { return 64 * word_count(); }

  private:
    [[nodiscard]] std::size_t word_count() const { return (columns_ + 63) / 64; }
    [[nodiscard]] std::uint64_t start_count() const { return columns_ - kBandWidth + 1; }

    std::uint32_t epsilon_fixed_{0};
    std::uint64_t seed_{0};
    std::uint64_t columns_{0};
    unsigned attempts_{0};
    std::vector<std::uint64_t> solution_;  // word_count() words plus padding for unaligned window reads
};

}  // namespace shockhash
