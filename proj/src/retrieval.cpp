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

#include <shockhash/retrieval.hpp>

#include <bit>
#include <cmath>
#include <string>

#include <shockhash/errors.hpp>

namespace shockhash {

namespace {

#if SHOCKHASH_RIBBON_WIDTH == 128
    using Coeff = unsigned __int128;
#elif SHOCKHASH_RIBBON_WIDTH == 64
    using Coeff = std::uint64_t;
#else
#error "SHOCKHASH_RIBBON_WIDTH must be 64 or 128"
#endif

    constexpr unsigned kWidth = RibbonRetrieval::kBandWidth;
    constexpr std::uint64_t kRibbonTag = 0x6a09e667f3bcc909ULL;
    constexpr std::uint64_t kCoeffTag = 0xbb67ae8584caa73bULL;
    constexpr std::size_t kPaddingWords = kWidth / 64 + 1;

    unsigned parity(Coeff x) {
        if constexpr (kWidth == 128) {
            return static_cast<unsigned>(std::popcount(static_cast<std::uint64_t>(x) ^
                                                       static_cast<std::uint64_t>(x >> 64)) &
                                         1);
        } else {
            return static_cast<unsigned>(std::popcount(static_cast<std::uint64_t>(x)) & 1);
        }
    }

    unsigned countr_zero(Coeff x) {
        if constexpr (kWidth == 128) {
            const auto low = static_cast<std::uint64_t>(x);
            return low != 0 ? static_cast<unsigned>(std::countr_zero(low))
                            : 64 + static_cast<unsigned>(std::countr_zero(static_cast<std::uint64_t>(x >> 64)));
        } else {
            return static_cast<unsigned>(std::countr_zero(static_cast<std::uint64_t>(x)));
        }
    }

    struct Row {
        std::uint64_t start;
        Coeff coeff;
    };

    Row make_row(const HashedKey& k, std::uint64_t seed, std::uint64_t starts) {
        const std::uint64_t x = detail::seeded_mix(k, seed, kRibbonTag);
        Coeff coeff = remix(x ^ kCoeffTag);
        if constexpr (kWidth == 128) coeff |= static_cast<Coeff>(remix(x + kCoeffTag)) << 64;
        return {mul_high(x, starts), coeff | 1};
    }

    //! w bits of the solution starting at column `start`, bit j = column start + j
    Coeff window_at(const std::vector<std::uint64_t>& words, std::uint64_t start) {
        const std::size_t word = start / 64;
        const unsigned offset = start % 64;
        Coeff out = 0;
        for (std::size_t i = 0; i <= kWidth / 64; ++i) {
            const Coeff w = words[word + i];
            const int shift = static_cast<int>(64 * i) - static_cast<int>(offset);
            if (shift >= static_cast<int>(kWidth)) break;
            out |= shift >= 0 ? w << shift : w >> -shift;
        }
        return out;
    }

}  // namespace

std::uint64_t RibbonRetrieval::column_count_for(std::uint64_t keys, std::uint32_t epsilon_fixed) {
    if (keys == 0) return 0;
    const auto slack = static_cast<std::uint64_t>((static_cast<unsigned __int128>(keys) * epsilon_fixed + 65535) >> 16);
    return keys + slack + kWidth - 1;
}

RibbonRetrieval RibbonRetrieval::build(std::span<const HashedKey> keys, std::span<const std::uint8_t> bits,
                                       double epsilon) {
    if (keys.size() != bits.size()) throw InvalidParameter("retrieval: key and bit counts differ");
    if (!(epsilon > 0) || epsilon >= 65536.0) throw InvalidParameter("retrieval: epsilon must be positive");

    RibbonRetrieval out;
    out.epsilon_fixed_ = static_cast<std::uint32_t>(std::lround(epsilon * 65536.0));
    if (out.epsilon_fixed_ == 0) out.epsilon_fixed_ = 1;
    out.columns_ = column_count_for(keys.size(), out.epsilon_fixed_);
    if (keys.empty()) {
        out.attempts_ = 1;
        return out;
    }

    const std::uint64_t m = out.columns_;
    const std::uint64_t starts = out.start_count();
    std::vector<Coeff> coeff(m);
    std::vector<std::uint8_t> rhs(m);
    std::vector<std::uint32_t> order(keys.size());
    std::vector<std::uint64_t> bucket_start(starts + 1);

    for (std::uint64_t seed = 0; seed < kMaxAttempts; ++seed) {
        // counting sort by start column keeps the elimination front moving forward through memory
        std::fill(bucket_start.begin(), bucket_start.end(), 0);
        for (const HashedKey& k : keys) ++bucket_start[make_row(k, seed, starts).start + 1];
        for (std::uint64_t i = 1; i <= starts; ++i) bucket_start[i] += bucket_start[i - 1];
        for (std::size_t i = 0; i < keys.size(); ++i) {
            order[bucket_start[make_row(keys[i], seed, starts).start]++] = static_cast<std::uint32_t>(i);
        }

        std::fill(coeff.begin(), coeff.end(), 0);
        std::fill(rhs.begin(), rhs.end(), 0);
        bool ok = true;
        for (const std::uint32_t i : order) {
            auto [pos, c] = make_row(keys[i], seed, starts);
            std::uint8_t b = bits[i] & 1;
            while (true) {
                if (coeff[pos] == 0) {
                    coeff[pos] = c;
                    rhs[pos] = b;
                    break;
                }
                c ^= coeff[pos];
                b ^= rhs[pos];
                if (c == 0) {
                    ok = b == 0;
                    break;
                }
                const unsigned tz = countr_zero(c);
                pos += tz;
                c >>= tz;
            }
            if (!ok) break;
        }
        if (!ok) continue;

        out.seed_ = seed;
        out.attempts_ = static_cast<unsigned>(seed + 1);
        out.solution_.assign(out.word_count() + kPaddingWords, 0);
        Coeff window = 0;  // bit j = solution column (i + 1 + j)
        for (std::uint64_t i = m; i-- > 0;) {
            unsigned bit = 0;
            if (coeff[i] != 0) bit = rhs[i] ^ parity((coeff[i] >> 1) & window);
            window = (window << 1) | bit;
            if (bit != 0) out.solution_[i / 64] |= std::uint64_t{1} << (i % 64);
        }
        return out;
    }
    throw ConstructionFailure("retrieval: no solvable seed within " + std::to_string(kMaxAttempts) + " attempts");
}

unsigned RibbonRetrieval::query(const HashedKey& k) const {
    if (columns_ == 0) return 0;
    const Row row = make_row(k, seed_, start_count());
    return parity(row.coeff & window_at(solution_, row.start));
}

void RibbonRetrieval::serialize(ByteWriter& out) const {
    out.put(epsilon_fixed_);
    out.put(seed_);
    out.put(columns_);
    out.put_words(std::span<const std::uint64_t>(solution_.data(), word_count()));
}

RibbonRetrieval RibbonRetrieval::deserialize(ByteReader& in) {
    RibbonRetrieval out;
    out.epsilon_fixed_ = in.get<std::uint32_t>();
    out.seed_ = in.get<std::uint64_t>();
    out.columns_ = in.get<std::uint64_t>();
    if (out.columns_ != 0 && out.columns_ < kWidth) throw FormatError("retrieval: column count below band width");
    if (out.word_count() > in.remaining() / 8) throw FormatError("descriptor truncated");
    out.solution_ = in.get_words(out.word_count());
    if (out.columns_ % 64 != 0 && (out.solution_.back() >> (out.columns_ % 64)) != 0) {
        throw FormatError("retrieval: nonzero padding bits");
    }
    out.solution_.resize(out.word_count() + kPaddingWords, 0);
    out.attempts_ = 0;
    return out;
}

}  // namespace shockhash
