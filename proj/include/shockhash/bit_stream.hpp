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

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <shockhash/errors.hpp>

namespace shockhash {

//! Append-only bit stream. Bit i lives in word i / 64 at position i % 64 (LSB first).
class BitWriter {
  public:
    void write(std::uint64_t value, unsigned width) {
        if (width == 0) return;
        if (width < 64) value &= (std::uint64_t{1} << width) - 1;
        const unsigned offset = bit_count_ % 64;
        if (offset == 0) words_.push_back(0);
        words_.back() |= value << offset;
        if (offset + width > 64) words_.push_back(value >> (64 - offset));
        bit_count_ += width;
    }

    void write_bit(bool bit) { write(bit ? 1 : 0, 1); }

    //! `count` one bits followed by a zero bit
    void write_unary(std::uint64_t count) {
        while (count >= 63) {
            write(~std::uint64_t{0} >> 1, 63);
            count -= 63;
        }
        write((std::uint64_t{1} << count) - 1, static_cast<unsigned>(count) + 1);
    }

    [[nodiscard]] std::size_t bit_count() const { return bit_count_; }
    [[nodiscard]] const std::vector<std::uint64_t>& words() const { return words_; }
    std::vector<std::uint64_t> release() { return std::move(words_); }

  private:
    std::vector<std::uint64_t> words_;
    std::size_t bit_count_{0};
};

//! Reader over [position, limit) of a word array written by BitWriter. Reading past limit throws FormatError.
class BitReader {
  public:
    BitReader(std::span<const std::uint64_t> words, std::size_t limit, std::size_t position = 0)
        : words_(words), limit_(limit), position_(position) {}

    std::uint64_t read(unsigned width) {
        if (width == 0) return 0;
        require(width);
        const std::size_t word = position_ / 64;
        const unsigned offset = position_ % 64;
        std::uint64_t value = words_[word] >> offset;
        if (offset + width > 64) value |= words_[word + 1] << (64 - offset);
        if (width < 64) value &= (std::uint64_t{1} << width) - 1;
        position_ += width;
        return value;
    }

    bool read_bit() { return read(1) != 0; }

    //! Number of one bits before the next zero bit (which is consumed)
    std::uint64_t read_unary() {
        std::uint64_t count = 0;
        while (true) {
            if (position_ >= limit_) throw FormatError("bit stream truncated inside a unary code");
            const unsigned offset = position_ % 64;
            const std::uint64_t rest = ~(words_[position_ / 64] >> offset);  // zeros of the stream become ones
            const unsigned available = 64 - offset;
            const auto ones = static_cast<unsigned>(std::countr_zero(rest));
            if (ones < available) {
                count += ones;
                position_ += ones + 1;
                if (position_ > limit_) throw FormatError("bit stream truncated inside a unary code");
                return count;
            }
            count += available;
            position_ += available;
        }
    }

    void skip(std::size_t bits) {
        require(bits);
        position_ += bits;
    }

    [[nodiscard]] std::size_t position() const { return position_; }
    [[nodiscard]] std::size_t limit() const { return limit_; }

  private:
    void require(std::size_t bits) const {
        if (bits > limit_ || position_ > limit_ - bits) throw FormatError("bit stream truncated");
    }

    std::span<const std::uint64_t> words_;
    std::size_t limit_;
    std::size_t position_;
};

//! Golomb-Rice code with parameter g: floor(x / 2^g) in unary, then the g low bits of x
inline void rice_encode(BitWriter& out, std::uint64_t x, unsigned g) {
    out.write_unary(g >= 64 ? 0 : x >> g);
    out.write(x, g);
}

inline std::uint64_t rice_decode(BitReader& in, unsigned g) {
    const std::uint64_t quotient = in.read_unary();
    const std::uint64_t remainder = in.read(g);
    return (g >= 64 ? 0 : quotient << g) | remainder;
}

//! Length in bits of rice_encode(x, g)
constexpr std::uint64_t rice_length(std::uint64_t x, unsigned g) { return (g >= 64 ? 0 : x >> g) + 1 + g; }

}  // namespace shockhash
