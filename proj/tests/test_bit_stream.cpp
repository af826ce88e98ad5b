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

#include <random>
#include <vector>

#include <shockhash/bit_stream.hpp>

using namespace shockhash;

namespace {

std::vector<unsigned> bits_of(const BitWriter& w) {
    std::vector<unsigned> out;
    for (std::size_t i = 0; i < w.bit_count(); ++i) out.push_back((w.words()[i / 64] >> (i % 64)) & 1);
    return out;
}

}  // namespace

TEST_CASE("rice code bit layout") {
    BitWriter w;
    rice_encode(w, 0, 0);
    CHECK(bits_of(w) == std::vector<unsigned>{0});

    BitWriter v;
    rice_encode(v, 5, 2);  // quotient 1 -> "10", remainder 01 written LSB first
    CHECK(bits_of(v) == std::vector<unsigned>{1, 0, 1, 0});
    CHECK(rice_length(5, 2) == 4);
    CHECK(rice_length(0, 0) == 1);
    CHECK(rice_length(1000, 3) == 125 + 1 + 3);
}

TEST_CASE("unary codes cross word boundaries") {
    BitWriter w;
    w.write(0, 61);
    w.write_unary(200);
    w.write_unary(0);
    w.write(0x2a, 6);
    CHECK(w.bit_count() == 61 + 201 + 1 + 6);
    BitReader r(w.words(), w.bit_count());
    CHECK(r.read(61) == 0);
    CHECK(r.read_unary() == 200);
    CHECK(r.read_unary() == 0);
    CHECK(r.read(6) == 0x2a);
    CHECK(r.position() == r.limit());
}

TEST_CASE("random rice round trips") {
    std::mt19937_64 rng(3);
    struct Item {
        std::uint64_t x;
        unsigned g;
    };
    std::vector<Item> items(1000000);
    BitWriter w;
    std::uint64_t expected_bits = 0;
    for (Item& it : items) {
        it.g = static_cast<unsigned>(rng() % 24);
        it.x = (rng() >> (rng() % 64)) % (std::uint64_t{1} << (it.g + 6));
        rice_encode(w, it.x, it.g);
        expected_bits += rice_length(it.x, it.g);
    }
    CHECK(w.bit_count() == expected_bits);
    BitReader r(w.words(), w.bit_count());
    std::size_t mismatches = 0;
    for (const Item& it : items) mismatches += rice_decode(r, it.g) != it.x;
    CHECK(mismatches == 0);
    CHECK(r.position() == w.bit_count());
}

TEST_CASE("full-width fields") {
    BitWriter w;
    w.write_bit(true);
    w.write(0xfedcba9876543210ULL, 64);
    w.write(~0ULL, 64);
    BitReader r(w.words(), w.bit_count());
    CHECK(r.read_bit());
    CHECK(r.read(64) == 0xfedcba9876543210ULL);
    CHECK(r.read(64) == ~0ULL);
}

TEST_CASE("reading past the limit throws") {
    BitWriter w;
    rice_encode(w, 77, 3);
    const std::size_t len = w.bit_count();
    {
        BitReader r(w.words(), len - 1);
        CHECK_THROWS_AS(rice_decode(r, 3), FormatError);
    }
    {
        BitReader r(w.words(), 3);  // inside the unary part
        CHECK_THROWS_AS(r.read_unary(), FormatError);
    }
    {
        BitReader r(w.words(), len);
        CHECK_THROWS_AS(r.skip(len + 1), FormatError);
        CHECK_THROWS_AS(r.read(static_cast<unsigned>(len + 1)), FormatError);
    }
    {
        // an all-ones stream never terminates its unary code
        const std::vector<std::uint64_t> ones(3, ~0ULL);
        BitReader r(ones, 192);
        CHECK_THROWS_AS(r.read_unary(), FormatError);
    }
}
