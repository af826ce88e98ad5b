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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <shockhash/errors.hpp>
#include <shockhash/recsplit.hpp>

using namespace shockhash;

namespace {

bool is_permutation_of_range(const Mphf& f, std::span<const std::string> keys) {
    std::vector<char> seen(keys.size(), 0);
    for (const std::string& k : keys) {
        const std::uint64_t v = f.query(k);
        if (v >= keys.size() || seen[v]++) return false;
    }
    return true;
}

BuildConfig config(std::uint32_t b, unsigned n, LeafMode mode) {
    BuildConfig c;
    c.bucket_size = b;
    c.leaf_size = n;
    c.mode = mode;
    return c;
}

// log of the probability that m uniformly split keys fall into exactly the given part sizes
double log_split_probability(std::span<const std::uint32_t> parts) {
    const double m = std::accumulate(parts.begin(), parts.end(), 0.0);
    double lp = std::lgamma(m + 1);
    for (const std::uint32_t p : parts) lp += p * std::log(p / m) - std::lgamma(p + 1.0);
    return lp;
}

}  // namespace

TEST_CASE("split plan examples") {
    CHECK(plan(30, 30).is_leaf());
    CHECK(plan(1, 30).is_leaf());
    CHECK(plan(0, 30).is_leaf());

    const SplitPlan four = plan(120, 30);
    CHECK(std::vector<std::uint32_t>(four.parts().begin(), four.parts().end()) ==
          std::vector<std::uint32_t>{30, 30, 30, 30});
    const SplitPlan remainder = plan(100, 30);
    CHECK(std::vector<std::uint32_t>(remainder.parts().begin(), remainder.parts().end()) ==
          std::vector<std::uint32_t>{30, 30, 30, 10});
    const SplitPlan upper = plan(300, 30);
    CHECK(std::vector<std::uint32_t>(upper.parts().begin(), upper.parts().end()) ==
          std::vector<std::uint32_t>{120, 120, 60});
    const SplitPlan binary = plan(2000, 30);
    CHECK(std::vector<std::uint32_t>(binary.parts().begin(), binary.parts().end()) ==
          std::vector<std::uint32_t>{1080, 920});

    // small leaves: binary splits aligned to the leaf size
    const SplitPlan small = plan(100, 16);
    CHECK(std::vector<std::uint32_t>(small.parts().begin(), small.parts().end()) ==
          std::vector<std::uint32_t>{64, 36});
    const SplitPlan small_odd = plan(17, 16);
    CHECK(std::vector<std::uint32_t>(small_odd.parts().begin(), small_odd.parts().end()) ==
          std::vector<std::uint32_t>{16, 1});
}

TEST_CASE("split plans partition the node and make progress") {
    for (const unsigned n : {1u, 2u, 5u, 16u, 24u, 25u, 30u, 40u, 64u}) {
        for (std::uint64_t m = 0; m <= 3000; ++m) {
            const SplitPlan p = plan(m, n);
            if (m <= n) {
                CHECK(p.is_leaf());
                continue;
            }
            REQUIRE(p.fanout >= 2);
            REQUIRE(p.fanout <= kMaxFanout);
            std::uint64_t sum = 0;
            for (unsigned j = 0; j < p.fanout; ++j) {
                CHECK(p.part_sizes[j] > 0);
                CHECK(p.part_sizes[j] < m);
                if (j + 1 < p.fanout) CHECK(p.part_sizes[j] % n == 0);
                sum += p.part_sizes[j];
            }
            CHECK(sum == m);
            if (n <= kBinaryOnlyLeafSize) CHECK(p.fanout == 2);
        }
    }
}

TEST_CASE("rice classes") {
    for (const unsigned n : {4u, 16u, 30u}) {
        std::size_t previous = 0;
        for (std::uint64_t m = 2; m <= 100000; m += (m < 1000 ? 1 : 97)) {
            const std::size_t c = rice_class(m, n);
            if (m <= kFineClassUnits * n) CHECK(c == m);
            CHECK(c >= previous);
            previous = c;
        }
    }
    CHECK(rice_class(361, 30) == 361);
    CHECK(rice_class(720, 30) == rice_class(1000, 30));
    CHECK(rice_class(720, 30) < rice_class(1024, 30));
}

TEST_CASE("split search expected trials") {
    std::mt19937_64 rng(1);
    const std::vector<std::vector<std::uint32_t>> shapes = {{4, 4}, {3, 3, 2}, {10, 10, 10, 5}};
    for (const auto& parts : shapes) {
        const std::uint32_t m = std::accumulate(parts.begin(), parts.end(), 0u);
        const double p = std::exp(log_split_probability(parts));
        const int sets = 20000;
        double sum = 0, sum_sq = 0;
        for (int s = 0; s < sets; ++s) {
            std::vector<HashedKey> keys(m);
            for (auto& k : keys) k = {rng(), rng()};
            std::uint64_t trials = 0;
            const std::uint64_t seed = search_split(keys, parts, &trials);
            CHECK(trials == seed + 1);
            sum += static_cast<double>(trials);
            sum_sq += static_cast<double>(trials) * trials;

            std::array<std::uint32_t, 4> counts{};
            for (const HashedKey& k : keys) ++counts[split_hash(k, seed, parts)];
            for (std::size_t j = 0; j < parts.size(); ++j) REQUIRE(counts[j] == parts[j]);
        }
        const double mean = sum / sets;
        const double se = std::sqrt((sum_sq / sets - mean * mean) / sets);
        INFO("parts " << parts.size() << " mean " << mean << " expected " << 1 / p);
        CHECK(std::abs(mean - 1 / p) < 4.5 * se);
    }
    // [4, 4] by hand: C(8, 4) / 2^8 = 70 / 256
    const std::vector<std::uint32_t> half = {4, 4};
    CHECK(std::exp(-log_split_probability(half)) == doctest::Approx(256.0 / 70.0));
}

TEST_CASE("builds for small and awkward key counts") {
    for (const LeafMode mode : {LeafMode::plain, LeafMode::rotate, LeafMode::rotate_cached}) {
        for (const unsigned n : {1u, 8u, 30u, 40u}) {
            if (mode == LeafMode::plain && n > 30) continue;
            for (const std::size_t count : {0u, 1u, 2u, 3u, 29u, 30u, 31u, 61u, 1000u, 4321u}) {
                const auto keys = synthetic_keys(count * 31 + n, count);
                const std::uint32_t b = std::max<std::uint32_t>(n, 100);
                const Mphf f = Mphf::build(keys, config(b, n, mode));
                CHECK(f.size() == count);
                CHECK(is_permutation_of_range(f, keys));
                CHECK(f.verify(keys).ok);
                CHECK(f.bucket_count() == bucket_count_for(count, b));
            }
        }
    }
}

TEST_CASE("placement report matches queries") {
    const auto keys = synthetic_keys(5, 100000);
    BuildReport report;
    const Mphf f = Mphf::build(keys, config(2000, 30, LeafMode::rotate), &report);
    REQUIRE(report.placement.size() == keys.size());
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < keys.size(); ++i) mismatches += f.query(keys[i]) != report.placement[i];
    CHECK(mismatches == 0);
    CHECK(is_permutation_of_range(f, keys));
    CHECK(report.full_leaves <= report.leaves);
    CHECK(report.retrieval_attempts >= 1);
    CHECK(report.split_trials >= report.split_nodes);
    const VerifyResult v = f.verify(keys);
    CHECK(v.ok);
    CHECK_FALSE(v.offending_key.has_value());
}

TEST_CASE("serialization round trip and space accounting") {
    const auto keys = synthetic_keys(12, 20000);
    const Mphf f = Mphf::build(keys, config(500, 24, LeafMode::rotate));
    const std::vector<std::byte> bytes = f.serialize();
    const SpaceReport s = f.stats();
    CHECK(s.total_bits == 8 * bytes.size());
    CHECK(s.header_bits + s.offset_bits + s.seed_bits + s.retrieval_bits == s.total_bits);
    CHECK(s.seed_stream_payload_bits == f.seed_stream_bits());
    CHECK(s.retrieval_bits == f.retrieval().serialized_bits());
    CHECK(s.keys == keys.size());

    const Mphf back = Mphf::deserialize(bytes);
    CHECK(back.serialize() == bytes);
    std::size_t mismatches = 0;
    for (const std::string& k : keys) mismatches += back.query(k) != f.query(k);
    CHECK(mismatches == 0);
    CHECK(back.verify(keys).ok);
    CHECK(back.rice_table() == f.rice_table());
}

TEST_CASE("malformed descriptors are rejected") {
    const auto keys = synthetic_keys(13, 3000);
    const std::vector<std::byte> bytes = Mphf::build(keys, config(300, 16, LeafMode::rotate)).serialize();

    std::vector<std::byte> trailing = bytes;
    trailing.push_back(std::byte{0});
    CHECK_THROWS_AS(Mphf::deserialize(trailing), FormatError);
    for (const std::size_t cut : {std::size_t{0}, std::size_t{3}, std::size_t{20}, bytes.size() / 2, bytes.size() - 1}) {
        CHECK_THROWS_AS(Mphf::deserialize(std::span<const std::byte>(bytes.data(), cut)), FormatError);
    }
    std::vector<std::byte> magic = bytes;
    magic[0] = std::byte{'X'};
    CHECK_THROWS_AS(Mphf::deserialize(magic), FormatError);
    std::vector<std::byte> version = bytes;
    version[4] = std::byte{2};
    CHECK_THROWS_AS(Mphf::deserialize(version), FormatError);
    std::vector<std::byte> hash_id = bytes;
    hash_id[6] = std::byte{7};
    CHECK_THROWS_AS(Mphf::deserialize(hash_id), FormatError);
}

TEST_CASE("every single-bit corruption is detected") {
    const auto keys = synthetic_keys(14, 600);
    const Mphf original = Mphf::build(keys, config(200, 10, LeafMode::rotate));
    const std::vector<std::byte> bytes = original.serialize();
    const SpaceReport s = original.stats();
    const std::size_t epsilon_at = (s.header_bits + s.offset_bits + s.seed_bits) / 8;
    std::size_t undetected = 0;
    for (std::size_t bit = 0; bit < 8 * bytes.size(); ++bit) {
        // the bucket size (bytes 15..18) and epsilon fields only matter through the derived bucket and column counts
        if (bit / 8 >= 15 && bit / 8 < 19) continue;
        if (bit / 8 >= epsilon_at && bit / 8 < epsilon_at + 4) continue;
        std::vector<std::byte> bad = bytes;
        bad[bit / 8] ^= std::byte{static_cast<unsigned char>(1u << (bit % 8))};
        try {
            const Mphf f = Mphf::deserialize(bad);
            if (f.verify(keys).ok) ++undetected;
        } catch (const FormatError&) {
        }
    }
    CHECK(undetected == 0);
}

TEST_CASE("bucket size changes that keep the bucket count give an equivalent descriptor") {
    const auto keys = synthetic_keys(14, 600);
    std::vector<std::byte> bytes = Mphf::build(keys, config(200, 10, LeafMode::rotate)).serialize();
    bytes[15] = std::byte{201};
    const Mphf f = Mphf::deserialize(bytes);
    CHECK(f.bucket_size() == 201);
    CHECK(f.verify(keys).ok);

    // an epsilon that yields a different column count is malformed
    const SpaceReport s = f.stats();
    const std::size_t epsilon_at = (s.header_bits + s.offset_bits + s.seed_bits) / 8;
    std::vector<std::byte> wide = bytes;
    wide[epsilon_at + 1] ^= std::byte{0x40};
    CHECK_THROWS_AS(Mphf::deserialize(wide), FormatError);
}

TEST_CASE("construction is deterministic and independent of bucket order and threads") {
    const auto keys = synthetic_hashed_keys(21, 30000);
    const BuildConfig c = config(1000, 20, LeafMode::rotate);
    const std::vector<std::byte> reference = Mphf::build_hashed(keys, c).serialize();
    CHECK(Mphf::build_hashed(keys, c).serialize() == reference);

    const std::uint64_t nb = bucket_count_for(keys.size(), c.bucket_size);
    std::vector<std::uint64_t> order(nb);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), std::mt19937_64(2));
    CHECK(Mphf::build_hashed(keys, c, nullptr, order).serialize() == reference);

    BuildConfig threaded = c;
    threaded.threads = 3;
    CHECK(Mphf::build_hashed(keys, threaded).serialize() == reference);

    std::vector<HashedKey> shuffled = keys;
    std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937_64(3));
    CHECK(Mphf::build_hashed(shuffled, c).serialize() == reference);

    std::vector<std::uint64_t> not_a_permutation(nb, 0);
    CHECK_THROWS_AS(Mphf::build_hashed(keys, c, nullptr, not_a_permutation), InvalidParameter);
}

TEST_CASE("duplicate keys and master hash collisions") {
    const std::vector<std::string> dup = {"alpha", "beta", "gamma", "beta"};
    try {
        (void)Mphf::build(dup);
        FAIL("expected DuplicateKey");
    } catch (const DuplicateKey& e) {
        CHECK(e.first_index == 1);
        CHECK(e.second_index == 3);
    }
    std::vector<HashedKey> hashed = synthetic_hashed_keys(3, 50);
    hashed.push_back(hashed[7]);
    CHECK_THROWS_AS(Mphf::build_hashed(hashed), HashCollision);
}

TEST_CASE("verify reports wrong key sets") {
    const auto keys = synthetic_keys(15, 2000);
    const Mphf f = Mphf::build(keys, config(200, 12, LeafMode::plain));
    std::vector<std::string> other = keys;
    other[17] = "not one of the keys";
    CHECK_FALSE(f.verify(other).ok);
    std::vector<std::string> fewer(keys.begin(), keys.end() - 1);
    CHECK_FALSE(f.verify(fewer).ok);
}

TEST_CASE("configuration limits") {
    const auto keys = synthetic_keys(1, 10);
    CHECK_THROWS_AS(Mphf::build(keys, config(100, 0, LeafMode::rotate)), InvalidParameter);
    CHECK_THROWS_AS(Mphf::build(keys, config(100, 65, LeafMode::rotate)), InvalidParameter);
    CHECK_THROWS_AS(Mphf::build(keys, config(10, 30, LeafMode::rotate)), InvalidParameter);
    BuildConfig bad_eps = config(100, 10, LeafMode::rotate);
    bad_eps.retrieval_epsilon = 0;
    CHECK_THROWS_AS(Mphf::build(keys, bad_eps), InvalidParameter);
    BuildConfig no_threads = config(100, 10, LeafMode::rotate);
    no_threads.threads = 0;
    CHECK_THROWS_AS(Mphf::build(keys, no_threads), InvalidParameter);
}
