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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <shockhash/bit_stream.hpp>
#include <shockhash/hashing.hpp>
#include <shockhash/retrieval.hpp>
#include <shockhash/shockhash.hpp>

namespace shockhash {

inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr char kMagic[4] = {'S', 'H', 'K', 'H'};

//! Nodes up to this many leaf units get their own Rice class; larger nodes are grouped by bit width
inline constexpr unsigned kFineClassUnits = 12;

//! Fanout rules switch from all-binary to the 4 / 3 / 2 scheme above this leaf size
inline constexpr unsigned kBinaryOnlyLeafSize = 24;

struct BuildConfig {
    std::uint32_t bucket_size{2000};
    unsigned leaf_size{30};
    LeafMode mode{LeafMode::rotate};
    double retrieval_epsilon{RibbonRetrieval::kDefaultEpsilon};
    //! Worker threads for bucket construction; the descriptor does not depend on it
    unsigned threads{1};

    //! Throws InvalidParameter unless 1 <= leaf_size <= 64 and bucket_size >= leaf_size
    void validate() const;
};

inline constexpr unsigned kMaxFanout = 4;

//! Shape of a node of m keys: a leaf (fanout 0) or the sizes of its children, left to right
struct SplitPlan {
    std::array<std::uint32_t, kMaxFanout> part_sizes{};
    unsigned fanout{0};

    [[nodiscard]] bool is_leaf() const { return fanout == 0; }
    [[nodiscard]] std::span<const std::uint32_t> parts() const { return {part_sizes.data(), fanout}; }
};

//! Pure function of (m, n); leaf iff m <= n
SplitPlan plan(std::uint64_t m, unsigned n);

//! Index into the Rice parameter table for a node of m keys
std::size_t rice_class(std::uint64_t m, unsigned n);

//! Minimum split seed under which the keys fall into parts of exactly the planned sizes
std::uint64_t search_split(std::span<const HashedKey> keys, std::span<const std::uint32_t> parts,
                           std::uint64_t* trials = nullptr);

//! Optional construction instrumentation
struct BuildReport {
    SearchCounters leaf_counters;
    std::uint64_t split_nodes{0};
    std::uint64_t split_trials{0};  //!< seeds evaluated over all split nodes
    std::uint64_t leaves{0};        //!< leaves with at least two keys
    std::uint64_t full_leaves{0};   //!< leaves of exactly n keys
    double sum_full_leaf_storage{0};   //!< sum of (encoded seed + 1) over full leaves
    double sum_full_leaf_log2{0};      //!< sum of log2(encoded seed + 1) over full leaves
    std::vector<std::uint64_t> placement;  //!< value assigned to input key i
    unsigned retrieval_attempts{0};
    double hash_seconds{0};
    double bucket_seconds{0};
    double retrieval_seconds{0};
    double total_seconds{0};

    //! log2(mean stored seed + 1) + n - log2(n^n / n!) over full leaves (0 when there are none)
    [[nodiscard]] double idealized_leaf_overhead(unsigned n) const;
};

//! Byte accounting of a serialized descriptor. The four parts add up to total_bits exactly.
struct SpaceReport {
    std::uint64_t keys{0};
    std::uint64_t header_bits{0};   //!< magic through mode, plus the Rice table
    std::uint64_t offset_bits{0};   //!< bucket offset block
    std::uint64_t seed_bits{0};     //!< seed stream block (length field plus padded words)
    std::uint64_t retrieval_bits{0};
    std::uint64_t total_bits{0};
    std::uint64_t seed_stream_payload_bits{0};  //!< Rice-coded bits without padding

    [[nodiscard]] double bits_per_key() const { return keys == 0 ? 0.0 : static_cast<double>(total_bits) / keys; }
};

struct VerifyResult {
    bool ok{true};
    std::string message;
    std::optional<std::size_t> offending_key;  //!< input position of the first key involved in a violation
};

//! ShockHash-RS minimal perfect hash function
class Mphf {
  public:
    Mphf() = default;

    //! Throws DuplicateKey for equal strings and HashCollision for distinct strings with equal master hashes
    static Mphf build(std::span<const std::string> keys, const BuildConfig& config = {}, BuildReport* report = nullptr);

    //! Hashed keys must be distinct (HashCollision otherwise). `bucket_order`, if given, is a permutation of the
    //! bucket indices fixing the order in which buckets are constructed; the descriptor does not depend on it.
    static Mphf build_hashed(std::span<const HashedKey> keys, const BuildConfig& config = {},
                             BuildReport* report = nullptr, std::span<const std::uint64_t> bucket_order = {});

    [[nodiscard]] std::uint64_t query(std::string_view key) const { return query(master_hash(key)); }
    [[nodiscard]] std::uint64_t query(const HashedKey& k) const;

    [[nodiscard]] std::vector<std::byte> serialize() const;
    //! Throws FormatError on any malformed, truncated or trailing input
    static Mphf deserialize(std::span<const std::byte> bytes);

    [[nodiscard]] SpaceReport stats() const;

    //! Checks the descriptor against the original keys: every stored seed is the minimum valid seed for its node,
    //! every bucket's codes end exactly at the next bucket offset, and the queries form {0, ..., N - 1}.
    [[nodiscard]] VerifyResult verify(std::span<const std::string> keys) const;
    [[nodiscard]] VerifyResult verify_hashed(std::span<const HashedKey> keys) const;

    [[nodiscard]] std::uint64_t size() const { return key_count_; }
    [[nodiscard]] std::uint32_t bucket_size() const { return bucket_size_; }
    [[nodiscard]] unsigned leaf_size() const { return leaf_size_; }
    [[nodiscard]] LeafMode mode() const { return mode_; }
    [[nodiscard]] std::uint64_t bucket_count() const { return bucket_prefix_.empty() ? 0 : bucket_prefix_.size() - 1; }
    [[nodiscard]] const std::vector<std::uint8_t>& rice_table() const { return rice_table_; }
    [[nodiscard]] const RibbonRetrieval& retrieval() const { return retrieval_; }
    [[nodiscard]] std::uint64_t seed_stream_bits() const { return stream_bits_; }

  private:
    static Mphf build_sorted(std::vector<HashedKey> keys, std::vector<std::uint64_t> input_index,
                             const BuildConfig& config, BuildReport* report, std::span<const std::uint64_t> bucket_order);
    [[nodiscard]] VerifyResult verify_sorted(std::span<const HashedKey> keys,
                                             std::span<const std::uint64_t> input_index) const;
    void skip_subtree(BitReader& in, std::uint64_t m) const;

    [[nodiscard]] unsigned rice_parameter(std::uint64_t m) const;
    [[nodiscard]] std::uint64_t header_bytes() const;
    [[nodiscard]] std::uint64_t offset_block_bytes() const;
    [[nodiscard]] unsigned key_width() const;
    [[nodiscard]] unsigned offset_width() const;

    std::uint64_t key_count_{0};
    std::uint32_t bucket_size_{0};
    unsigned leaf_size_{0};
    LeafMode mode_{LeafMode::rotate};
    std::vector<std::uint8_t> rice_table_;
    std::vector<std::uint64_t> bucket_prefix_;  // bucket_count + 1 key-count prefix sums
    std::vector<std::uint64_t> bucket_bits_;    // bucket_count + 1 bit offsets into the seed stream
    std::vector<std::uint64_t> stream_;
    std::uint64_t stream_bits_{0};
    RibbonRetrieval retrieval_;
};

//! Number of buckets for N keys at expected bucket size b
constexpr std::uint64_t bucket_count_for(std::uint64_t keys, std::uint64_t bucket_size) {
    return keys == 0 ? 0 : (keys + bucket_size - 1) / bucket_size;
}

}  // namespace shockhash
