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

#include <shockhash/recsplit.hpp>

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include <shockhash/errors.hpp>
#include <shockhash/serialization.hpp>

namespace shockhash {

namespace {

    using Clock = std::chrono::steady_clock;

    double seconds_since(Clock::time_point start) {
        return std::chrono::duration<double>(Clock::now() - start).count();
    }

    //! Part of a key given the prefix-sum interval ends of the plan
    unsigned part_of(const HashedKey& k, std::uint64_t seed, std::uint64_t m, std::span<const std::uint32_t> ends) {
        const std::uint64_t pos = split_position(k, seed, m, ends.size());
        unsigned j = 0;
        while (pos >= ends[j]) ++j;
        return j;
    }

    std::array<std::uint32_t, kMaxFanout> interval_ends(std::span<const std::uint32_t> parts) {
        std::array<std::uint32_t, kMaxFanout> ends{};
        std::uint32_t sum = 0;
        for (std::size_t j = 0; j < parts.size(); ++j) ends[j] = sum += parts[j];
        return ends;
    }

    struct Code {
        std::uint32_t rice_class;
        std::uint64_t value;
    };

    struct BucketOutput {
        std::vector<Code> codes;  // preorder
        std::vector<HashedKey> retrieval_keys;
        std::vector<std::uint8_t> retrieval_bits;
    };

    //! Builds the splitting tree of one bucket. Keys (and their input positions) are reordered in place.
    class BucketEncoder {
      public:
        //! `report` receives counters only; placements go to `placement` (indexed by input position) if non-null
        BucketEncoder(const BuildConfig& config, BuildReport* report, std::uint64_t* placement)
            : config_(config), report_(report), placement_(placement) {}

        void encode(std::span<HashedKey> keys, std::span<std::uint64_t> index, std::uint64_t first_value,
                    BucketOutput& out) {
            key_scratch_.resize(keys.size());
            index_scratch_.resize(keys.size());
            node(keys, index, first_value, out);
        }

      private:
        void node(std::span<HashedKey> keys, std::span<std::uint64_t> index, std::uint64_t first_value,
                  BucketOutput& out) {
            const std::uint64_t m = keys.size();
            const unsigned n = config_.leaf_size;
            const SplitPlan p = plan(m, n);
            if (p.is_leaf()) {
                leaf(keys, index, first_value, out);
                return;
            }
            std::uint64_t trials = 0;
            const std::uint64_t seed = search_split(keys, p.parts(), &trials);
            out.codes.push_back({static_cast<std::uint32_t>(rice_class(m, n)), seed});
            if (report_ != nullptr) {
                ++report_->split_nodes;
                report_->split_trials += trials;
            }

            const auto ends = interval_ends(p.parts());
            std::array<std::uint32_t, kMaxFanout> cursor{};
            for (unsigned j = 1; j < p.fanout; ++j) cursor[j] = ends[j - 1];
            for (std::size_t i = 0; i < m; ++i) {
                const unsigned j = part_of(keys[i], seed, m, std::span(ends.data(), p.fanout));
                key_scratch_[cursor[j]] = keys[i];
                index_scratch_[cursor[j]] = index[i];
                ++cursor[j];
            }
            std::copy_n(key_scratch_.begin(), m, keys.begin());
            std::copy_n(index_scratch_.begin(), m, index.begin());

            std::uint64_t begin = 0;
            for (const std::uint32_t size : p.parts()) {
                node(keys.subspan(begin, size), index.subspan(begin, size), first_value + begin, out);
                begin += size;
            }
        }

        void leaf(std::span<HashedKey> keys, std::span<std::uint64_t> index, std::uint64_t first_value,
                  BucketOutput& out) {
            const auto m = static_cast<unsigned>(keys.size());
            if (m == 0) return;
            if (m == 1) {
                if (placement_ != nullptr) placement_[index[0]] = first_value;
                return;
            }
            LeafSolution sol = search_leaf(keys, config_.mode, report_ != nullptr ? &report_->leaf_counters : nullptr);
            out.codes.push_back({static_cast<std::uint32_t>(rice_class(m, config_.leaf_size)), sol.encoded_seed});
            for (unsigned i = 0; i < m; ++i) {
                out.retrieval_keys.push_back(keys[i]);
                out.retrieval_bits.push_back(sol.choices[i]);
            }
            if (report_ != nullptr) {
                ++report_->leaves;
                if (m == config_.leaf_size) {
                    ++report_->full_leaves;
                    const auto storage = static_cast<double>(sol.encoded_seed) + 1.0;
                    report_->sum_full_leaf_storage += storage;
                    report_->sum_full_leaf_log2 += std::log2(storage);
                }
            }
            if (placement_ == nullptr) return;
            for (unsigned i = 0; i < m; ++i) {
                placement_[index[i]] =
                    first_value + query_leaf(keys[i], sol.encoded_seed, m, config_.mode, sol.choices[i]);
            }
        }

        const BuildConfig& config_;
        BuildReport* report_;
        std::uint64_t* placement_;
        std::vector<HashedKey> key_scratch_;
        std::vector<std::uint64_t> index_scratch_;
    };

    //! Accumulates codes per Rice class and fits the parameter minimizing each class's total code length
    class RiceFitter {
      public:
        void add(std::size_t rice_class, std::uint64_t value) {
            if (rice_class >= count_.size()) {
                count_.resize(rice_class + 1, 0);
                quotient_sum_.resize(rice_class + 1, std::array<std::uint64_t, 64>{});
            }
            ++count_[rice_class];
            for (unsigned g = 0; g < 64; ++g) quotient_sum_[rice_class][g] += value >> g;
        }

        //! One entry per class up to the largest one used; unused classes get 0
        [[nodiscard]] std::vector<std::uint8_t> table() const {
            std::vector<std::uint8_t> out(count_.size(), 0);
            for (std::size_t c = 0; c < count_.size(); ++c) {
                if (count_[c] == 0) continue;
                std::uint64_t best_cost = std::numeric_limits<std::uint64_t>::max();
                for (unsigned g = 0; g < 64; ++g) {
                    const std::uint64_t cost = quotient_sum_[c][g] + count_[c] * (1 + g);
                    if (cost < best_cost) {
                        best_cost = cost;
                        out[c] = static_cast<std::uint8_t>(g);
                    }
                }
            }
            return out;
        }

      private:
        std::vector<std::array<std::uint64_t, 64>> quotient_sum_;
        std::vector<std::uint64_t> count_;
    };

    //! Keys of a node of m keys that end up in leaves of at least two keys
    std::uint64_t retrieval_key_count(std::uint64_t m, unsigned n) {
        if (m <= n) return m >= 2 ? m : 0;
        std::uint64_t total = 0;
        for (const std::uint32_t part : plan(m, n).parts()) total += retrieval_key_count(part, n);
        return total;
    }

    std::uint64_t checked_node_size(std::uint64_t m) {
        if (m > std::numeric_limits<std::uint32_t>::max()) throw InvalidParameter("node size exceeds 32 bits");
        return m;
    }

    //! Sorts (hash, input position) pairs; equal neighbouring hashes are reported through `on_equal`
    template <typename OnEqual>
    void sort_hashed(std::vector<HashedKey>& keys, std::vector<std::uint64_t>& index, OnEqual&& on_equal) {
        std::vector<std::uint64_t> order(keys.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::uint64_t a, std::uint64_t b) {
            return keys[a] != keys[b] ? keys[a] < keys[b] : a < b;
        });
        std::vector<HashedKey> sorted(keys.size());
        index.resize(keys.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            sorted[i] = keys[order[i]];
            index[i] = order[i];
        }
        for (std::size_t i = 1; i < sorted.size(); ++i) {
            if (sorted[i] == sorted[i - 1]) on_equal(index[i - 1], index[i]);
        }
        keys = std::move(sorted);
    }

}  // namespace

void BuildConfig::validate() const {
    if (leaf_size == 0 || leaf_size > kMaxLeafSize) {
        throw UnsupportedLeafSize("leaf size must be in [1, 64], got " + std::to_string(leaf_size));
    }
    if (bucket_size < leaf_size) throw InvalidParameter("bucket size must be at least the leaf size");
    if (!(retrieval_epsilon > 0)) throw InvalidParameter("retrieval epsilon must be positive");
    if (threads == 0) throw InvalidParameter("thread count must be at least 1");
}

SplitPlan plan(std::uint64_t m, unsigned n) {
    if (n == 0) throw InvalidParameter("leaf size must be positive");
    checked_node_size(m);
    SplitPlan p;
    if (m <= n) return p;
    const auto binary = [&](std::uint64_t left) {
        left = std::clamp<std::uint64_t>(left, 1, m - 1);
        p.part_sizes = {static_cast<std::uint32_t>(left), static_cast<std::uint32_t>(m - left)};
        p.fanout = 2;
    };
    const auto units = [&](std::uint64_t unit) {
        const std::uint64_t k = (m + unit - 1) / unit;
        for (std::uint64_t j = 0; j + 1 < k; ++j) p.part_sizes[j] = static_cast<std::uint32_t>(unit);
        p.part_sizes[k - 1] = static_cast<std::uint32_t>(m - (k - 1) * unit);
        p.fanout = static_cast<unsigned>(k);
    };
    if (n <= kBinaryOnlyLeafSize) {
        const std::uint64_t leaves = (m + n - 1) / n;
        binary(n * ((leaves + 1) / 2));
    } else if (m <= 4 * std::uint64_t{n}) {
        units(n);
    } else if (m <= 12 * std::uint64_t{n}) {
        units(4 * std::uint64_t{n});
    } else {
        const std::uint64_t unit = 12 * std::uint64_t{n};
        binary(unit * ((m + 2 * unit - 1) / (2 * unit)));
    }
    return p;
}

std::size_t rice_class(std::uint64_t m, unsigned n) {
    const std::uint64_t fine = std::uint64_t{kFineClassUnits} * n;
    if (m <= fine) return m;
    return fine + 1 + (std::bit_width(m) - std::bit_width(fine));
}

std::uint64_t search_split(std::span<const HashedKey> keys, std::span<const std::uint32_t> parts,
                           std::uint64_t* trials) {
    if (parts.size() < 2 || parts.size() > kMaxFanout) throw InvalidParameter("split fanout must be in [2, 4]");
    const auto ends = interval_ends(parts);
    const std::uint64_t m = keys.size();
    if (ends[parts.size() - 1] != m) throw InvalidParameter("part sizes must sum to the node size");
    // unused interval ends never compare below a position, so the part is a plain count of passed ends
    std::array<std::uint64_t, kMaxFanout - 1> bound{};
    bound.fill(std::numeric_limits<std::uint64_t>::max());
    for (std::size_t j = 0; j + 1 < parts.size(); ++j) bound[j] = ends[j];
    std::vector<std::uint64_t> bases(m);
    for (std::size_t i = 0; i < m; ++i) bases[i] = split_base(keys[i], m, parts.size());

    for (std::uint64_t seed = 0; seed < std::numeric_limits<std::uint64_t>::max(); ++seed) {
        std::array<std::uint32_t, kMaxFanout> count{};
        for (const std::uint64_t base : bases) {
            const std::uint64_t pos = mul_high(detail::seeded(base, seed), m);
            ++count[(pos >= bound[0]) + (pos >= bound[1]) + (pos >= bound[2])];
        }
        if (std::equal(parts.begin(), parts.end(), count.begin())) {
            if (trials != nullptr) *trials += seed + 1;
            return seed;
        }
    }
    throw ConstructionFailure("split seed counter overflow");
}

double BuildReport::idealized_leaf_overhead(unsigned n) const {
    if (full_leaves == 0) return 0.0;
    const double mean = sum_full_leaf_storage / static_cast<double>(full_leaves);
    const double lower = (n * std::log(static_cast<double>(n)) - std::lgamma(n + 1.0)) / std::log(2.0);
    return std::log2(mean) + n - lower;
}

Mphf Mphf::build(std::span<const std::string> keys, const BuildConfig& config, BuildReport* report) {
    config.validate();
    const auto start = Clock::now();
    std::vector<HashedKey> hashed(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) hashed[i] = master_hash(keys[i]);
    std::vector<std::uint64_t> index;
    sort_hashed(hashed, index, [&](std::uint64_t a, std::uint64_t b) {
        if (keys[a] == keys[b]) throw DuplicateKey(std::min(a, b), std::max(a, b));
        throw HashCollision(std::min(a, b), std::max(a, b));
    });
    const double hash_seconds = seconds_since(start);
    Mphf out = build_sorted(std::move(hashed), std::move(index), config, report, {});
    if (report != nullptr) {
        report->hash_seconds = hash_seconds;
        report->total_seconds = seconds_since(start);
    }
    return out;
}

Mphf Mphf::build_hashed(std::span<const HashedKey> keys, const BuildConfig& config, BuildReport* report,
                        std::span<const std::uint64_t> bucket_order) {
    config.validate();
    const auto start = Clock::now();
    std::vector<HashedKey> hashed(keys.begin(), keys.end());
    std::vector<std::uint64_t> index;
    sort_hashed(hashed, index, [](std::uint64_t a, std::uint64_t b) { throw HashCollision(a, b); });
    const double hash_seconds = seconds_since(start);
    Mphf out = build_sorted(std::move(hashed), std::move(index), config, report, bucket_order);
    if (report != nullptr) {
        report->hash_seconds = hash_seconds;
        report->total_seconds = seconds_since(start);
    }
    return out;
}

Mphf Mphf::build_sorted(std::vector<HashedKey> keys, std::vector<std::uint64_t> input_index,
                        const BuildConfig& config, BuildReport* report, std::span<const std::uint64_t> bucket_order) {
    const std::uint64_t total = keys.size();
    const std::uint64_t nb = bucket_count_for(total, config.bucket_size);
    if (report != nullptr) {
        *report = BuildReport{};
        report->placement.assign(total, 0);
    }

    Mphf out;
    out.key_count_ = total;
    out.bucket_size_ = config.bucket_size;
    out.leaf_size_ = config.leaf_size;
    out.mode_ = config.mode;

    // keys are sorted by hash and the bucket hash is monotone in it, so buckets are contiguous ranges
    out.bucket_prefix_.assign(nb + 1, 0);
    for (const HashedKey& k : keys) ++out.bucket_prefix_[bucket_of(k, nb) + 1];
    for (std::uint64_t b = 0; b < nb; ++b) {
        checked_node_size(out.bucket_prefix_[b + 1]);
        out.bucket_prefix_[b + 1] += out.bucket_prefix_[b];
    }

    std::vector<std::uint64_t> order;
    if (bucket_order.empty()) {
        order.resize(nb);
        std::iota(order.begin(), order.end(), 0);
    } else {
        order.assign(bucket_order.begin(), bucket_order.end());
        std::vector<std::uint64_t> check = order;
        std::sort(check.begin(), check.end());
        for (std::uint64_t b = 0; b < check.size(); ++b) {
            if (check.size() != nb || check[b] != b) throw InvalidParameter("bucket order is not a permutation");
        }
    }

    const auto bucket_start = Clock::now();
    std::vector<BucketOutput> buckets(nb);
    const unsigned workers = static_cast<unsigned>(std::clamp<std::uint64_t>(config.threads, 1, std::max<std::uint64_t>(nb, 1)));
    std::vector<BuildReport> partial(workers);
    std::uint64_t* placement = report != nullptr ? report->placement.data() : nullptr;
    std::atomic<std::uint64_t> next{0};
    const auto work = [&](unsigned w) {
        BucketEncoder encoder(config, report != nullptr ? &partial[w] : nullptr, placement);
        for (std::uint64_t i = next++; i < nb; i = next++) {
            const std::uint64_t b = order[i];
            const std::uint64_t begin = out.bucket_prefix_[b];
            const std::uint64_t size = out.bucket_prefix_[b + 1] - begin;
            encoder.encode(std::span(keys).subspan(begin, size), std::span(input_index).subspan(begin, size), begin,
                           buckets[b]);
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        std::exception_ptr error;
        std::mutex error_mutex;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    work(w);
                } catch (...) {
                    const std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next = nb;
                }
            });
        }
        for (std::thread& t : pool) t.join();
        if (error) std::rethrow_exception(error);
    }
    if (report != nullptr) {
        for (const BuildReport& p : partial) {
            report->leaf_counters.merge(p.leaf_counters);
            report->split_nodes += p.split_nodes;
            report->split_trials += p.split_trials;
            report->leaves += p.leaves;
            report->full_leaves += p.full_leaves;
            report->sum_full_leaf_storage += p.sum_full_leaf_storage;
            report->sum_full_leaf_log2 += p.sum_full_leaf_log2;
        }
    }

    // Rice parameters fitted to the actual codes of each class
    RiceFitter fitter;
    for (const BucketOutput& bucket : buckets) {
        for (const Code& c : bucket.codes) fitter.add(c.rice_class, c.value);
    }
    out.rice_table_ = fitter.table();

    BitWriter writer;
    out.bucket_bits_.assign(nb + 1, 0);
    std::size_t retrieval_size = 0;
    for (std::uint64_t b = 0; b < nb; ++b) {
        out.bucket_bits_[b] = writer.bit_count();
        for (const Code& c : buckets[b].codes) rice_encode(writer, c.value, out.rice_table_[c.rice_class]);
        retrieval_size += buckets[b].retrieval_keys.size();
    }
    out.bucket_bits_[nb] = writer.bit_count();
    out.stream_bits_ = writer.bit_count();
    out.stream_ = writer.release();
    if (report != nullptr) report->bucket_seconds = seconds_since(bucket_start);

    const auto retrieval_start = Clock::now();
    std::vector<HashedKey> retrieval_keys;
    std::vector<std::uint8_t> retrieval_bits;
    retrieval_keys.reserve(retrieval_size);
    retrieval_bits.reserve(retrieval_size);
    for (BucketOutput& bucket : buckets) {
        retrieval_keys.insert(retrieval_keys.end(), bucket.retrieval_keys.begin(), bucket.retrieval_keys.end());
        retrieval_bits.insert(retrieval_bits.end(), bucket.retrieval_bits.begin(), bucket.retrieval_bits.end());
        bucket = BucketOutput{};
    }
    out.retrieval_ = RibbonRetrieval::build(retrieval_keys, retrieval_bits, config.retrieval_epsilon);
    if (report != nullptr) {
        report->retrieval_seconds = seconds_since(retrieval_start);
        report->retrieval_attempts = out.retrieval_.attempts();
    }
    return out;
}

unsigned Mphf::rice_parameter(std::uint64_t m) const {
    const std::size_t c = rice_class(m, leaf_size_);
    if (c >= rice_table_.size()) throw FormatError("node class missing from the Rice table");
    return rice_table_[c];
}

void Mphf::skip_subtree(BitReader& in, std::uint64_t m) const {
    if (m <= 1) return;
    in.read_unary();
    in.skip(rice_parameter(m));
    if (m <= leaf_size_) return;
    for (const std::uint32_t size : plan(m, leaf_size_).parts()) skip_subtree(in, size);
}

std::uint64_t Mphf::query(const HashedKey& k) const {
    if (key_count_ == 0) return 0;
    const std::uint64_t b = bucket_of(k, bucket_count());
    std::uint64_t value = bucket_prefix_[b];
    std::uint64_t m = bucket_prefix_[b + 1] - value;
    BitReader in(stream_, bucket_bits_[b + 1], bucket_bits_[b]);
    while (true) {
        if (m <= leaf_size_) {
            if (m <= 1) return value;
            const std::uint64_t seed = rice_decode(in, rice_parameter(m));
            return value + query_leaf(k, seed, static_cast<unsigned>(m), mode_, retrieval_.query(k));
        }
        const std::uint64_t seed = rice_decode(in, rice_parameter(m));
        const SplitPlan p = plan(m, leaf_size_);
        const unsigned j = split_hash(k, seed, p.parts());
        for (unsigned i = 0; i < j; ++i) {
            skip_subtree(in, p.part_sizes[i]);
            value += p.part_sizes[i];
        }
        m = p.part_sizes[j];
    }
}

unsigned Mphf::key_width() const { return static_cast<unsigned>(std::bit_width(key_count_)); }
unsigned Mphf::offset_width() const { return static_cast<unsigned>(std::bit_width(stream_bits_)); }

std::uint64_t Mphf::header_bytes() const {
    return sizeof(kMagic) + 2 + 1 + 8 + 4 + 1 + 1 + 4 + rice_table_.size();
}

std::uint64_t Mphf::offset_block_bytes() const {
    const std::uint64_t bits = bucket_prefix_.size() * (key_width() + offset_width());
    return 2 + 8 * ((bits + 63) / 64);
}

std::vector<std::byte> Mphf::serialize() const {
    ByteWriter out;
    for (const char c : kMagic) out.put(static_cast<std::uint8_t>(c));
    out.put(kFormatVersion);
    out.put(kMasterHashMurmur3x64_128);
    out.put(key_count_);
    out.put(bucket_size_);
    out.put(static_cast<std::uint8_t>(leaf_size_));
    out.put(static_cast<std::uint8_t>(mode_));
    out.put(static_cast<std::uint32_t>(rice_table_.size()));
    for (const std::uint8_t g : rice_table_) out.put(g);

    const unsigned kw = key_width();
    const unsigned ow = offset_width();
    out.put(static_cast<std::uint8_t>(kw));
    out.put(static_cast<std::uint8_t>(ow));
    BitWriter offsets;
    for (std::size_t b = 0; b < bucket_prefix_.size(); ++b) {
        offsets.write(bucket_prefix_[b], kw);
        offsets.write(bucket_bits_[b], ow);
    }
    out.put_words(offsets.words());

    out.put(stream_bits_);
    out.put_words(stream_);
    retrieval_.serialize(out);
    return out.release();
}

Mphf Mphf::deserialize(std::span<const std::byte> bytes) {
    ByteReader in(bytes);
    for (const char c : kMagic) {
        if (in.get<std::uint8_t>() != static_cast<std::uint8_t>(c)) throw FormatError("bad magic");
    }
    if (in.get<std::uint16_t>() != kFormatVersion) throw FormatError("unsupported format version");
    if (in.get<std::uint8_t>() != kMasterHashMurmur3x64_128) throw FormatError("unknown master hash");

    Mphf out;
    out.key_count_ = in.get<std::uint64_t>();
    out.bucket_size_ = in.get<std::uint32_t>();
    out.leaf_size_ = in.get<std::uint8_t>();
    const auto mode = in.get<std::uint8_t>();
    if (out.leaf_size_ == 0 || out.leaf_size_ > kMaxLeafSize) throw FormatError("leaf size out of range");
    if (out.bucket_size_ < out.leaf_size_) throw FormatError("bucket size below leaf size");
    if (mode > static_cast<std::uint8_t>(LeafMode::rotate_cached)) throw FormatError("unknown leaf mode");
    out.mode_ = static_cast<LeafMode>(mode);

    const auto classes = in.get<std::uint32_t>();
    if (classes > in.remaining()) throw FormatError("descriptor truncated");
    out.rice_table_.resize(classes);
    for (auto& g : out.rice_table_) {
        g = in.get<std::uint8_t>();
        if (g >= 64) throw FormatError("Rice parameter out of range");
    }

    const std::uint64_t nb = bucket_count_for(out.key_count_, out.bucket_size_);
    const unsigned kw = in.get<std::uint8_t>();
    const unsigned ow = in.get<std::uint8_t>();
    if (kw > 64 || ow > 64) throw FormatError("offset width out of range");
    const unsigned __int128 offset_bits = static_cast<unsigned __int128>(nb + 1) * (kw + ow);
    const unsigned __int128 offset_words = (offset_bits + 63) / 64;
    if (offset_words > in.remaining() / 8) throw FormatError("descriptor truncated");
    const std::vector<std::uint64_t> packed = in.get_words(static_cast<std::size_t>(offset_words));
    BitReader offsets(packed, static_cast<std::size_t>(offset_bits));
    out.bucket_prefix_.resize(nb + 1);
    out.bucket_bits_.resize(nb + 1);
    for (std::uint64_t b = 0; b <= nb; ++b) {
        out.bucket_prefix_[b] = offsets.read(kw);
        out.bucket_bits_[b] = offsets.read(ow);
    }
    if (offset_bits % 64 != 0 && (packed.back() >> (offset_bits % 64)) != 0) {
        throw FormatError("nonzero padding in bucket offsets");
    }

    out.stream_bits_ = in.get<std::uint64_t>();
    const std::uint64_t stream_words = out.stream_bits_ / 64 + (out.stream_bits_ % 64 != 0);
    if (stream_words > in.remaining() / 8) throw FormatError("descriptor truncated");
    out.stream_ = in.get_words(stream_words);
    if (out.stream_bits_ % 64 != 0 && (out.stream_.back() >> (out.stream_bits_ % 64)) != 0) {
        throw FormatError("nonzero padding in seed stream");
    }
    if (kw != out.key_width() || ow != out.offset_width()) throw FormatError("offset widths inconsistent");
    if (out.bucket_prefix_[0] != 0 || out.bucket_prefix_[nb] != out.key_count_ || out.bucket_bits_[0] != 0 ||
        out.bucket_bits_[nb] != out.stream_bits_) {
        throw FormatError("bucket offsets inconsistent");
    }
    for (std::uint64_t b = 0; b < nb; ++b) {
        if (out.bucket_prefix_[b + 1] < out.bucket_prefix_[b] || out.bucket_bits_[b + 1] < out.bucket_bits_[b]) {
            throw FormatError("bucket offsets not monotone");
        }
        if (out.bucket_prefix_[b + 1] - out.bucket_prefix_[b] > std::numeric_limits<std::uint32_t>::max()) {
            throw FormatError("bucket too large");
        }
    }

    out.retrieval_ = RibbonRetrieval::deserialize(in);
    if (in.remaining() != 0) throw FormatError("trailing bytes after descriptor");
    std::uint64_t retrieval_keys = 0;
    for (std::uint64_t b = 0; b < nb; ++b) {
        retrieval_keys += retrieval_key_count(out.bucket_prefix_[b + 1] - out.bucket_prefix_[b], out.leaf_size_);
    }
    if (out.retrieval_.column_count() !=
        RibbonRetrieval::column_count_for(retrieval_keys, out.retrieval_.epsilon_fixed())) {
        throw FormatError("retrieval column count does not match the key count");
    }
    return out;
}

SpaceReport Mphf::stats() const {
    SpaceReport r;
    r.keys = key_count_;
    r.header_bits = 8 * header_bytes();
    r.offset_bits = 8 * offset_block_bytes();
    r.seed_bits = 64 + 64 * stream_.size();
    r.retrieval_bits = retrieval_.serialized_bits();
    r.total_bits = r.header_bits + r.offset_bits + r.seed_bits + r.retrieval_bits;
    r.seed_stream_payload_bits = stream_bits_;
    return r;
}

VerifyResult Mphf::verify(std::span<const std::string> keys) const {
    std::vector<HashedKey> hashed(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) hashed[i] = master_hash(keys[i]);
    std::vector<std::uint64_t> index;
    std::optional<VerifyResult> failure;
    sort_hashed(hashed, index, [&](std::uint64_t a, std::uint64_t b) {
        if (failure) return;
        failure = VerifyResult{false,
                               keys[a] == keys[b] ? "duplicate key in input" : "master hash collision in input",
                               std::max(a, b)};
    });
    if (failure) return *failure;
    return verify_sorted(hashed, index);
}

VerifyResult Mphf::verify_hashed(std::span<const HashedKey> keys) const {
    std::vector<HashedKey> hashed(keys.begin(), keys.end());
    std::vector<std::uint64_t> index;
    std::optional<VerifyResult> failure;
    sort_hashed(hashed, index, [&](std::uint64_t, std::uint64_t b) {
        if (!failure) failure = VerifyResult{false, "duplicate hashed key in input", b};
    });
    if (failure) return *failure;
    return verify_sorted(hashed, index);
}

VerifyResult Mphf::verify_sorted(std::span<const HashedKey> sorted, std::span<const std::uint64_t> input_index) const {
    if (sorted.size() != key_count_) {
        return {false, "descriptor holds " + std::to_string(key_count_) + " keys, input has " +
                           std::to_string(sorted.size()), std::nullopt};
    }
    const std::uint64_t nb = bucket_count();
    std::vector<HashedKey> keys(sorted.begin(), sorted.end());
    std::vector<std::uint64_t> index(input_index.begin(), input_index.end());
    std::vector<std::uint64_t> prefix(nb + 1, 0);
    for (const HashedKey& k : keys) ++prefix[bucket_of(k, nb) + 1];
    for (std::uint64_t b = 0; b < nb; ++b) {
        prefix[b + 1] += prefix[b];
        if (prefix[b + 1] != bucket_prefix_[b + 1]) {
            return {false, "bucket " + std::to_string(b) + " size differs from the descriptor",
                    prefix[b + 1] > prefix[b] ? std::optional<std::size_t>(index[prefix[b]]) : std::nullopt};
        }
    }

    // Replays construction: every code must be the minimum valid seed for its node
    std::vector<HashedKey> key_scratch;
    std::vector<std::uint64_t> index_scratch;
    RiceFitter fitter;
    std::vector<HashedKey> retrieval_keys;
    std::vector<std::uint8_t> retrieval_bits;
    for (std::uint64_t b = 0; b < nb; ++b) {
        const std::uint64_t begin = bucket_prefix_[b];
        const std::uint64_t size = bucket_prefix_[b + 1] - begin;
        BitReader in(stream_, bucket_bits_[b + 1], bucket_bits_[b]);
        key_scratch.resize(size);
        index_scratch.resize(size);
        std::optional<VerifyResult> failure;

        const auto walk = [&](auto&& self, std::span<HashedKey> node_keys, std::span<std::uint64_t> node_index) {
            const std::uint64_t m = node_keys.size();
            if (m <= 1) return;
            const std::uint64_t seed = rice_decode(in, rice_parameter(m));
            fitter.add(rice_class(m, leaf_size_), seed);
            if (m <= leaf_size_) {
                const LeafSolution sol = search_leaf(node_keys, mode_);
                if (sol.encoded_seed != seed) {
                    failure = VerifyResult{false, "leaf seed in bucket " + std::to_string(b) + " is not minimal",
                                           node_index[0]};
                }
                retrieval_keys.insert(retrieval_keys.end(), node_keys.begin(), node_keys.end());
                retrieval_bits.insert(retrieval_bits.end(), sol.choices.begin(), sol.choices.end());
                return;
            }
            const SplitPlan p = plan(m, leaf_size_);
            if (search_split(node_keys, p.parts()) != seed) {
                failure = VerifyResult{false, "split seed in bucket " + std::to_string(b) + " is not minimal",
                                       node_index[0]};
                return;
            }
            const auto ends = interval_ends(p.parts());
            std::array<std::uint32_t, kMaxFanout> cursor{};
            for (unsigned j = 1; j < p.fanout; ++j) cursor[j] = ends[j - 1];
            for (std::size_t i = 0; i < m; ++i) {
                const unsigned j = part_of(node_keys[i], seed, m, std::span(ends.data(), p.fanout));
                key_scratch[cursor[j]] = node_keys[i];
                index_scratch[cursor[j]] = node_index[i];
                ++cursor[j];
            }
            std::copy_n(key_scratch.begin(), m, node_keys.begin());
            std::copy_n(index_scratch.begin(), m, node_index.begin());
            std::uint64_t offset = 0;
            for (const std::uint32_t part : p.parts()) {
                self(self, node_keys.subspan(offset, part), node_index.subspan(offset, part));
                if (failure) return;
                offset += part;
            }
        };

        try {
            walk(walk, std::span(keys).subspan(begin, size), std::span(index).subspan(begin, size));
        } catch (const Error& e) {
            return {false, "bucket " + std::to_string(b) + ": " + e.what(),
                    size > 0 ? std::optional<std::size_t>(index[begin]) : std::nullopt};
        }
        if (failure) return *failure;
        if (in.position() != bucket_bits_[b + 1]) {
            return {false, "codes of bucket " + std::to_string(b) + " do not end at the next bucket offset",
                    size > 0 ? std::optional<std::size_t>(index[begin]) : std::nullopt};
        }
    }

    if (fitter.table() != rice_table_) return {false, "Rice table differs from the fitted parameters", std::nullopt};

    // the retrieval block must be exactly what construction produces for these choice bits
    try {
        const RibbonRetrieval expected = RibbonRetrieval::build(
            retrieval_keys, retrieval_bits, static_cast<double>(retrieval_.epsilon_fixed()) / 65536.0);
        ByteWriter a, b;
        expected.serialize(a);
        retrieval_.serialize(b);
        if (a.release() != b.release()) return {false, "retrieval block differs from construction", std::nullopt};
    } catch (const ConstructionFailure& e) {
        return {false, std::string("retrieval replay failed: ") + e.what(), std::nullopt};
    }

    std::vector<bool> seen(key_count_, false);
    for (std::size_t i = 0; i < keys.size(); ++i) {
        std::uint64_t v = 0;
        try {
            v = query(keys[i]);
        } catch (const Error& e) {
            return {false, std::string("query failed: ") + e.what(), index[i]};
        }
        if (v >= key_count_) return {false, "query value " + std::to_string(v) + " out of range", index[i]};
        if (seen[v]) return {false, "query value " + std::to_string(v) + " assigned twice", index[i]};
        seen[v] = true;
    }
    return {true, "ok", std::nullopt};
}

}  // namespace shockhash
