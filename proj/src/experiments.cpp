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

#include <shockhash/experiments.hpp>

#include <array>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>

#include <shockhash/errors.hpp>
#include <shockhash/pseudoforest.hpp>

namespace shockhash::experiments {

namespace {

    constexpr std::uint64_t kLeafStreamTag = 0x510e527fade682d1ULL;

    //! Running mean and standard error
    class Accumulator {
      public:
        void add(double x) {
            ++count_;
            sum_ += x;
            sum_sq_ += x * x;
        }

        [[nodiscard]] Estimate estimate() const {
            Estimate e;
            e.trials = count_;
            if (count_ == 0) return e;
            const auto n = static_cast<double>(count_);
            e.mean = sum_ / n;
            if (count_ > 1) {
                const double var = std::max(0.0, (sum_sq_ - n * e.mean * e.mean) / (n - 1));
                e.std_error = std::sqrt(var / n);
            }
            return e;
        }

      private:
        std::uint64_t count_{0};
        double sum_{0};
        double sum_sq_{0};
    };

    std::uint64_t ipow(std::uint64_t base, unsigned exp) {
        std::uint64_t r = 1;
        for (unsigned i = 0; i < exp; ++i) r *= base;
        return r;
    }

    //! log2(n^n / n!)
    double log2_lower_bound(unsigned n) {
        return (n * std::log(static_cast<double>(n)) - std::lgamma(n + 1.0)) / std::numbers::ln2;
    }

}  // namespace

Fraction Fraction::make(std::uint64_t num, std::uint64_t den) {
    if (den == 0) throw InvalidParameter("zero denominator");
    const std::uint64_t g = std::gcd(num, den);
    return g == 0 ? Fraction{0, 1} : Fraction{num / g, den / g};
}

EnumerationResult enumerate_outcomes(unsigned n) {
    if (n == 0 || n > kMaxEnumerationSize) throw InvalidParameter("enumeration supports 1 <= n <= 5");
    EnumerationResult r;
    r.n = n;
    r.outcomes = ipow(n, 2 * n);
    std::array<std::uint32_t, 2 * kMaxEnumerationSize> digit{};
    UnionFindPF uf(n);
    for (std::uint64_t outcome = 0; outcome < r.outcomes; ++outcome) {
        uf.reset(n);
        bool ok = true;
        for (unsigned i = 0; i < n && ok; ++i) ok = uf.insert_unchecked(digit[2 * i], digit[2 * i + 1]);
        if (ok) {
            ++r.pseudoforests;
            r.orientation_sum += std::uint64_t{1} << uf.component_count();
        }
        for (unsigned d = 0; d < 2 * n; ++d) {
            if (++digit[d] < n) break;
            digit[d] = 0;
        }
    }
    return r;
}

Fraction mean_orientations_closed_form(unsigned n) {
    if (n == 0 || n > 12) throw InvalidParameter("closed form evaluated exactly for 1 <= n <= 12");
    std::uint64_t num = std::uint64_t{1} << n;
    for (unsigned i = 2; i <= n; ++i) num *= i;
    return Fraction::make(num, ipow(n, n));
}

double pseudoforest_bound_trees(unsigned n) {
    return std::pow(std::numbers::e / 2, -static_cast<double>(n)) * std::sqrt(std::numbers::pi / (2.0 * n));
}

double pseudoforest_bound_orientable(unsigned n) {
    return std::pow(std::numbers::e / 2, -static_cast<double>(n)) / std::numbers::e * std::sqrt(std::numbers::pi);
}

double log2_bijection_probability(unsigned n) {
    if (n == 0) throw InvalidParameter("n must be positive");
    return -log2_lower_bound(n);
}

double bijection_probability(unsigned n) { return std::exp2(log2_bijection_probability(n)); }

double component_factor_exact(unsigned n) {
    double d = 1;
    for (unsigned i = 1; i <= n; ++i) d *= 1.0 + 1.0 / (2.0 * i - 1.0);
    return d;
}

Fraction component_factor_fraction(unsigned n) {
    if (n > 15) throw InvalidParameter("exact component factor limited to n <= 15");
    Fraction d{1, 1};
    for (unsigned i = 1; i <= n; ++i) d = Fraction::make(d.num * (2 * i), d.den * (2 * i - 1));
    return d;
}

double component_factor_bound(unsigned n) { return std::numbers::e * std::sqrt(2.0 * n); }

Estimate mc_component_factor(unsigned n, std::uint64_t trials, std::uint64_t seed) {
    if (n == 0) throw InvalidParameter("n must be positive");
    std::mt19937_64 rng(seed);
    std::vector<std::uint32_t> stubs(2 * n);
    UnionFindPF uf(n);
    Accumulator acc;
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::iota(stubs.begin(), stubs.end(), 0);
        std::shuffle(stubs.begin(), stubs.end(), rng);
        uf.reset(n);
        // every component of a 2-regular multigraph is a cycle, so no edge is ever rejected
        for (unsigned i = 0; i < n; ++i) uf.insert_unchecked(stubs[2 * i] / 2, stubs[2 * i + 1] / 2);
        acc.add(std::ldexp(1.0, static_cast<int>(uf.component_count())));
    }
    return acc.estimate();
}

double filter_pass_bound(unsigned n) {
    if (n == 0) throw InvalidParameter("n must be positive");
    const double miss = std::pow(1.0 - 1.0 / n, 2.0 * n);
    return std::pow(1.0 - miss, static_cast<double>(n));
}

double filter_pass_exact(unsigned n, GraphModel model) {
    if (n == 0) throw InvalidParameter("n must be positive");
    if (n == 1) return 1.0;
    const auto dn = static_cast<double>(n);
    std::vector<double> p(n + 1, 0.0);
    std::vector<double> next(n + 1);
    p[0] = 1;
    for (unsigned key = 0; key < n; ++key) {
        std::fill(next.begin(), next.end(), 0.0);
        for (unsigned c = 0; c <= n; ++c) {
            if (p[c] == 0) continue;
            const double covered = c;
            const double fresh = dn - c;
            double p0, p1, p2;
            if (model == GraphModel::distinct_pair) {
                const double pairs = dn * (dn - 1);
                p0 = covered * (covered - 1) / pairs;
                p1 = 2 * covered * fresh / pairs;
                p2 = fresh * (fresh - 1) / pairs;
            } else {
                const double pairs = dn * dn;
                p0 = covered * covered / pairs;
                p1 = (2 * covered * fresh + fresh) / pairs;  // one new cell, or a self-loop on a new cell
                p2 = fresh * (fresh - 1) / pairs;
            }
            next[c] += p[c] * p0;
            if (c + 1 <= n) next[c + 1] += p[c] * p1;
            if (c + 2 <= n) next[c + 2] += p[c] * p2;
        }
        std::swap(p, next);
    }
    return p[n];
}

Estimate mc_filter_pass(unsigned n, std::uint64_t trials, std::uint64_t seed) {
    if (n == 0 || n > kMaxLeafSize) throw UnsupportedLeafSize("filter experiment needs 1 <= n <= 64");
    constexpr std::uint64_t kSeedsPerLeaf = 256;
    const std::uint64_t full = full_mask(n);
    std::vector<LeafBases> bases(n);
    std::uint64_t passes = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        if (t % kSeedsPerLeaf == 0) {
            const std::vector<HashedKey> keys = random_leaf(n, t / kSeedsPerLeaf, seed);
            for (unsigned i = 0; i < n; ++i) bases[i] = leaf_bases(keys[i]);
        }
        std::uint64_t mask = 0;
        for (const LeafBases& b : bases) {
            const LeafCells cells = leaf_cells(b, t % kSeedsPerLeaf, n);
            mask |= (std::uint64_t{1} << cells.h0) | (std::uint64_t{1} << cells.h1);
        }
        passes += mask == full;
    }
    Estimate e;
    e.trials = trials;
    if (trials == 0) return e;
    e.mean = static_cast<double>(passes) / static_cast<double>(trials);
    e.std_error = std::sqrt(e.mean * (1 - e.mean) / static_cast<double>(trials));
    return e;
}

double fit_log2_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidParameter("slope fit needs two or more points");
    const auto count = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(y[i] > 0)) throw InvalidParameter("slope fit needs positive values");
        const double ly = std::log2(y[i]);
        sx += x[i];
        sy += ly;
        sxx += x[i] * x[i];
        sxy += x[i] * ly;
    }
    const double denom = count * sxx - sx * sx;
    if (denom == 0) throw InvalidParameter("slope fit needs distinct x values");
    return (count * sxy - sx * sy) / denom;
}

Estimate mc_conditional_orientations(unsigned n, std::uint64_t trials, std::uint64_t seed) {
    if (n == 0 || n > kMaxLeafSize) throw UnsupportedLeafSize("orientation experiment needs 1 <= n <= 64");
    Accumulator acc;
    std::vector<Edge> edges(n);
    for (std::uint64_t t = 0; t < trials; ++t) {
        const std::vector<HashedKey> keys = random_leaf(n, t, seed);
        for (unsigned i = 0; i < n; ++i) {
            const LeafCells cells = leaf_cells(keys[i], 0, n);
            edges[i] = {cells.h0, cells.h1};
        }
        if (!is_pseudoforest(edges, n)) continue;
        acc.add(std::ldexp(1.0, static_cast<int>(component_count(edges, n))));
    }
    return acc.estimate();
}

std::string_view to_string(TrialMode mode) {
    switch (mode) {
        case TrialMode::brute_force: return "brute-force";
        case TrialMode::plain: return "plain";
        case TrialMode::rotate: return "rotate";
        case TrialMode::rotate_cached: return "rotate-cached";
    }
    return "unknown";
}

bool parse_trial_mode(std::string_view name, TrialMode& out) {
    for (const TrialMode m : {TrialMode::brute_force, TrialMode::plain, TrialMode::rotate, TrialMode::rotate_cached}) {
        if (name == to_string(m)) {
            out = m;
            return true;
        }
    }
    return false;
}

std::vector<HashedKey> random_leaf(unsigned n, std::uint64_t rep, std::uint64_t seed) {
    const std::uint64_t generator = remix(seed ^ remix(kLeafStreamTag + n));
    std::vector<HashedKey> keys(n);
    for (unsigned i = 0; i < n; ++i) keys[i] = synthetic_hashed_key(generator, rep * n + i);
    return keys;
}

TrialStats trial_statistics(unsigned n, TrialMode mode, std::uint64_t reps, std::uint64_t seed) {
    if (n == 0 || n > kMaxLeafSize) throw UnsupportedLeafSize("leaf size must be in [1, 64]");
    if (mode == TrialMode::brute_force && n > kMaxBruteForceSize) {
        throw InvalidParameter("brute force is limited to n <= 14");
    }
    if (reps == 0) throw InvalidParameter("reps must be positive");
    const auto start = std::chrono::steady_clock::now();
    double sum_trials = 0, sum_storage = 0, sum_log2 = 0;
    for (std::uint64_t r = 0; r < reps; ++r) {
        const std::vector<HashedKey> keys = random_leaf(n, r, seed);
        std::uint64_t q = 0;
        std::uint64_t trials = 0;
        switch (mode) {
            case TrialMode::brute_force:
                q = search_bijection(keys);
                trials = q + 1;
                break;
            case TrialMode::plain:
                q = search_plain(keys).encoded_seed;
                trials = trials_used(q, n, LeafMode::plain);
                break;
            case TrialMode::rotate:
                q = search_rotate(keys).encoded_seed;
                trials = trials_used(q, n, LeafMode::rotate);
                break;
            case TrialMode::rotate_cached:
                q = search_rotate_cached(keys).encoded_seed;
                trials = trials_used(q, n, LeafMode::rotate_cached);
                break;
        }
        const double storage = static_cast<double>(q) + 1.0;
        sum_trials += static_cast<double>(trials);
        sum_storage += storage;
        sum_log2 += std::log2(storage);
    }
    TrialStats s;
    s.n = n;
    s.mode = mode;
    s.reps = reps;
    const auto count = static_cast<double>(reps);
    s.mean_seed = sum_trials / count;
    s.mean_log2_seed = sum_log2 / count;
    const double choice_bits = mode == TrialMode::brute_force ? 0.0 : n;
    s.overhead_bits = std::log2(sum_storage / count) + choice_bits - log2_lower_bound(n);
    s.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return s;
}

void write_trial_csv(std::ostream& out, std::span<const TrialStats> rows) {
    out << "n,mode,reps,mean_seed,mean_log2_seed,overhead_bits,wall_time_s\n";
    const auto precision = out.precision(10);
    for (const TrialStats& r : rows) {
        out << r.n << ',' << to_string(r.mode) << ',' << r.reps << ',' << r.mean_seed << ',' << r.mean_log2_seed << ','
            << r.overhead_bits << ',' << r.wall_time_s << '\n';
    }
    out.precision(precision);
}

}  // namespace shockhash::experiments
