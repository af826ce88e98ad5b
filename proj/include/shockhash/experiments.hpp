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

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <shockhash/shockhash.hpp>

namespace shockhash::experiments {

//! Non-negative fraction in lowest terms
struct Fraction {
    std::uint64_t num{0};
    std::uint64_t den{1};

    static Fraction make(std::uint64_t num, std::uint64_t den);
    [[nodiscard]] long double value() const { return static_cast<long double>(num) / static_cast<long double>(den); }
    friend bool operator==(const Fraction&, const Fraction&) = default;
};

//! n <= 5: every one of the n^(2n) ordered cell pairs per key, self-loops included
inline constexpr unsigned kMaxEnumerationSize = 5;

struct EnumerationResult {
    unsigned n{0};
    std::uint64_t outcomes{0};         //!< n^(2n)
    std::uint64_t pseudoforests{0};    //!< outcomes admitting a 1-orientation
    std::uint64_t orientation_sum{0};  //!< sum over outcomes of the number of valid choice vectors

    [[nodiscard]] Fraction pseudoforest_probability() const { return Fraction::make(pseudoforests, outcomes); }
    [[nodiscard]] Fraction mean_orientations() const { return Fraction::make(orientation_sum, outcomes); }
    //! E[2^c | pseudoforest]
    [[nodiscard]] Fraction conditional_orientations() const { return Fraction::make(orientation_sum, pseudoforests); }
};

//! Exhaustive enumeration. Throws InvalidParameter for n = 0 or n > 5.
EnumerationResult enumerate_outcomes(unsigned n);

//! 2^n * n! / n^n as an exact fraction (n <= 12)
Fraction mean_orientations_closed_form(unsigned n);

//! (e/2)^-n * sqrt(pi / (2n)): pseudotree-count lower bound
double pseudoforest_bound_trees(unsigned n);
//! (e/2)^-n * e^-1 * sqrt(pi): orientability lower bound
double pseudoforest_bound_orientable(unsigned n);

//! n! / n^n, evaluated in log space
double bijection_probability(unsigned n);
double log2_bijection_probability(unsigned n);

//! prod_{i=1..n} (1 + 1/(2i - 1)) = E[2^c] of the 2-regular configuration model
double component_factor_exact(unsigned n);
Fraction component_factor_fraction(unsigned n);  //!< exact for n <= 15
//! e * sqrt(2n)
double component_factor_bound(unsigned n);

struct Estimate {
    double mean{0};
    double std_error{0};
    std::uint64_t trials{0};
};

//! Monte-Carlo E[2^c(G_n)] over uniformly random perfect matchings of 2n stubs (node = stub / 2)
Estimate mc_component_factor(unsigned n, std::uint64_t trials, std::uint64_t seed);

//! Random leaf graph models
enum class GraphModel {
    distinct_pair,  //!< h1 uniform over the cells other than h0 (the leaf hash functions)
    self_loops,     //!< h0, h1 independent and uniform
};

//! (1 - (1 - 1/n)^(2n))^n
double filter_pass_bound(unsigned n);

//! Exact probability that n keys cover all n cells (Markov chain over the covered-cell count)
double filter_pass_exact(unsigned n, GraphModel model);

//! Fraction of seeds whose candidate-cell mask covers every cell, over fresh random leaves
Estimate mc_filter_pass(unsigned n, std::uint64_t trials, std::uint64_t seed);

//! Least-squares slope of log2(y) against x
double fit_log2_slope(std::span<const double> x, std::span<const double> y);

//! Monte-Carlo E[2^c | pseudoforest] over leaf hash graphs (no bound asserted)
Estimate mc_conditional_orientations(unsigned n, std::uint64_t trials, std::uint64_t seed);

//! Seed-search strategies compared by trial_statistics
enum class TrialMode { brute_force, plain, rotate, rotate_cached };

std::string_view to_string(TrialMode mode);
//! "brute-force", "plain", "rotate", "rotate-cached"
bool parse_trial_mode(std::string_view name, TrialMode& out);

inline constexpr unsigned kMaxBruteForceSize = 14;

struct TrialStats {
    unsigned n{0};
    TrialMode mode{TrialMode::plain};
    std::uint64_t reps{0};
    double mean_seed{0};       //!< mean 1-based trial count (base seeds for rotation modes)
    double mean_log2_seed{0};  //!< mean log2(stored seed + 1)
    double overhead_bits{0};   //!< log2(mean stored seed + 1) + (n if choice bits are stored) - log2(n^n / n!)
    double wall_time_s{0};
};

//! Random leaves of n synthetic keys; leaf r of size n is reproducible from (seed, n, r)
std::vector<HashedKey> random_leaf(unsigned n, std::uint64_t rep, std::uint64_t seed);

//! Throws InvalidParameter for brute force above n = 14
TrialStats trial_statistics(unsigned n, TrialMode mode, std::uint64_t reps, std::uint64_t seed);

//! Header row plus one row per entry
void write_trial_csv(std::ostream& out, std::span<const TrialStats> rows);

}  // namespace shockhash::experiments
