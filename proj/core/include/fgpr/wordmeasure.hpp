#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fgpr/rational.hpp"
#include "fgpr/rng.hpp"
#include "fgpr/words.hpp"

namespace fgpr {

// images[i] = image of i; always a bijection of {0..N-1}
using permutation = std::vector<std::int32_t>;

permutation random_permutation(int degree, rng& gen); // uniform, Fisher-Yates

// Substitutes tuple[i] for generator i+1 (the inverse permutation for inverse
// letters) and composes left to right. The ambient rank is the tuple length;
// the empty word gives the identity.
permutation evaluate_word(const word& w, std::span<const permutation> tuple);

struct fix_estimate {
    word input;
    int degree = 0;
    std::uint64_t samples = 0;
    double mean = 0;
    double stderr_ = 0; // sample standard deviation / sqrt(samples); 0 when samples < 2
    std::uint64_t sum_fix = 0;    // raw integer accumulators, for reproducibility
    std::uint64_t sum_fix_sq = 0;
};

// Monte-Carlo estimate of the expected fixed-point count of w evaluated on a
// uniform tuple of permutations of the given degree. Only the generators
// occurring in w are sampled (the rest integrate out by independence).
// Sampling is partitioned into fixed-size blocks with seeds derived from
// (seed, block); block sums are integers, so the result is identical for any
// thread count.
fix_estimate mc_expected_fix(const word& w, int rank, int degree, std::uint64_t samples,
                             std::uint64_t seed, int threads = 1);

// Brute-force average of #fix over all (degree!)^k tuples of the k occurring
// generators. Throws resource_limit_error (carrying the computed tuple count)
// when the enumeration is infeasible.
rational exact_expected_fix(const word& w, int degree);

// Largest degree where exact enumeration is considered feasible for w, by the
// fixed operation budget used in exact_expected_fix.
bool exact_feasible(const word& w, int degree);

struct compare_row {
    int degree = 0;
    bool exact = false;
    std::uint64_t samples = 0; // 0 for exact rows
    double estimate = 0;
    double stderr_ = 0; // 0 for exact rows
    std::optional<rational> exact_value;
    double prediction = 0;
    double residual = 0;
    std::optional<double> normalized; // N^(pi-1) * (E - 1); absent when pi infinite
};

struct compare_report {
    word input;
    std::optional<int> pi; // nullopt = infinity
    std::uint64_t crit_size = 0;
    std::vector<compare_row> rows;
};

// For each degree, the estimate (exact enumeration when feasible, Monte Carlo
// otherwise), the first-order prediction 1 + |Crit|/N^(pi-1) (1 when pi is
// infinite), the residual, and the normalized statistic. pi and crit_size are
// supplied by the caller. Monte-Carlo rows use seeds derived from (seed, row
// index).
compare_report compare_fixed_points(const word& w, int rank, std::optional<int> pi,
                                    std::uint64_t crit_size, std::span<const int> degrees,
                                    std::uint64_t samples, std::uint64_t seed, int threads = 1);

double fix_prediction(std::optional<int> pi, std::uint64_t crit_size, int degree);
std::optional<double> normalized_statistic(std::optional<int> pi, double estimate, int degree);

} // namespace fgpr
