#include "fgpr/wordmeasure.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "fgpr/errors.hpp"
#include "parallel.hpp"

namespace fgpr {

namespace {

constexpr std::uint64_t block_size = 1 << 16;
constexpr std::uint64_t exact_op_budget = 200'000'000;

// distinct generators occurring in w, ascending, with an inverse-use flag
struct occurrence_table {
    std::vector<int> generators;
    std::vector<bool> uses_inverse;
    // per letter of w: (index into generators, forward?)
    std::vector<std::pair<int, bool>> steps;
};

occurrence_table scan_word(const word& w, int rank) {
    if (rank < 1 || rank > max_rank) throw input_error("rank out of range");
    occurrence_table t;
    std::vector<int> slot_of(static_cast<std::size_t>(rank) + 1, -1);
    for (std::size_t i = 0; i < w.length(); ++i) {
        letter l = w.at(i);
        if (l.generator() > rank) throw input_error("letter outside ambient rank");
        if (slot_of[static_cast<std::size_t>(l.generator())] == -1) {
            slot_of[static_cast<std::size_t>(l.generator())] = static_cast<int>(t.generators.size());
            t.generators.push_back(l.generator());
            t.uses_inverse.push_back(false);
        }
    }
    // renumber slots in ascending generator order for determinism
    std::sort(t.generators.begin(), t.generators.end());
    for (std::size_t s = 0; s < t.generators.size(); ++s)
        slot_of[static_cast<std::size_t>(t.generators[s])] = static_cast<int>(s);
    for (std::size_t i = 0; i < w.length(); ++i) {
        letter l = w.at(i);
        int slot = slot_of[static_cast<std::size_t>(l.generator())];
        if (!l.positive()) t.uses_inverse[static_cast<std::size_t>(slot)] = true;
        t.steps.emplace_back(slot, l.positive());
    }
    return t;
}

void fill_random_permutation(std::vector<std::int32_t>& p, rng& gen) {
    const auto n = static_cast<int>(p.size());
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
    for (int i = n - 1; i > 0; --i) {
        auto j = static_cast<int>(gen.below(static_cast<std::uint64_t>(i) + 1));
        std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
    }
}

void invert_into(const std::vector<std::int32_t>& p, std::vector<std::int32_t>& inv) {
    for (std::size_t i = 0; i < p.size(); ++i)
        inv[static_cast<std::size_t>(p[i])] = static_cast<std::int32_t>(i);
}

std::uint64_t count_fixed_points(const occurrence_table& t,
                                 const std::vector<std::vector<std::int32_t>>& fwd,
                                 const std::vector<std::vector<std::int32_t>>& bwd, int degree) {
    std::uint64_t fix = 0;
    for (int x = 0; x < degree; ++x) {
        int y = x;
        for (const auto& [slot, forward] : t.steps) {
            const auto& tab = forward ? fwd[static_cast<std::size_t>(slot)]
                                      : bwd[static_cast<std::size_t>(slot)];
            y = tab[static_cast<std::size_t>(y)];
        }
        if (y == x) ++fix;
    }
    return fix;
}

} // namespace

permutation random_permutation(int degree, rng& gen) {
    if (degree < 1) throw input_error("permutation degree must be positive");
    permutation p(static_cast<std::size_t>(degree));
    fill_random_permutation(p, gen);
    return p;
}

permutation evaluate_word(const word& w, std::span<const permutation> tuple) {
    if (tuple.empty()) throw input_error("empty permutation tuple");
    const std::size_t degree = tuple[0].size();
    if (degree == 0) throw input_error("permutation degree must be positive");
    for (const permutation& p : tuple) {
        if (p.size() != degree) throw input_error("permutation degrees differ");
        std::vector<char> seen(degree, 0);
        for (std::int32_t v : p) {
            if (v < 0 || static_cast<std::size_t>(v) >= degree || seen[static_cast<std::size_t>(v)])
                throw input_error("not a permutation");
            seen[static_cast<std::size_t>(v)] = 1;
        }
    }
    const int rank = static_cast<int>(tuple.size());
    std::vector<permutation> inverses(tuple.size());
    for (std::size_t i = 0; i < w.length(); ++i) {
        letter l = w.at(i);
        if (l.generator() > rank) throw input_error("letter outside the tuple's rank");
        if (!l.positive() && inverses[static_cast<std::size_t>(l.generator() - 1)].empty()) {
            inverses[static_cast<std::size_t>(l.generator() - 1)].resize(degree);
            invert_into(tuple[static_cast<std::size_t>(l.generator() - 1)],
                        inverses[static_cast<std::size_t>(l.generator() - 1)]);
        }
    }
    permutation out(degree);
    for (std::size_t x = 0; x < degree; ++x) {
        auto y = static_cast<std::int32_t>(x);
        for (std::size_t i = 0; i < w.length(); ++i) {
            letter l = w.at(i);
            const permutation& tab = l.positive()
                                         ? tuple[static_cast<std::size_t>(l.generator() - 1)]
                                         : inverses[static_cast<std::size_t>(l.generator() - 1)];
            y = tab[static_cast<std::size_t>(y)];
        }
        out[x] = y;
    }
    return out;
}

fix_estimate mc_expected_fix(const word& w, int rank, int degree, std::uint64_t samples,
                             std::uint64_t seed, int threads) {
    if (degree < 1) throw input_error("degree must be positive");
    if (samples < 1) throw input_error("need at least one sample");
    const occurrence_table table = scan_word(w, rank);
    const std::size_t k = table.generators.size();

    const std::uint64_t blocks = (samples + block_size - 1) / block_size;
    std::uint64_t sum = 0;
    std::uint64_t sum_sq = 0;
    std::mutex merge_mu;
    // per-block derived seeds and integer partial sums: the merged totals are
    // identical for every thread count and schedule
    detail::parallel_tasks(blocks, threads, 1, [&](std::uint64_t begin, std::uint64_t end) {
        std::vector<std::vector<std::int32_t>> fwd(k), bwd(k);
        for (std::size_t s = 0; s < k; ++s) {
            fwd[s].resize(static_cast<std::size_t>(degree));
            bwd[s].resize(static_cast<std::size_t>(degree));
        }
        std::uint64_t local_sum = 0;
        std::uint64_t local_sq = 0;
        for (std::uint64_t b = begin; b < end; ++b) {
            rng gen(derive_seed(seed, b));
            const std::uint64_t in_block =
                b + 1 == blocks && samples % block_size != 0 ? samples % block_size : block_size;
            for (std::uint64_t s = 0; s < in_block; ++s) {
                for (std::size_t g = 0; g < k; ++g) {
                    fill_random_permutation(fwd[g], gen);
                    if (table.uses_inverse[g]) invert_into(fwd[g], bwd[g]);
                }
                std::uint64_t fix = count_fixed_points(table, fwd, bwd, degree);
                local_sum += fix;
                local_sq += fix * fix;
            }
        }
        std::lock_guard<std::mutex> lock(merge_mu);
        sum += local_sum;
        sum_sq += local_sq;
    });

    fix_estimate est;
    est.input = w;
    est.degree = degree;
    est.samples = samples;
    est.sum_fix = sum;
    est.sum_fix_sq = sum_sq;
    est.mean = static_cast<double>(sum) / static_cast<double>(samples);
    if (samples >= 2) {
        const auto s128 = static_cast<__int128>(samples);
        __int128 numer = static_cast<__int128>(sum_sq) * s128 -
                         static_cast<__int128>(sum) * static_cast<__int128>(sum);
        double variance = static_cast<double>(numer) /
                          (static_cast<double>(samples) * static_cast<double>(samples - 1));
        est.stderr_ = std::sqrt(variance / static_cast<double>(samples));
    }
    return est;
}

namespace {

// (degree!)^k and the operation estimate, saturating at the budget cap
std::uint64_t exact_tuple_count(const word& w, int degree, bool* feasible) {
    const occurrence_table table = scan_word(w, max_rank);
    const auto k = static_cast<int>(table.generators.size());
    const std::uint64_t cap = exact_op_budget;
    unsigned __int128 factorial = 1;
    for (int i = 2; i <= degree; ++i) factorial *= static_cast<unsigned>(i);
    unsigned __int128 tuples = 1;
    for (int i = 0; i < k; ++i) {
        tuples *= factorial;
        if (tuples > cap) break;
    }
    const std::uint64_t per_tuple =
        static_cast<std::uint64_t>(degree) * std::max<std::uint64_t>(w.length(), 1);
    *feasible = tuples <= cap / std::max<std::uint64_t>(per_tuple, 1);
    if (tuples > cap) return cap;
    return static_cast<std::uint64_t>(tuples);
}

} // namespace

bool exact_feasible(const word& w, int degree) {
    if (degree < 1) return false;
    bool feasible = false;
    exact_tuple_count(w, degree, &feasible);
    return feasible;
}

rational exact_expected_fix(const word& w, int degree) {
    if (degree < 1) throw input_error("degree must be positive");
    bool feasible = false;
    const std::uint64_t tuples = exact_tuple_count(w, degree, &feasible);
    if (!feasible)
        throw resource_limit_error("exact enumeration infeasible: ~" + std::to_string(tuples) +
                                       " tuples exceed the operation budget",
                                   exact_op_budget, 0);
    const occurrence_table table = scan_word(w, max_rank);
    const std::size_t k = table.generators.size();
    if (k == 0) return rational(degree); // identity fixes everything

    std::vector<std::vector<std::int32_t>> fwd(k), bwd(k);
    for (std::size_t s = 0; s < k; ++s) {
        fwd[s].resize(static_cast<std::size_t>(degree));
        std::iota(fwd[s].begin(), fwd[s].end(), 0);
        bwd[s].resize(static_cast<std::size_t>(degree));
    }
    std::uint64_t sum = 0;
    std::uint64_t seen = 0;
    for (;;) {
        for (std::size_t s = 0; s < k; ++s)
            if (table.uses_inverse[s]) invert_into(fwd[s], bwd[s]);
        sum += count_fixed_points(table, fwd, bwd, degree);
        ++seen;
        // odometer over lexicographic permutation sequences
        std::size_t pos = k;
        while (pos > 0 && !std::next_permutation(fwd[pos - 1].begin(), fwd[pos - 1].end())) --pos;
        if (pos == 0) break;
    }
    if (seen != tuples) throw std::logic_error("tuple enumeration miscounted");
    return rational(static_cast<std::int64_t>(sum), static_cast<std::int64_t>(tuples));
}

double fix_prediction(std::optional<int> pi, std::uint64_t crit_size, int degree) {
    if (!pi) return 1.0;
    return 1.0 + static_cast<double>(crit_size) /
                     std::pow(static_cast<double>(degree), static_cast<double>(*pi - 1));
}

std::optional<double> normalized_statistic(std::optional<int> pi, double estimate, int degree) {
    if (!pi) return std::nullopt;
    return std::pow(static_cast<double>(degree), static_cast<double>(*pi - 1)) * (estimate - 1.0);
}

compare_report compare_fixed_points(const word& w, int rank, std::optional<int> pi,
                                    std::uint64_t crit_size, std::span<const int> degrees,
                                    std::uint64_t samples, std::uint64_t seed, int threads) {
    if (degrees.empty()) throw input_error("no degrees to compare");
    compare_report report;
    report.input = w;
    report.pi = pi;
    report.crit_size = crit_size;
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        const int degree = degrees[i];
        compare_row row;
        row.degree = degree;
        if (exact_feasible(w, degree)) {
            row.exact = true;
            row.exact_value = exact_expected_fix(w, degree);
            row.estimate = row.exact_value->to_double();
        } else {
            row.samples = samples;
            fix_estimate est = mc_expected_fix(w, rank, degree, samples,
                                               derive_seed(seed, i), threads);
            row.estimate = est.mean;
            row.stderr_ = est.stderr_;
        }
        row.prediction = fix_prediction(pi, crit_size, degree);
        row.residual = row.estimate - row.prediction;
        row.normalized = normalized_statistic(pi, row.estimate, degree);
        report.rows.push_back(std::move(row));
    }
    return report;
}

} // namespace fgpr
