#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <vector>

#include "fgpr/errors.hpp"
#include "fgpr/rational.hpp"
#include "fgpr/rng.hpp"
#include "fgpr/wordmeasure.hpp"
#include "fgpr/words.hpp"

using namespace fgpr;

TEST_SUITE_BEGIN("wordmeasure");

TEST_CASE("word evaluation substitutes and composes") {
    // sigma = (0 1 2) as images, tau = transposition (0 1)
    permutation sigma = {1, 2, 0};
    permutation tau = {1, 0, 2};
    std::vector<permutation> tuple = {sigma, tau};

    permutation id = evaluate_word(word(), tuple);
    CHECK(id == permutation{0, 1, 2});

    CHECK(evaluate_word(word::parse("a", 2), tuple) == sigma);
    CHECK(evaluate_word(word::parse("b", 2), tuple) == tau);

    // aA is the empty word already, but A alone must invert
    permutation sigma_inv = evaluate_word(word::parse("A", 2), tuple);
    for (int i = 0; i < 3; ++i) CHECK(sigma_inv[sigma[i]] == i);

    // left-to-right: ab maps x through sigma, then tau
    permutation ab = evaluate_word(word::parse("ab", 2), tuple);
    for (int i = 0; i < 3; ++i) CHECK(ab[i] == tau[sigma[i]]);

    // the commutator of a 3-cycle and a transposition is a 3-cycle: no fixed points
    permutation comm = evaluate_word(word::parse("abAB", 2), tuple);
    int fixed = 0;
    for (int i = 0; i < 3; ++i)
        if (comm[i] == i) ++fixed;
    CHECK(fixed == 0);
}

TEST_CASE("random permutations are uniform bijections") {
    rng gen(2024);
    std::map<permutation, int> counts;
    const int trials = 6000;
    for (int t = 0; t < trials; ++t) {
        permutation p = random_permutation(3, gen);
        REQUIRE(p.size() == 3);
        permutation sorted = p;
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted == permutation{0, 1, 2});
        ++counts[p];
    }
    CHECK(counts.size() == 6);
    for (const auto& [p, c] : counts) {
        CHECK(c > trials / 12); // expect trials/6 = 1000 each
        CHECK(c < trials / 3);
    }
}

TEST_CASE("exact expectations match hand values") {
    // E[fix] of a single generator is 1 at every degree
    CHECK(exact_expected_fix(word::parse("a", 2), 3) == rational(1));
    CHECK(exact_expected_fix(word::parse("a", 2), 5) == rational(1));

    // squares: E[fix(s^2)] counts fixed points plus 2-cycles, averaging to 2
    CHECK(exact_expected_fix(word::parse("aa", 2), 3) == rational(2));
    CHECK(exact_expected_fix(word::parse("aa", 2), 4) == rational(2));

    // cubes average 2 once 3-cycles exist
    CHECK(exact_expected_fix(word::parse("aaa", 2), 3) == rational(2));
    CHECK(exact_expected_fix(word::parse("aaa", 2), 4) == rational(2));

    // abab is a square of the single letter (ab): same measure as aa
    CHECK(exact_expected_fix(word::parse("abab", 2), 3) == rational(2));

    // commutator: E[fix] = N/(N-1)
    for (int n = 3; n <= 6; ++n)
        CHECK(exact_expected_fix(word::parse("abAB", 2), n) ==
              rational(n, n - 1));

    // a^2 b^2 at degree 4
    CHECK(exact_expected_fix(word::parse("aabb", 2), 4) == rational(4, 3));

    // the inverse word has the same fixed-point distribution
    CHECK(exact_expected_fix(word::parse("BBAA", 2), 4) == rational(4, 3));
}

TEST_CASE("enumeration feasibility is a hard budget") {
    word w = word::parse("aabb", 2); // two occurring generators, length 4
    CHECK(exact_feasible(w, 6));     // (6!)^2 * 6 * 4 ~ 1.2e7
    CHECK(!exact_feasible(w, 7));    // (7!)^2 * 7 * 4 ~ 7.1e8
    CHECK_THROWS_AS(exact_expected_fix(w, 7), resource_limit_error);

    word one = word::parse("aaaa", 2); // one occurring generator
    CHECK(exact_feasible(one, 8));     // 8! * 8 * 4 ~ 1.3e6
    CHECK(!exact_feasible(one, 12));   // 12! * 12 * 4 ~ 2.3e10

    try {
        exact_expected_fix(w, 7);
        FAIL("expected resource_limit_error");
    } catch (const resource_limit_error& e) {
        CHECK(e.bound() > 0); // the operation budget rides along
    }
}

TEST_CASE("Monte Carlo agrees with exact values within statistical error") {
    const std::uint64_t samples = 200000;
    struct probe {
        const char* text;
        int degree;
        rational exact;
    };
    const std::array<probe, 3> probes = {{
        {"aa", 4, rational(2)},
        {"abAB", 5, rational(5, 4)},
        {"aabb", 4, rational(4, 3)},
    }};
    for (const auto& p : probes) {
        fix_estimate est =
            mc_expected_fix(word::parse(p.text, 2), 2, p.degree, samples, 99);
        CHECK(est.degree == p.degree);
        CHECK(est.samples == samples);
        CHECK(est.stderr_ > 0);
        double target = static_cast<double>(p.exact.num()) /
                        static_cast<double>(p.exact.den());
        CHECK(std::abs(est.mean - target) < 4 * est.stderr_);
        // integer accumulators fully determine the floating summary
        CHECK(est.mean ==
              doctest::Approx(static_cast<double>(est.sum_fix) /
                              static_cast<double>(samples)));
    }
}

TEST_CASE("sampling is reproducible and thread-invariant") {
    word w = word::parse("aabAB", 2);
    fix_estimate a = mc_expected_fix(w, 2, 10, 30000, 1234, 1);
    fix_estimate b = mc_expected_fix(w, 2, 10, 30000, 1234, 4);
    CHECK(a.sum_fix == b.sum_fix);
    CHECK(a.sum_fix_sq == b.sum_fix_sq);
    CHECK(a.mean == b.mean);
    CHECK(a.stderr_ == b.stderr_);

    fix_estimate c = mc_expected_fix(w, 2, 10, 30000, 1235, 1);
    CHECK(a.sum_fix != c.sum_fix); // a different seed moves the integer sum
}

TEST_CASE("predictions and the normalized statistic") {
    CHECK(fix_prediction(2, 1, 10) == doctest::Approx(1.1));
    CHECK(fix_prediction(2, 3, 10) == doctest::Approx(1.3));
    CHECK(fix_prediction(1, 1, 7) == doctest::Approx(2.0));
    CHECK(fix_prediction(std::nullopt, 0, 9) == doctest::Approx(1.0));

    auto s = normalized_statistic(2, 1.05, 20);
    REQUIRE(s.has_value());
    CHECK(*s == doctest::Approx(20.0 * 0.05));
    CHECK(!normalized_statistic(std::nullopt, 1.0, 20).has_value());
    auto one = normalized_statistic(1, 1.8, 20);
    REQUIRE(one.has_value());
    CHECK(*one == doctest::Approx(0.8)); // N^0 = 1
}

TEST_CASE("comparison rows pick exact enumeration when feasible") {
    word w = word::parse("aabb", 2);
    std::vector<int> degrees = {4, 6, 12};
    compare_report rep = compare_fixed_points(w, 2, 2, 1, degrees, 20000, 7, 1);
    CHECK(rep.input == w);
    REQUIRE(rep.pi.has_value());
    CHECK(*rep.pi == 2);
    CHECK(rep.crit_size == 1);
    REQUIRE(rep.rows.size() == 3);

    const compare_row& r4 = rep.rows[0];
    CHECK(r4.exact);
    CHECK(r4.samples == 0);
    CHECK(r4.stderr_ == 0);
    REQUIRE(r4.exact_value.has_value());
    CHECK(*r4.exact_value == rational(4, 3));
    CHECK(r4.estimate == doctest::Approx(4.0 / 3.0));
    CHECK(r4.prediction == doctest::Approx(1.25));
    CHECK(r4.residual == doctest::Approx(r4.estimate - r4.prediction));
    REQUIRE(r4.normalized.has_value());
    CHECK(*r4.normalized == doctest::Approx(4.0 / 3.0));

    CHECK(rep.rows[1].exact); // degree 6 still within budget
    const compare_row& r12 = rep.rows[2];
    CHECK(!r12.exact);
    CHECK(r12.samples == 20000);
    CHECK(!r12.exact_value.has_value());
    CHECK(r12.stderr_ > 0);
    CHECK(std::abs(r12.estimate - (1.0 + 1.0 / 12.0)) < 6 * r12.stderr_);

    // identical call is reproducible including the Monte-Carlo rows
    compare_report again = compare_fixed_points(w, 2, 2, 1, degrees, 20000, 7, 3);
    CHECK(again.rows[2].estimate == r12.estimate);
    CHECK(again.rows[2].stderr_ == r12.stderr_);
}

TEST_CASE("primitive words have flat predictions") {
    word w = word::parse("ab", 2);
    std::vector<int> degrees = {5};
    compare_report rep = compare_fixed_points(w, 2, std::nullopt, 0, degrees, 1000, 3, 1);
    REQUIRE(rep.rows.size() == 1);
    CHECK(!rep.pi.has_value());
    CHECK(rep.rows[0].prediction == doctest::Approx(1.0));
    CHECK(!rep.rows[0].normalized.has_value());
    REQUIRE(rep.rows[0].exact_value.has_value());
    CHECK(*rep.rows[0].exact_value == rational(1)); // exact at this size
}

TEST_SUITE_END();
