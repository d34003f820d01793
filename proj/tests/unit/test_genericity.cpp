#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "fgpr/agraph.hpp"
#include "fgpr/errors.hpp"
#include "fgpr/genericity.hpp"
#include "fgpr/rng.hpp"
#include "fgpr/words.hpp"
#include "oracles.hpp"

using namespace fgpr;

namespace {

param_set good_params() {
    param_set p;
    p.lambda = rational(1, 40);
    p.mu = rational(9, 10);
    p.L = 2;
    p.r = 2;
    return p;
}

} // namespace

TEST_SUITE_BEGIN("genericity");

TEST_CASE("parameter gate accepts and rejects exactly") {
    CHECK(validate_params(good_params()).empty());

    param_set p = good_params();
    p.lambda = rational(1, 6); // above mu/(15L+3mu) = 3/109 and mu/(3r) = 3/20 fails too
    auto v = validate_params(p);
    CHECK(!v.empty());

    p = good_params();
    p.L = 1; // basic range violated, and breaks the L >= r chain link
    CHECK(!validate_params(p).empty());

    p = good_params();
    p.r = 3;
    p.L = 2; // L < r: the middle chain inequality fails
    CHECK(!validate_params(p).empty());

    p = good_params();
    p.mu = rational(11, 10);
    CHECK(!validate_params(p).empty());
    p.mu = rational(0);
    CHECK(!validate_params(p).empty());

    p = good_params();
    p.lambda = rational(0);
    CHECK(!validate_params(p).empty());

    // the largest admissible lambda for mu=9/10, L=r=2 is exactly 3/109
    p = good_params();
    p.lambda = rational(3, 109);
    CHECK(validate_params(p).empty());
    p.lambda = rational(3, 109) + rational(1, 1000000);
    CHECK(!validate_params(p).empty());
}

TEST_CASE("piece lengths: frozen values and the quadratic oracle") {
    auto piece = [](const char* s) {
        return max_piece_length(cyclic_word::of(word::parse(s, 2)));
    };
    CHECK(piece("a") == 0);
    CHECK(piece("ab") == 0);
    CHECK(piece("aaaaa") == 4);     // proper power: maximal self-overlap
    CHECK(piece("ababab") == 5);
    CHECK(piece("abAB") == 1);
    CHECK(piece("aabb") == 1);

    rng gen(606);
    for (int trial = 0; trial < 300; ++trial) {
        int n = 1 + static_cast<int>(gen.below(24));
        word w = sample_word(2, n, true, gen.next());
        CHECK(max_piece_length(cyclic_word::of(w)) ==
              oracles::naive_max_piece(cyclic_word::of(w)));
    }

    CHECK(satisfies_c_prime(cyclic_word::of(word::parse("abAB", 2)), rational(1, 3)));
    CHECK(!satisfies_c_prime(cyclic_word::of(word::parse("abAB", 2)), rational(1, 4)));
}

TEST_CASE("readability agrees with the small-graph oracle") {
    auto oracle_graphs = oracles::small_folded_graphs(2, 3);
    auto oracle_mu = [&](const word& w, const rational& mu) {
        for (const agraph& g : oracle_graphs) {
            if (rational(static_cast<std::int64_t>(g.vol())) > mu * rational(static_cast<std::int64_t>(w.length())))
                continue;
            int rk = static_cast<int>(g.vol()) - g.num_vertices + 1;
            if (rk > 1) continue; // ambient rank 2: witness rank <= 1
            if (oracles::naive_reads(g, w)) return true;
        }
        return false;
    };
    auto oracle_mu_l = [&](const word& w, const rational& mu, int L) {
        for (const agraph& g : oracle_graphs) {
            if (rational(static_cast<std::int64_t>(g.vol())) > mu * rational(static_cast<std::int64_t>(w.length())))
                continue;
            int rk = static_cast<int>(g.vol()) - g.num_vertices + 1;
            if (rk > L) continue;
            bool low = false;
            for (std::int32_t v = 0; v < g.num_vertices; ++v)
                if (degree(g, v) < 4) low = true;
            if (!low) continue;
            if (oracles::naive_reads(g, w)) return true;
        }
        return false;
    };

    for (const rational& mu : {rational(1, 3), rational(1, 2)}) {
        for (int n = 1; n <= 7; ++n) {
            if (mu * rational(n) > rational(3)) continue; // oracle covers <= 3 edges
            enumerate_words(2, n, false, [&](const word& w) {
                auto mine = is_mu_readable(w, mu, 2);
                CHECK(mine.has_value() == oracle_mu(w, mu));
                if (mine) {
                    CHECK(reads_word(*mine, w));
                    CHECK(rational(static_cast<std::int64_t>(mine->vol())) <=
                          mu * rational(static_cast<std::int64_t>(w.length())));
                    CHECK(static_cast<int>(mine->vol()) - mine->num_vertices + 1 <= 1);
                }
                auto mine_l = is_mu_L_readable(w, mu, 2, 2);
                CHECK(mine_l.has_value() == oracle_mu_l(w, mu, 2));
                if (mine_l) {
                    CHECK(reads_word(*mine_l, w));
                    bool low = false;
                    for (std::int32_t v = 0; v < mine_l->num_vertices; ++v)
                        if (degree(*mine_l, v) < 4) low = true;
                    CHECK(low);
                }
            });
        }
    }

    // a^4 with mu = 1/4: the single a-loop is the witness; mu = 1/5 leaves no volume
    word a4 = word::parse("aaaa", 2);
    auto w1 = is_mu_readable(a4, rational(1, 4), 2);
    REQUIRE(w1.has_value());
    CHECK(w1->vol() == 1);
    CHECK(!is_mu_readable(a4, rational(1, 5), 2).has_value());
}

TEST_CASE("readability is thread-invariant including the witness") {
    rng gen(909);
    readability_options par;
    par.threads = 4;
    for (int trial = 0; trial < 40; ++trial) {
        word w = sample_word(2, 6, false, gen.next());
        auto one = is_mu_readable(w, rational(1, 2), 2);
        auto four = is_mu_readable(w, rational(1, 2), 2, par);
        CHECK(one.has_value() == four.has_value());
        if (one) CHECK(canonical_form(*one) == canonical_form(*four));
    }
}

TEST_CASE("condition checks report clauses independently") {
    CHECK_THROWS_AS(check_condition(cyclic_word::of(word::parse("ab", 2)),
                                    param_set{rational(1, 6), rational(9, 10), 2, 2},
                                    check_mode::word_only),
                    input_error);

    // the Eulerian cover word: all 12 two-letter subwords cyclically, but its
    // pieces are far above lambda * n
    word cover = word::parse("abAAbbaaBBAB", 2);
    genericity_report rep =
        check_condition(cyclic_word::of(cover), good_params(), check_mode::word_only, true);
    CHECK(rep.cyclic_two_letter);
    CHECK(!rep.c_prime_ok);
    CHECK(!rep.proper_power);
    CHECK(rep.all_two_letter_subwords);
    CHECK(rep.subwords.empty()); // skipped: an earlier clause already failed
    CHECK(rep.in_p == tri::no);
    CHECK(rep.in_p_prime == tri::no);
    CHECK(rep.max_piece_len ==
          oracles::naive_max_piece(cyclic_word::of(cover)));

    // linear scan misses the wrap pair
    genericity_report lin =
        check_condition(cyclic_word::of(cover), good_params(), check_mode::word_only, false);
    CHECK(!lin.all_two_letter_subwords);

    // proper powers are excluded from P by the power clause
    genericity_report pw = check_condition(cyclic_word::of(word::parse("abababababab", 2)),
                                           good_params(), check_mode::word_only);
    CHECK(pw.proper_power);
    CHECK(pw.in_p == tri::no);
}

TEST_CASE("short words reach the readability stage and land in P") {
    // ab has max_piece 0 (the four positioned rotations of it and its inverse
    // start with four distinct letters), so C'(1/40) holds; no graph of volume
    // at most floor(9/10 * 2) = 1 reads any of its subwords
    genericity_report rep = check_condition(cyclic_word::of(word::parse("ab", 2)),
                                            good_params(), check_mode::full);
    CHECK(rep.max_piece_len == 0);
    CHECK(rep.c_prime_ok);
    CHECK(!rep.proper_power);
    REQUIRE(rep.subwords.size() == 4); // a, b, ab, ba in length-lex order
    CHECK(rep.subwords[0].subword.str() == "a");
    CHECK(rep.subwords[1].subword.str() == "b");
    CHECK(rep.subwords[2].subword.str() == "ab");
    CHECK(rep.subwords[3].subword.str() == "ba");
    for (const subword_check& s : rep.subwords) {
        CHECK(s.mu_readable == tri::no);
        CHECK(s.mu_L_readable == tri::no);
        CHECK(!s.witness_mu);
        CHECK(!s.witness_mu_L);
    }
    CHECK(rep.in_p == tri::yes);
    CHECK(rep.in_p_prime == tri::no); // two letters cannot cover all 12 subwords

    // any length-10 word has a piece of length >= 1 > 10/40, so full mode
    // never reaches the subword stage at that length
    word w = sample_word(2, 10, true, 4242);
    genericity_report skip =
        check_condition(cyclic_word::of(w), good_params(), check_mode::full);
    CHECK(!skip.c_prime_ok);
    CHECK(skip.subwords.empty());
    CHECK(skip.in_p == tri::no);
}

TEST_CASE("readability hitting the state bound yields unknown, not an error") {
    readability_options tight;
    tight.max_states = 1;
    // deciding whether ab is 9/10-readable needs more than one closure state:
    // the path graph itself (volume 2) is over budget, so the search must go on
    CHECK_THROWS_AS(is_mu_readable(word::parse("ab", 2), rational(9, 10), 2, tight),
                    resource_limit_error);

    genericity_report rep =
        check_condition(cyclic_word::of(word::parse("ab", 2)), good_params(),
                        check_mode::word_only, false, tight);
    CHECK(rep.c_prime_ok);
    REQUIRE(rep.subwords.size() == 1);
    CHECK(rep.subwords[0].mu_readable == tri::unknown);
    CHECK(rep.in_p == tri::unknown);
    CHECK(rep.in_p_prime == tri::no);
}

TEST_CASE("exhaustive survey matches counting formulas") {
    survey_options opts;
    opts.rank = 2;
    opts.lengths = {2, 3, 4, 5, 6, 7};
    opts.exhaustive = true;
    survey_table t = survey(opts);
    REQUIRE(t.rows.size() == 6);
    for (const survey_row& row : t.rows) {
        REQUIRE(row.ok);
        CHECK(row.exhaustive);
        CHECK(row.total == oracles::count_cyclically_reduced_f2(row.n));
        CHECK(row.count_primitive == oracles::count_primitive_f2(row.n));
        CHECK(row.count_proper_power == oracles::count_proper_power_f2(row.n));
        CHECK(row.ci_crit_whole == 0);
        CHECK(!row.has_p_prime);
        CHECK(row.count_crit_whole <= row.count_pi_r);
    }
}

TEST_CASE("exhaustive crit counts match the partition oracle") {
    survey_options opts;
    opts.rank = 2;
    opts.lengths = {2, 3, 4, 5};
    opts.exhaustive = true;
    survey_table t = survey(opts);
    const std::string rose = canonical_form(rose_graph(2));
    for (const survey_row& row : t.rows) {
        std::uint64_t pi_r = 0, crit_whole = 0;
        for (const auto& [w, weight] : oracles::orbit_reps(2, row.n)) {
            oracles::pirank_result res = oracles::partition_pirank(w, 2);
            if (res.pi && *res.pi == 2) {
                pi_r += weight;
                if (res.crit.size() == 1 && *res.crit.begin() == rose) crit_whole += weight;
            }
        }
        CHECK(row.count_pi_r == pi_r);
        CHECK(row.count_crit_whole == crit_whole);
    }
}

TEST_CASE("sampled surveys are seeded and thread-invariant") {
    survey_options opts;
    opts.rank = 2;
    opts.lengths = {6, 8};
    opts.samples = 60;
    opts.seed = 777;
    survey_table a = survey(opts);
    survey_table b = survey(opts);
    opts.threads = 3;
    survey_table c = survey(opts);
    REQUIRE(a.rows.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(a.rows[i].total == 60);
        CHECK(a.rows[i].count_pi_r == b.rows[i].count_pi_r);
        CHECK(a.rows[i].count_pi_r == c.rows[i].count_pi_r);
        CHECK(a.rows[i].count_crit_whole == c.rows[i].count_crit_whole);
        CHECK(a.rows[i].count_primitive == c.rows[i].count_primitive);
        double p = a.rows[i].f_crit_whole;
        double expect_ci = 1.96 * std::sqrt(p * (1 - p) / 60.0);
        CHECK(a.rows[i].ci_crit_whole == doctest::Approx(expect_ci));
    }
    survey_options other = opts;
    other.seed = 778;
    survey_table d = survey(other);
    bool all_equal = true;
    for (std::size_t i = 0; i < 2; ++i)
        if (d.rows[i].count_pi_r != a.rows[i].count_pi_r ||
            d.rows[i].count_primitive != a.rows[i].count_primitive)
            all_equal = false;
    CHECK(!all_equal); // different seed, different sample
}

TEST_CASE("survey with parameters adds the P-prime column") {
    survey_options opts;
    opts.rank = 2;
    opts.lengths = {6};
    opts.samples = 25;
    opts.seed = 5;
    opts.params = good_params();
    survey_table t = survey(opts);
    REQUIRE(t.rows.size() == 1);
    CHECK(t.rows[0].has_p_prime);
    CHECK(t.rows[0].count_p_prime + t.rows[0].count_p_prime_unknown <= t.rows[0].total);
    // length 6 with lambda = 1/40 can never satisfy C', so no word lands in P'
    CHECK(t.rows[0].count_p_prime == 0);
}

TEST_CASE("survey rows degrade to errors under a tiny state bound") {
    survey_options opts;
    opts.rank = 2;
    opts.lengths = {4, 5};
    opts.exhaustive = true;
    opts.max_states = 1;
    survey_table t = survey(opts);
    REQUIRE(t.rows.size() == 2);
    for (const survey_row& row : t.rows) {
        CHECK(!row.ok);
        CHECK(!row.error.empty());
    }
    CHECK(!t.fit);
}

TEST_CASE("decay fit describes the crit-whole complement") {
    survey_options opts;
    opts.rank = 2;
    opts.lengths = {4, 5, 6, 7, 8};
    opts.exhaustive = true;
    survey_table t = survey(opts);
    REQUIRE(t.fit.has_value());
    CHECK(t.fit->points == 5);
    CHECK(t.fit->sigma > 0);
    CHECK(t.fit->sigma < 1); // the complement shrinks with n
    CHECK(t.fit->c > 0);
    CHECK(t.fit->r_squared >= 0);
    CHECK(t.fit->r_squared <= 1);
}

TEST_SUITE_END();
