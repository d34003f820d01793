#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "fgpr/agraph.hpp"
#include "fgpr/errors.hpp"
#include "fgpr/pirank.hpp"
#include "fgpr/rng.hpp"
#include "fgpr/words.hpp"
#include "oracles.hpp"

using namespace fgpr;

namespace {

std::set<std::string> crit_forms(const pirank_report& r) {
    std::set<std::string> out;
    for (const subgroup& s : r.crit) out.insert(canonical_form(s.graph));
    return out;
}

} // namespace

TEST_SUITE_BEGIN("pirank");

TEST_CASE("hand-checked primitivity ranks") {
    // a^2: the only rank-1 subgroup containing it non-primitively is <a>
    pirank_report r = primitivity_rank(word::parse("aa", 2), 2);
    REQUIRE(r.pi == 1);
    REQUIRE(r.crit.size() == 1);
    CHECK(r.crit[0].rank == 1);
    CHECK(r.crit[0].basis == std::vector<word>{word::parse("a", 2)});

    // commutator: pi = 2 with critical set {F_2}
    r = primitivity_rank(word::parse("abAB", 2), 2);
    REQUIRE(r.pi == 2);
    REQUIRE(r.crit.size() == 1);
    CHECK(r.crit[0].is_whole_group());

    // a^2 b^2: same
    r = primitivity_rank(word::parse("aabb", 2), 2);
    CHECK(r.pi == 2);
    REQUIRE(r.crit.size() == 1);
    CHECK(r.crit[0].is_whole_group());

    // primitive words have no critical subgroups
    for (const char* s : {"a", "ab", "aab", "abb", "aabab"}) {
        r = primitivity_rank(word::parse(s, 2), 2);
        CHECK(!r.pi);
        CHECK(r.crit.empty());
    }

    // proper powers have pi = 1 and the cyclic group of the root critical
    r = primitivity_rank(word::parse("ababab", 2), 2);
    REQUIRE(r.pi == 1);
    REQUIRE(r.crit.size() == 1);
    CHECK(r.crit[0].basis == std::vector<word>{word::parse("ab", 2)});

    CHECK_THROWS_AS(primitivity_rank(word(), 2), input_error);
}

TEST_CASE("critical subgroups follow conjugation") {
    // b a^2 b^-1 is a^2 conjugated by b: Crit must be {b<a>b^-1}
    pirank_report r = primitivity_rank(word::parse("baaB", 2), 2);
    REQUIRE(r.pi == 1);
    REQUIRE(r.crit.size() == 1);
    CHECK(r.crit[0].basis == std::vector<word>{word::parse("baB", 2)});
    CHECK(accepts_loop(r.crit[0].graph, word::parse("baaB", 2)));
    CHECK(!accepts_loop(r.crit[0].graph, word::parse("aa", 2)));

    // conjugating never changes pi
    rng gen(404);
    for (int trial = 0; trial < 25; ++trial) {
        word w = sample_word(2, 6, false, gen.next());
        word u = sample_word(2, 3, false, gen.next());
        pirank_report a = primitivity_rank(w, 2);
        pirank_report b = primitivity_rank(u * w * u.inverse(), 2);
        CHECK(a.pi == b.pi);
        CHECK(a.crit.size() == b.crit.size());
        for (const subgroup& s : b.crit)
            CHECK(accepts_loop(s.graph, u * w * u.inverse()));
    }
}

TEST_CASE("pi and Crit are inversion-invariant") {
    rng gen(88);
    for (int trial = 0; trial < 25; ++trial) {
        word w = sample_word(2, 7, true, gen.next());
        pirank_report a = primitivity_rank(w, 2);
        pirank_report b = primitivity_rank(w.inverse(), 2);
        CHECK(a.pi == b.pi);
        CHECK(crit_forms(a) == crit_forms(b));
    }
}

TEST_CASE("matches the partition oracle exhaustively up to length 6") {
    for (int n = 2; n <= 6; ++n)
        for (const auto& [w, weight] : oracles::orbit_reps(2, n)) {
            pirank_report mine = primitivity_rank(w, 2);
            oracles::pirank_result ref = oracles::partition_pirank(w, 2);
            CHECK(mine.pi == ref.pi);
            CHECK(crit_forms(mine) == ref.crit);
            CHECK(mine.quotients_explored == ref.distinct_quotients);
        }
}

TEST_CASE("ambient rank matters") {
    // aabb in F_3 still has pi = 2: rank-2 subgroups of F_3 suffice
    pirank_report r = primitivity_rank(word::parse("aabb", 3), 3);
    CHECK(r.pi == 2);
    REQUIRE(r.crit.size() == 1);
    CHECK(r.crit[0].rank == 2);
    CHECK(r.crit[0].basis == std::vector<word>{word::parse("a", 3), word::parse("b", 3)});

    // the commutator's critical subgroup in F_3 is <a, b>, not F_3
    r = primitivity_rank(word::parse("abAB", 3), 3);
    CHECK(r.pi == 2);
    REQUIRE(r.crit.size() == 1);
    CHECK(!r.crit[0].is_whole_group());
    CHECK(r.crit[0].basis == std::vector<word>{word::parse("a", 3), word::parse("b", 3)});
}

TEST_CASE("state bound reports a resource error") {
    pirank_options tight;
    tight.max_states = 4;
    CHECK_THROWS_AS(primitivity_rank(word::parse("aabbab", 2), 2, tight),
                    resource_limit_error);
    try {
        primitivity_rank(word::parse("aabbab", 2), 2, tight);
    } catch (const resource_limit_error& e) {
        CHECK(e.bound() == 4);
        CHECK(e.explored() >= 4);
    }
}

TEST_CASE("thread count changes nothing") {
    pirank_options par;
    par.threads = 4;
    for (const char* s : {"aabbab", "abaBab", "aabbaabb"}) {
        word w = word::parse(s, 2);
        pirank_report one = primitivity_rank(w, 2);
        pirank_report four = primitivity_rank(w, 2, par);
        CHECK(one.pi == four.pi);
        CHECK(crit_forms(one) == crit_forms(four));
        CHECK(one.quotients_explored == four.quotients_explored);
    }
}

TEST_SUITE_END();
