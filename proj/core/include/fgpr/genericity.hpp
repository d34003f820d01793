#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fgpr/agraph.hpp"
#include "fgpr/rational.hpp"
#include "fgpr/words.hpp"

namespace fgpr {

struct param_set {
    rational lambda;
    rational mu;
    int L = 2;
    int r = 2;
};

struct param_violation {
    std::string inequality; // the violated condition, human-readable
    std::string detail;     // the offending exact values
};

// Exact rational evaluation of the admissibility chain
//   lambda <= mu/(15L+3mu) <= mu/(15r+3mu) < 1/6,   lambda < mu/(3r),
// plus the basic ranges 0 < lambda < 1, 0 < mu <= 1, L >= 2, r >= 2.
// Violations are data, not errors; empty result means the set is admissible.
std::vector<param_violation> validate_params(const param_set& p);

// Longest common prefix over all pairs of distinct elements of the symmetrized
// set: the 2|w| positioned rotations of w and of w^-1. Coinciding rotations
// (periodic words) contribute |w|-1, a proper-power's maximal self-overlap.
int max_piece_length(const cyclic_word& w);

// Exact test max_piece_length(w) < lambda * |w|.
bool satisfies_c_prime(const cyclic_word& w, const rational& lambda);

enum class tri : std::uint8_t { no, yes, unknown };

struct readability_options {
    std::uint64_t max_states = 10'000'000;
    int threads = 1;
};

// Witness graph for: some folded connected graph with at most mu*|w| edges and
// rank at most rank-1 reads w. Complete because the image of the w-path inside
// any witness is itself a folded quotient of the path graph of w, of no
// greater volume or rank; so searching the quotient closure of path_graph(w)
// decides the question. Throws resource_limit_error when the closure exceeds
// the state bound before the question is settled (answer unknown).
std::optional<agraph> is_mu_readable(const word& w, const rational& mu, int rank,
                                     const readability_options& opts = {});

// Same search with rank bound L and the extra requirement of a vertex of
// degree < 2*rank. Checking the degree on the quotient suffices: a 2r-regular
// subgraph of a connected folded graph fills every slot, hence is the whole
// graph, so a witness with a low-degree vertex yields a low-degree quotient.
std::optional<agraph> is_mu_L_readable(const word& w, const rational& mu, int L, int rank,
                                       const readability_options& opts = {});

enum class check_mode : std::uint8_t { word_only, full };

struct subword_check {
    word subword;
    tri mu_readable = tri::no;
    tri mu_L_readable = tri::no;
    std::optional<agraph> witness_mu;
    std::optional<agraph> witness_mu_L;
};

struct genericity_report {
    cyclic_word input;
    param_set params;
    check_mode mode = check_mode::word_only;
    bool cyclic_two_letter = false;
    int max_piece_len = 0;
    bool c_prime_ok = false;
    bool proper_power = false;
    bool all_two_letter_subwords = false;
    // empty when an earlier clause already failed
    std::vector<subword_check> subwords;
    tri in_p = tri::no;       // C'(lambda), not a proper power, no subword readable
    tri in_p_prime = tri::no; // in_p and all two-letter subwords occur
};

// Evaluates the three defining clauses and the two-letter-subword extension.
// Full mode checks every subword of every rotation of w of length at least
// ceil(|w|/2); word-only mode checks w itself. Subword readability checks are
// skipped when the piece or proper-power clause already failed. Readability
// checks that hit the state bound leave tri::unknown entries and an unknown
// overall verdict instead of an error. cyclic_two_letter controls whether the
// two-letter-subword scan wraps around the end of w.
genericity_report check_condition(const cyclic_word& w, const param_set& p, check_mode mode,
                                  bool cyclic_two_letter = false,
                                  const readability_options& opts = {});

struct survey_options {
    int rank = 2;
    std::vector<int> lengths;
    std::uint64_t samples = 500; // per length; ignored when exhaustive
    bool exhaustive = false;
    std::uint64_t seed = 0;
    std::optional<param_set> params; // adds a word-only P' column
    std::uint64_t max_states = 10'000'000;
    int threads = 1;
};

struct survey_row {
    int n = 0;
    bool exhaustive = false;
    std::uint64_t total = 0; // classified words (all cyclically reduced words, or samples)
    std::uint64_t count_pi_r = 0;
    std::uint64_t count_crit_whole = 0; // pi = r and Crit = {F_r}
    std::uint64_t count_primitive = 0;
    std::uint64_t count_proper_power = 0;
    std::uint64_t count_p_prime = 0;
    std::uint64_t count_p_prime_unknown = 0;
    bool has_p_prime = false;
    double f_pi_r = 0;
    double f_crit_whole = 0;
    double f_primitive = 0;
    double f_proper_power = 0;
    double ci_crit_whole = 0; // 95% binomial radius; 0 when exhaustive
    bool ok = true;
    std::string error; // set when the row hit a resource limit
};

// Least-squares fit of log(1 - f_crit_whole) against n: complement ~ c * sigma^n.
struct decay_fit {
    double c = 0;
    double sigma = 0;
    double r_squared = 0;
    int points = 0;
};

struct survey_table {
    std::vector<survey_row> rows;
    std::optional<decay_fit> fit;
};

// Classifies cyclically reduced words of each requested length by primitivity
// rank, Crit = {F_r}, primitivity, and proper power; exhaustively (weighting
// one representative per rotation/inversion orbit by its orbit size — all
// counted predicates are orbit-invariant) or by seeded uniform samples. The
// P' column, present when params is set, runs the word-only check on sampled
// words directly and on orbit representatives in exhaustive mode (word-only
// readability is not rotation-invariant, so the exhaustive P' count is defined
// on canonical representatives). Deterministic for fixed seed, independent of
// thread count; per-sample seeds derive from (seed, row, index).
survey_table survey(const survey_options& opts);

} // namespace fgpr
