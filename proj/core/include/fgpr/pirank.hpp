#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fgpr/agraph.hpp"
#include "fgpr/words.hpp"

namespace fgpr {

struct pirank_options {
    std::uint64_t max_states = 10'000'000;
    int threads = 1;
};

struct pirank_report {
    word input;
    std::optional<int> pi; // nullopt encodes infinity (w primitive)
    std::vector<subgroup> crit; // deduplicated, sorted by canonical graph form
    std::uint64_t quotients_explored = 0;
    std::int64_t elapsed_ms = 0;
};

// Primitivity rank pi(w): the smallest rank of a subgroup of F_rank containing
// w as a non-primitive element, together with the critical set of all such
// subgroups of that minimal rank. Enumerates every folded quotient of the
// cycle graph of w's cyclic core and tests the w-loop for primitivity in each
// fundamental group, ranks ascending. Quotients of rank above the ambient rank
// are enumerated (and counted) but never tested: whenever w is non-primitive
// the rose on w's occurring letters is a quotient of rank <= ambient rank
// witnessing pi(w) <= rank, and when w is primitive no quotient at all
// contains it non-primitively.
//
// Non-cyclically-reduced input is reduced first; critical subgroups are
// conjugated back, so crit is reported for w itself.
pirank_report primitivity_rank(const word& w, int rank, const pirank_options& opts = {});

} // namespace fgpr
