#include "fgpr/pirank.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <utility>

#include "fgpr/errors.hpp"
#include "fgpr/whitehead.hpp"

namespace fgpr {

pirank_report primitivity_rank(const word& w, int rank, const pirank_options& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    if (rank < 2 || rank > max_rank) throw input_error("rank out of range");
    if (w.empty()) throw input_error("primitivity rank of the trivial word is undefined");

    pirank_report report;
    report.input = w;

    cyclic_decomposition dec = cyclic_reduce(w);
    const word& core = dec.core.rep();
    agraph cg = cycle_graph(dec.core, rank);

    // bucket every quotient key by cycle rank; ranks above the ambient rank
    // can be skipped (see header) but still count as explored
    std::vector<std::vector<std::string>> buckets(static_cast<std::size_t>(rank) + 1);
    closure_options copts;
    copts.max_states = opts.max_states;
    copts.threads = opts.threads;
    report.quotients_explored = for_each_quotient(cg, copts, [&](std::string_view key) {
        int rk = key_cycle_rank(key);
        assert(rk >= 1);
        if (rk <= rank) buckets[static_cast<std::size_t>(rk)].push_back(std::string(key));
        return true;
    });

    primitivity_cache cache;
    std::vector<std::string> crit_keys;
    for (int p = 1; p <= rank && !report.pi; ++p) {
        for (const std::string& key : buckets[static_cast<std::size_t>(p)]) {
            agraph q = graph_from_key(key);
            if (!loop_is_primitive(q, core, &cache)) crit_keys.push_back(key);
        }
        if (!crit_keys.empty()) report.pi = p;
    }

    if (report.pi) {
        // keys are canonical forms, so this is the canonical-form order
        std::sort(crit_keys.begin(), crit_keys.end());
        for (const std::string& key : crit_keys) {
            subgroup s = subgroup_from_graph(graph_from_key(key));
            if (!dec.conjugator.empty()) {
                // the quotient contains the cyclic core; conjugate back to w
                std::vector<word> conjugated;
                conjugated.reserve(s.basis.size());
                for (const word& b : s.basis)
                    conjugated.push_back(dec.conjugator * b * dec.conjugator.inverse());
                s = stallings_from_generators(conjugated, rank);
            }
            assert(s.rank == *report.pi);
            report.crit.push_back(std::move(s));
        }
        if (!dec.conjugator.empty()) {
            std::sort(report.crit.begin(), report.crit.end(),
                      [](const subgroup& a, const subgroup& b) {
                          return canonical_form(a.graph) < canonical_form(b.graph);
                      });
        }
    }

    report.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
    return report;
}

} // namespace fgpr
