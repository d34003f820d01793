#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fgpr/agraph.hpp"
#include "fgpr/genericity.hpp"
#include "fgpr/pirank.hpp"
#include "fgpr/whitehead.hpp"
#include "fgpr/wordmeasure.hpp"

namespace fgpr {

// The effective invocation, embedded in every JSON output so results can be
// reproduced by re-running with the same values. Thread count is deliberately
// absent: results are thread-count-invariant and must compare byte-equal.
struct run_config {
    std::string subcommand;
    std::optional<std::string> word;
    std::vector<std::string> generators;
    std::optional<std::string> graph_file;
    int rank = 2;
    std::optional<int> length;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> samples;
    std::optional<int> degree; // --N
    std::vector<int> compare;
    std::optional<std::string> lengths; // as given, e.g. "6..14"
    bool exhaustive = false;
    std::optional<std::string> lambda;
    std::optional<std::string> mu;
    std::optional<int> big_l;
    std::optional<std::string> mode; // "full" | "word-only"
    bool cyclic = false;
    bool cyclic_subwords = false;
    bool exact = false;
    std::optional<std::uint64_t> max_states;
    std::optional<std::string> dot_file;
};

// {"vertices": n, "base": b, "edges": [[from, to, "a"], ...]} with edges
// sorted by (from, label, to)
std::string graph_to_json(const agraph& g);
// Parses the same schema; labels must fit within rank, which becomes the
// graph's ambient rank.
agraph graph_from_json(std::string_view text, int rank);

std::string graph_to_dot(const agraph& g, const std::string& name = "g");
std::string graphs_to_dot(const std::vector<agraph>& graphs);

std::string pirank_to_json(const pirank_report& r, const run_config& c);
std::string primitive_to_json(const word& w, const minimize_result& m, bool primitive,
                              const run_config& c);
std::string subgroup_to_json(const subgroup& s, const run_config& c);
std::string fold_to_json(const agraph& folded, const run_config& c);
std::string check_to_json(const genericity_report& r, const run_config& c);
std::string survey_to_json(const survey_table& t, const run_config& c);
std::string words_to_json(const std::vector<word>& list, const run_config& c);

struct wordmeasure_output {
    word input;
    int degree = 0;
    std::uint64_t samples = 0;
    double mean_fix = 0;
    double stderr_ = 0;
    std::optional<rational> exact;
    std::optional<int> pi; // nullopt = infinity
    std::uint64_t crit_size = 0;
    double prediction = 0;
    std::optional<double> normalized;
    std::optional<compare_report> compare;
};

std::string wordmeasure_to_json(const wordmeasure_output& o, const run_config& c);

} // namespace fgpr
