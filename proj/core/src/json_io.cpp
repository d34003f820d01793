#include "fgpr/json_io.hpp"

#include <algorithm>

#include <json.hpp>

#include "fgpr/errors.hpp"

namespace fgpr {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json config_json(const run_config& c) {
    ordered_json j;
    j["subcommand"] = c.subcommand;
    if (c.word) j["word"] = *c.word;
    if (!c.generators.empty()) j["generators"] = c.generators;
    if (c.graph_file) j["graph_file"] = *c.graph_file;
    j["rank"] = c.rank;
    if (c.length) j["length"] = *c.length;
    if (c.seed) j["seed"] = *c.seed;
    if (c.samples) j["samples"] = *c.samples;
    if (c.degree) j["N"] = *c.degree;
    if (!c.compare.empty()) j["compare"] = c.compare;
    if (c.lengths) j["lengths"] = *c.lengths;
    if (c.exhaustive) j["exhaustive"] = true;
    if (c.lambda) j["lambda"] = *c.lambda;
    if (c.mu) j["mu"] = *c.mu;
    if (c.big_l) j["L"] = *c.big_l;
    if (c.mode) j["mode"] = *c.mode;
    if (c.cyclic) j["cyclic"] = true;
    if (c.cyclic_subwords) j["cyclic_subwords"] = true;
    if (c.exact) j["exact"] = true;
    if (c.max_states) j["max_states"] = *c.max_states;
    if (c.dot_file) j["dot_file"] = *c.dot_file;
    return j;
}

std::vector<agraph::edge> sorted_edges(const agraph& g) {
    std::vector<agraph::edge> edges = g.edges;
    std::sort(edges.begin(), edges.end(), [](const agraph::edge& a, const agraph::edge& b) {
        if (a.from != b.from) return a.from < b.from;
        if (a.label != b.label) return a.label < b.label;
        return a.to < b.to;
    });
    return edges;
}

ordered_json graph_json(const agraph& g) {
    ordered_json j;
    j["vertices"] = g.num_vertices;
    j["base"] = g.base;
    ordered_json edges = ordered_json::array();
    for (const agraph::edge& e : sorted_edges(g)) {
        std::string label(1, letter(e.label, true).to_char());
        edges.push_back(ordered_json::array({e.from, e.to, label}));
    }
    j["edges"] = edges;
    return j;
}

ordered_json subgroup_json(const subgroup& s) {
    ordered_json j;
    j["rank"] = s.rank;
    if (s.index) j["index"] = *s.index;
    else j["index"] = nullptr;
    ordered_json basis = ordered_json::array();
    for (const word& b : s.basis) basis.push_back(b.str());
    j["basis"] = basis;
    j["graph"] = graph_json(s.graph);
    return j;
}

ordered_json tri_json(tri t) {
    switch (t) {
        case tri::yes: return "yes";
        case tri::no: return "no";
        default: return "unknown";
    }
}

ordered_json pi_json(const std::optional<int>& pi) {
    if (pi) return *pi;
    return "inf";
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

ordered_json compare_rows_json(const compare_report& r) {
    ordered_json rows = ordered_json::array();
    for (const compare_row& row : r.rows) {
        ordered_json j;
        j["N"] = row.degree;
        j["exact"] = row.exact;
        j["samples"] = row.samples;
        j["estimate"] = row.estimate;
        j["stderr"] = row.stderr_;
        if (row.exact_value) j["exact_value"] = row.exact_value->str();
        else j["exact_value"] = nullptr;
        j["prediction"] = row.prediction;
        j["residual"] = row.residual;
        if (row.normalized) j["normalized_stat"] = *row.normalized;
        else j["normalized_stat"] = nullptr;
        rows.push_back(j);
    }
    return rows;
}

} // namespace

std::string graph_to_json(const agraph& g) { return dump(graph_json(g)); }

agraph graph_from_json(std::string_view text, int rank) {
    if (rank < 2 || rank > max_rank) throw input_error("rank out of range");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("bad graph JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("vertices") || !j.contains("base") || !j.contains("edges"))
        throw input_error("graph JSON needs vertices, base, edges");
    if (!j["vertices"].is_number_integer() || !j["base"].is_number_integer() ||
        !j["edges"].is_array())
        throw input_error("graph JSON has wrong field types");
    agraph g;
    g.r = rank;
    g.num_vertices = j["vertices"].get<std::int32_t>();
    g.base = j["base"].get<std::int32_t>();
    if (g.num_vertices < 1) throw input_error("graph needs at least one vertex");
    if (g.base < 0 || g.base >= g.num_vertices) throw input_error("base vertex out of range");
    for (const auto& entry : j["edges"]) {
        if (!entry.is_array() || entry.size() != 3 || !entry[0].is_number_integer() ||
            !entry[1].is_number_integer() || !entry[2].is_string())
            throw input_error("graph edge entries are [from, to, \"label\"]");
        auto from = entry[0].get<std::int32_t>();
        auto to = entry[1].get<std::int32_t>();
        auto label = entry[2].get<std::string>();
        if (from < 0 || from >= g.num_vertices || to < 0 || to >= g.num_vertices)
            throw input_error("graph edge endpoint out of range");
        if (label.size() != 1 || label[0] < 'a' || label[0] > 'z')
            throw input_error("graph edge labels are single lowercase letters");
        int gen = label[0] - 'a' + 1;
        if (gen > rank) throw input_error("graph edge label outside ambient rank");
        g.edges.push_back({from, to, gen});
    }
    return g;
}

std::string graph_to_dot(const agraph& g, const std::string& name) {
    std::string out = "digraph " + name + " {\n";
    out += "  rankdir=LR;\n";
    out += "  node [shape=circle];\n";
    for (std::int32_t v = 0; v < g.num_vertices; ++v) {
        out += "  " + std::to_string(v);
        if (v == g.base) out += " [shape=doublecircle]";
        out += ";\n";
    }
    for (const agraph::edge& e : sorted_edges(g)) {
        out += "  " + std::to_string(e.from) + " -> " + std::to_string(e.to) + " [label=\"";
        out += letter(e.label, true).to_char();
        out += "\"];\n";
    }
    out += "}\n";
    return out;
}

std::string graphs_to_dot(const std::vector<agraph>& graphs) {
    std::string out;
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        if (i) out += "\n";
        out += graph_to_dot(graphs[i], "g" + std::to_string(i));
    }
    return out;
}

std::string pirank_to_json(const pirank_report& r, const run_config& c) {
    ordered_json j;
    j["config"] = config_json(c);
    j["word"] = r.input.str();
    j["pi"] = pi_json(r.pi);
    ordered_json crit = ordered_json::array();
    for (const subgroup& s : r.crit) crit.push_back(subgroup_json(s));
    j["crit"] = crit;
    j["quotients_explored"] = r.quotients_explored;
    j["elapsed_ms"] = r.elapsed_ms;
    return dump(j);
}

std::string primitive_to_json(const word& w, const minimize_result& m, bool primitive,
                              const run_config& c) {
    ordered_json j;
    j["config"] = config_json(c);
    j["word"] = w.str();
    j["primitive"] = primitive;
    j["min_word"] = m.min_word.rep().str();
    j["min_length"] = m.min_word.length();
    ordered_json chain = ordered_json::array();
    for (const whitehead_move& mv : m.chain) chain.push_back(mv.str());
    j["chain"] = chain;
    return dump(j);
}

std::string subgroup_to_json(const subgroup& s, const run_config& c) {
    ordered_json j;
    j["config"] = config_json(c);
    ordered_json inner = subgroup_json(s);
    for (auto& [key, value] : inner.items()) j[key] = value;
    return dump(j);
}

std::string fold_to_json(const agraph& folded, const run_config& c) {
    ordered_json j;
    j["config"] = config_json(c);
    j["graph"] = graph_json(folded);
    return dump(j);
}

std::string check_to_json(const genericity_report& r, const run_config& c) {
    ordered_json j;
    j["config"] = config_json(c);
    j["word"] = r.input.rep().str();
    ordered_json params;
    params["lambda"] = r.params.lambda.str();
    params["mu"] = r.params.mu.str();
    params["L"] = r.params.L;
    params["r"] = r.params.r;
    j["params"] = params;
    j["mode"] = r.mode == check_mode::full ? "full" : "word-only";
    j["max_piece_len"] = r.max_piece_len;
    j["c_prime_ok"] = r.c_prime_ok;
    j["proper_power"] = r.proper_power;
    j["all_two_letter_subwords"] = r.all_two_letter_subwords;
    ordered_json subs = ordered_json::array();
    for (const subword_check& s : r.subwords) {
        ordered_json row;
        row["subword"] = s.subword.str();
        row["mu_readable"] = tri_json(s.mu_readable);
        row["mu_L_readable"] = tri_json(s.mu_L_readable);
        if (s.witness_mu) row["witness_mu"] = graph_json(*s.witness_mu);
        else row["witness_mu"] = nullptr;
        if (s.witness_mu_L) row["witness_mu_L"] = graph_json(*s.witness_mu_L);
        else row["witness_mu_L"] = nullptr;
        subs.push_back(row);
    }
    j["subwords"] = subs;
    j["in_p"] = tri_json(r.in_p);
    j["in_p_prime"] = tri_json(r.in_p_prime);
    return dump(j);
}

std::string survey_to_json(const survey_table& t, const run_config& c) {
    ordered_json j;
    j["config"] = config_json(c);
    ordered_json rows = ordered_json::array();
    for (const survey_row& row : t.rows) {
        ordered_json rj;
        rj["n"] = row.n;
        rj["exhaustive"] = row.exhaustive;
        rj["ok"] = row.ok;
        if (!row.ok) {
            rj["error"] = row.error;
            rows.push_back(rj);
            continue;
        }
        rj["total"] = row.total;
        rj["count_pi_r"] = row.count_pi_r;
        rj["count_crit_whole"] = row.count_crit_whole;
        rj["count_primitive"] = row.count_primitive;
        rj["count_proper_power"] = row.count_proper_power;
        if (row.has_p_prime) {
            rj["count_p_prime"] = row.count_p_prime;
            rj["count_p_prime_unknown"] = row.count_p_prime_unknown;
        }
        rj["f_pi_r"] = row.f_pi_r;
        rj["f_crit_whole"] = row.f_crit_whole;
        rj["f_primitive"] = row.f_primitive;
        rj["f_proper_power"] = row.f_proper_power;
        rj["ci_crit_whole"] = row.ci_crit_whole;
        rows.push_back(rj);
    }
    j["rows"] = rows;
    if (t.fit) {
        ordered_json fit;
        fit["c"] = t.fit->c;
        fit["sigma"] = t.fit->sigma;
        fit["r_squared"] = t.fit->r_squared;
        fit["points"] = t.fit->points;
        j["fit"] = fit;
    } else {
        j["fit"] = nullptr;
    }
    return dump(j);
}

std::string words_to_json(const std::vector<word>& list, const run_config& c) {
    ordered_json j;
    j["config"] = config_json(c);
    j["count"] = list.size();
    ordered_json arr = ordered_json::array();
    for (const word& w : list) arr.push_back(w.str());
    j["words"] = arr;
    return dump(j);
}

std::string wordmeasure_to_json(const wordmeasure_output& o, const run_config& c) {
    ordered_json j;
    j["config"] = config_json(c);
    j["word"] = o.input.str();
    j["N"] = o.degree;
    j["samples"] = o.samples;
    j["mean_fix"] = o.mean_fix;
    j["stderr"] = o.stderr_;
    if (o.exact) j["exact"] = o.exact->str();
    j["pi"] = pi_json(o.pi);
    j["crit_size"] = o.crit_size;
    j["prediction"] = o.prediction;
    if (o.normalized) j["normalized_stat"] = *o.normalized;
    else j["normalized_stat"] = nullptr;
    if (o.compare) j["compare"] = compare_rows_json(*o.compare);
    return dump(j);
}

} // namespace fgpr
