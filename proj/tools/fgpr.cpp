// Command-line front end: primitivity rank, Whitehead minimization, Stallings
// graphs, folding, genericity checks and surveys, word sampling/enumeration,
// and word measures on symmetric groups. Exit codes: 0 success, 2 bad input,
// 3 resource limit.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fgpr/agraph.hpp"
#include "fgpr/errors.hpp"
#include "fgpr/genericity.hpp"
#include "fgpr/json_io.hpp"
#include "fgpr/pirank.hpp"
#include "fgpr/rational.hpp"
#include "fgpr/rng.hpp"
#include "fgpr/whitehead.hpp"
#include "fgpr/wordmeasure.hpp"
#include "fgpr/words.hpp"

namespace {

using namespace fgpr;

std::uint64_t auto_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

std::vector<int> parse_lengths(const std::string& text) {
    auto to_int = [&](const std::string& s) {
        try {
            std::size_t pos = 0;
            int v = std::stoi(s, &pos);
            if (pos != s.size()) throw input_error("bad length range: '" + text + "'");
            return v;
        } catch (const std::exception&) {
            throw input_error("bad length range: '" + text + "'");
        }
    };
    std::vector<int> out;
    auto dots = text.find("..");
    if (dots == std::string::npos) {
        out.push_back(to_int(text));
    } else {
        int lo = to_int(text.substr(0, dots));
        int hi = to_int(text.substr(dots + 2));
        if (lo > hi) throw input_error("empty length range: '" + text + "'");
        for (int n = lo; n <= hi; ++n) out.push_back(n);
    }
    for (int n : out)
        if (n < 1) throw input_error("lengths must be positive");
    return out;
}

std::string read_input_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        return buf.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write '" + path + "'");
    out << content;
}

std::string basis_brace_list(const std::vector<word>& basis) {
    std::string out = "{";
    for (std::size_t i = 0; i < basis.size(); ++i) {
        if (i) out += ", ";
        out += basis[i].str();
    }
    out += "}";
    return out;
}

std::string tri_text(tri t) {
    switch (t) {
        case tri::yes: return "yes";
        case tri::no: return "no";
        default: return "unknown";
    }
}

struct cli_state {
    // shared across subcommands; each subcommand binds the subset it uses
    std::string word_text;
    std::vector<std::string> generator_texts;
    std::string graph_file;
    int rank = 2;
    int length = 0;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::uint64_t survey_samples = 500;
    std::uint64_t sample_count = 1;
    std::uint64_t measure_samples = 100000;
    int degree = 0;
    std::vector<int> compare;
    std::string lengths;
    bool exhaustive = false;
    std::string lambda_text;
    std::string mu_text;
    int big_l = 2;
    bool full_mode = false;
    bool word_only_mode = false;
    bool cyclic = false;
    bool cyclic_subwords = false;
    bool exact = false;
    std::uint64_t max_states = 10'000'000;
    int threads = 1;
    bool json = false;
    std::string dot_file;
};

void emit(const std::string& json_text, const std::string& human_text, bool json) {
    std::cout << (json ? json_text : human_text);
}

void maybe_write_dot(const cli_state& st, const std::vector<agraph>& graphs) {
    if (st.dot_file.empty()) return;
    write_output_file(st.dot_file, graphs_to_dot(graphs));
}

run_config base_config(const cli_state& st, const std::string& subcommand) {
    run_config c;
    c.subcommand = subcommand;
    c.rank = st.rank;
    if (!st.dot_file.empty()) c.dot_file = st.dot_file;
    return c;
}

int run_pirank(cli_state& st) {
    word w = word::parse(st.word_text, st.rank);
    pirank_options opts;
    opts.max_states = st.max_states;
    opts.threads = st.threads;
    pirank_report report = primitivity_rank(w, st.rank, opts);

    run_config c = base_config(st, "pirank");
    c.word = st.word_text;
    c.max_states = st.max_states;

    std::ostringstream human;
    human << "word: " << w.str() << "\n";
    human << "pi: " << (report.pi ? std::to_string(*report.pi) : std::string("inf")) << "\n";
    human << "crit: " << report.crit.size() << " subgroup(s)\n";
    for (std::size_t i = 0; i < report.crit.size(); ++i) {
        const subgroup& s = report.crit[i];
        human << "  [" << i + 1 << "] rank " << s.rank << ", index "
              << (s.index ? std::to_string(*s.index) : std::string("inf")) << ", basis "
              << basis_brace_list(s.basis) << "\n";
    }
    human << "quotients explored: " << report.quotients_explored << "\n";
    human << "elapsed ms: " << report.elapsed_ms << "\n";

    emit(pirank_to_json(report, c), human.str(), st.json);
    std::vector<agraph> graphs;
    graphs.reserve(report.crit.size());
    for (const subgroup& s : report.crit) graphs.push_back(s.graph);
    maybe_write_dot(st, graphs);
    return 0;
}

int run_primitive(cli_state& st) {
    word w = word::parse(st.word_text, st.rank);
    minimize_result m = whitehead_minimize(w, st.rank);
    bool primitive = m.min_word.length() == 1;

    run_config c = base_config(st, "primitive");
    c.word = st.word_text;

    std::ostringstream human;
    human << "primitive: " << (primitive ? "true" : "false") << "\n";
    human << "min word: " << m.min_word.rep().str() << "\n";
    human << "min length: " << m.min_word.length() << "\n";
    human << "chain: ";
    if (m.chain.empty()) human << "(empty)";
    for (std::size_t i = 0; i < m.chain.size(); ++i) {
        if (i) human << " ";
        human << m.chain[i].str();
    }
    human << "\n";

    emit(primitive_to_json(w, m, primitive, c), human.str(), st.json);
    return 0;
}

int run_stallings(cli_state& st) {
    std::vector<word> gens;
    gens.reserve(st.generator_texts.size());
    for (const std::string& text : st.generator_texts) gens.push_back(word::parse(text, st.rank));
    subgroup s = stallings_from_generators(gens, st.rank);

    run_config c = base_config(st, "stallings");
    c.generators = st.generator_texts;

    std::ostringstream human;
    human << "rank: " << s.rank << "\n";
    human << "index: " << (s.index ? std::to_string(*s.index) : std::string("inf")) << "\n";
    human << "basis: " << basis_brace_list(s.basis) << "\n";
    human << "graph: " << s.graph.num_vertices << " vertex(es), " << s.graph.vol()
          << " edge(s)\n";

    emit(subgroup_to_json(s, c), human.str(), st.json);
    maybe_write_dot(st, {s.graph});
    return 0;
}

int run_fold(cli_state& st) {
    agraph g = graph_from_json(read_input_file(st.graph_file), st.rank);
    agraph folded = canonicalize(fold(g));

    run_config c = base_config(st, "fold");
    c.graph_file = st.graph_file;

    std::ostringstream human;
    human << "vertices: " << folded.num_vertices << "\n";
    human << "edges: " << folded.vol() << "\n";
    for (const agraph::edge& e : folded.edges)
        human << "  " << e.from << " -" << letter(e.label, true).to_char() << "-> " << e.to
              << "\n";

    emit(fold_to_json(folded, c), human.str(), st.json);
    maybe_write_dot(st, {folded});
    return 0;
}

int run_check(cli_state& st) {
    if (st.full_mode && st.word_only_mode)
        throw input_error("--full and --word-only are mutually exclusive");
    param_set params;
    params.lambda = rational::parse(st.lambda_text);
    params.mu = rational::parse(st.mu_text);
    params.L = st.big_l;
    params.r = st.rank;
    word w = word::parse(st.word_text, st.rank);
    check_mode mode = st.word_only_mode ? check_mode::word_only : check_mode::full;
    readability_options opts;
    opts.max_states = st.max_states;
    opts.threads = st.threads;
    genericity_report report =
        check_condition(cyclic_word::of(w), params, mode, st.cyclic_subwords, opts);

    run_config c = base_config(st, "check");
    c.word = st.word_text;
    c.lambda = st.lambda_text;
    c.mu = st.mu_text;
    c.big_l = st.big_l;
    c.mode = mode == check_mode::full ? "full" : "word-only";
    if (st.cyclic_subwords) c.cyclic_subwords = true;
    c.max_states = st.max_states;

    std::ostringstream human;
    human << "word: " << report.input.rep().str() << "\n";
    human << "mode: " << (mode == check_mode::full ? "full" : "word-only") << "\n";
    human << "max piece length: " << report.max_piece_len << "\n";
    human << "C'(lambda): " << (report.c_prime_ok ? "yes" : "no") << "\n";
    human << "proper power: " << (report.proper_power ? "yes" : "no") << "\n";
    human << "all 2-letter subwords: " << (report.all_two_letter_subwords ? "yes" : "no") << "\n";
    human << "subwords checked: " << report.subwords.size() << "\n";
    for (const subword_check& s : report.subwords) {
        if (s.mu_readable != tri::yes && s.mu_L_readable != tri::yes &&
            s.mu_readable != tri::unknown && s.mu_L_readable != tri::unknown)
            continue;
        human << "  " << s.subword.str() << ": mu-readable " << tri_text(s.mu_readable)
              << ", (mu,L)-readable " << tri_text(s.mu_L_readable) << "\n";
    }
    human << "in P: " << tri_text(report.in_p) << "\n";
    human << "in P': " << tri_text(report.in_p_prime) << "\n";

    emit(check_to_json(report, c), human.str(), st.json);
    return 0;
}

int run_survey(cli_state& st) {
    survey_options opts;
    opts.rank = st.rank;
    opts.lengths = parse_lengths(st.lengths);
    opts.samples = st.survey_samples;
    opts.exhaustive = st.exhaustive;
    opts.seed = st.seed_given ? st.seed : auto_seed();
    opts.max_states = st.max_states;
    opts.threads = st.threads;
    if (!st.lambda_text.empty() || !st.mu_text.empty()) {
        if (st.lambda_text.empty() || st.mu_text.empty())
            throw input_error("survey needs both --lambda and --mu for the P' column");
        param_set params;
        params.lambda = rational::parse(st.lambda_text);
        params.mu = rational::parse(st.mu_text);
        params.L = st.big_l;
        params.r = st.rank;
        opts.params = params;
    }
    survey_table table = survey(opts);

    run_config c = base_config(st, "survey");
    c.lengths = st.lengths;
    if (st.exhaustive) {
        c.exhaustive = true;
    } else {
        c.samples = st.survey_samples;
        c.seed = opts.seed;
    }
    if (opts.params) {
        c.lambda = st.lambda_text;
        c.mu = st.mu_text;
        c.big_l = st.big_l;
    }
    c.max_states = st.max_states;

    std::ostringstream human;
    if (!st.exhaustive) human << "seed: " << opts.seed << "\n";
    human << "n  total  pi=r  crit={F_r}  primitive  proper-power\n";
    for (const survey_row& row : table.rows) {
        if (!row.ok) {
            human << row.n << "  error: " << row.error << "\n";
            continue;
        }
        human << row.n << "  " << row.total << "  " << row.f_pi_r << "  " << row.f_crit_whole
              << "  " << row.f_primitive << "  " << row.f_proper_power;
        if (!row.exhaustive) human << "  (ci " << row.ci_crit_whole << ")";
        human << "\n";
    }
    if (table.fit)
        human << "decay fit: complement ~ " << table.fit->c << " * " << table.fit->sigma
              << "^n (r^2 " << table.fit->r_squared << ", " << table.fit->points
              << " points)\n";

    emit(survey_to_json(table, c), human.str(), st.json);
    return 0;
}

int run_sample(cli_state& st) {
    if (st.sample_count < 1) throw input_error("need at least one sample");
    std::uint64_t seed = st.seed_given ? st.seed : auto_seed();
    std::vector<word> out;
    out.reserve(st.sample_count);
    for (std::uint64_t i = 0; i < st.sample_count; ++i)
        out.push_back(sample_word(st.rank, st.length, st.cyclic, derive_seed(seed, i)));

    run_config c = base_config(st, "sample");
    c.length = st.length;
    c.samples = st.sample_count;
    c.seed = seed;
    if (st.cyclic) c.cyclic = true;

    std::ostringstream human;
    human << "seed: " << seed << "\n";
    for (const word& w : out) human << w.str() << "\n";

    emit(words_to_json(out, c), human.str(), st.json);
    return 0;
}

int run_enumerate(cli_state& st) {
    std::vector<word> out = enumerate_words_vec(st.rank, st.length, st.cyclic);

    run_config c = base_config(st, "enumerate");
    c.length = st.length;
    if (st.cyclic) c.cyclic = true;

    std::ostringstream human;
    for (const word& w : out) human << w.str() << "\n";

    emit(words_to_json(out, c), human.str(), st.json);
    return 0;
}

int run_wordmeasure(cli_state& st) {
    word w = word::parse(st.word_text, st.rank);
    if (st.degree < 1) throw input_error("--N must be positive");
    std::uint64_t seed = st.seed_given ? st.seed : auto_seed();

    pirank_options popts;
    popts.max_states = st.max_states;
    popts.threads = st.threads;
    pirank_report rank_report = primitivity_rank(w, st.rank, popts);

    wordmeasure_output out;
    out.input = w;
    out.degree = st.degree;
    out.pi = rank_report.pi;
    out.crit_size = rank_report.crit.size();

    if (st.exact) {
        rational exact = exact_expected_fix(w, st.degree);
        out.exact = exact;
        out.mean_fix = exact.to_double();
        out.stderr_ = 0;
        out.samples = 0;
    } else {
        fix_estimate est =
            mc_expected_fix(w, st.rank, st.degree, st.measure_samples, seed, st.threads);
        out.mean_fix = est.mean;
        out.stderr_ = est.stderr_;
        out.samples = st.measure_samples;
    }
    out.prediction = fix_prediction(out.pi, out.crit_size, st.degree);
    out.normalized = normalized_statistic(out.pi, out.mean_fix, st.degree);
    if (!st.compare.empty())
        out.compare = compare_fixed_points(w, st.rank, out.pi, out.crit_size, st.compare,
                                           st.measure_samples, seed, st.threads);

    run_config c = base_config(st, "wordmeasure");
    c.word = st.word_text;
    c.degree = st.degree;
    if (!st.exact) {
        c.samples = st.measure_samples;
        c.seed = seed;
    } else {
        c.exact = true;
    }
    if (!st.compare.empty()) {
        c.compare = st.compare;
        c.samples = st.measure_samples;
        c.seed = seed;
    }
    c.max_states = st.max_states;

    std::ostringstream human;
    human << "word: " << w.str() << "\n";
    human << "pi: " << (out.pi ? std::to_string(*out.pi) : std::string("inf"))
          << ", |crit|: " << out.crit_size << "\n";
    if (!st.exact || !st.compare.empty()) human << "seed: " << seed << "\n";
    human << "N: " << st.degree << "\n";
    if (out.exact) human << "exact E[#fix]: " << out.exact->str() << "\n";
    human << "mean #fix: " << out.mean_fix << " (stderr " << out.stderr_ << ")\n";
    human << "prediction: " << out.prediction << "\n";
    if (out.normalized) human << "normalized stat: " << *out.normalized << "\n";
    if (out.compare) {
        human << "compare:\n";
        for (const compare_row& row : out.compare->rows) {
            human << "  N=" << row.degree << (row.exact ? " exact " : " mc ") << row.estimate
                  << " (stderr " << row.stderr_ << "), prediction " << row.prediction
                  << ", residual " << row.residual;
            if (row.normalized) human << ", normalized " << *row.normalized;
            human << "\n";
        }
    }

    emit(wordmeasure_to_json(out, c), human.str(), st.json);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"free group word calculus: primitivity rank, Stallings foldings, Whitehead "
                 "minimization, genericity conditions, and word measures on symmetric groups"};
    app.require_subcommand(1);
    cli_state st;

    auto add_rank = [&st](CLI::App* sub) {
        sub->add_option("-r,--rank", st.rank, "ambient free group rank")->capture_default_str();
    };
    auto add_json = [&st](CLI::App* sub) {
        sub->add_flag("--json", st.json, "emit JSON instead of text");
    };
    auto add_dot = [&st](CLI::App* sub) {
        sub->add_option("--dot", st.dot_file, "write graphs as DOT to this file");
    };
    auto add_limits = [&st](CLI::App* sub) {
        sub->add_option("--max-states", st.max_states, "quotient closure state bound")
            ->capture_default_str();
        sub->add_option("--threads", st.threads, "worker threads")->capture_default_str();
    };
    auto add_seed = [&st](CLI::App* sub) {
        sub->add_option("--seed", st.seed, "random seed (auto-generated when omitted)");
    };

    CLI::App* pirank_cmd = app.add_subcommand("pirank", "primitivity rank and critical subgroups");
    pirank_cmd->add_option("word", st.word_text, "freely reduced word, e.g. abAB")->required();
    add_rank(pirank_cmd);
    add_limits(pirank_cmd);
    add_json(pirank_cmd);
    add_dot(pirank_cmd);

    CLI::App* primitive_cmd =
        app.add_subcommand("primitive", "Whitehead minimization and primitivity");
    primitive_cmd->add_option("word", st.word_text, "freely reduced word")->required();
    add_rank(primitive_cmd);
    add_json(primitive_cmd);

    CLI::App* stallings_cmd =
        app.add_subcommand("stallings", "subgroup graph, basis, rank, and index");
    stallings_cmd->add_option("generators", st.generator_texts, "subgroup generators")
        ->required();
    add_rank(stallings_cmd);
    add_json(stallings_cmd);
    add_dot(stallings_cmd);

    CLI::App* fold_cmd = app.add_subcommand("fold", "fold a graph given as JSON ('-' = stdin)");
    fold_cmd->add_option("graph", st.graph_file, "graph JSON file")->required();
    add_rank(fold_cmd);
    add_json(fold_cmd);
    add_dot(fold_cmd);

    CLI::App* check_cmd = app.add_subcommand("check", "genericity condition of a word");
    check_cmd->add_option("word", st.word_text, "freely reduced word")->required();
    check_cmd->add_option("--lambda", st.lambda_text, "small cancellation bound, P/Q")
        ->required();
    check_cmd->add_option("--mu", st.mu_text, "readability volume bound, P/Q")->required();
    check_cmd->add_option("--L", st.big_l, "readability rank bound")->capture_default_str();
    check_cmd->add_flag("--full", st.full_mode, "check all long subwords of all rotations");
    check_cmd->add_flag("--word-only", st.word_only_mode, "check only the word itself");
    check_cmd->add_flag("--cyclic-subwords", st.cyclic_subwords,
                        "scan two-letter subwords cyclically");
    add_rank(check_cmd);
    add_limits(check_cmd);
    add_json(check_cmd);

    CLI::App* survey_cmd = app.add_subcommand("survey", "classify words by length");
    survey_cmd->add_option("--lengths", st.lengths, "length range A..B or single length")
        ->required();
    survey_cmd->add_option("--samples", st.survey_samples, "samples per length")
        ->capture_default_str();
    survey_cmd->add_flag("--exhaustive", st.exhaustive, "classify every word of each length");
    survey_cmd->add_option("--lambda", st.lambda_text, "optional P' column: lambda P/Q");
    survey_cmd->add_option("--mu", st.mu_text, "optional P' column: mu P/Q");
    survey_cmd->add_option("--L", st.big_l, "optional P' column: rank bound")
        ->capture_default_str();
    add_seed(survey_cmd);
    add_rank(survey_cmd);
    add_limits(survey_cmd);
    add_json(survey_cmd);

    CLI::App* sample_cmd = app.add_subcommand("sample", "sample reduced words of a length");
    sample_cmd->add_option("length", st.length, "word length")->required();
    sample_cmd->add_option("--samples", st.sample_count, "number of words")
        ->capture_default_str();
    sample_cmd->add_flag("--cyclic", st.cyclic, "sample cyclically reduced words");
    sample_cmd->add_option("--threads", st.threads, "worker threads (per-word seeds keep output thread-invariant)")
        ->capture_default_str();
    add_seed(sample_cmd);
    add_rank(sample_cmd);
    add_json(sample_cmd);

    CLI::App* enumerate_cmd =
        app.add_subcommand("enumerate", "list all reduced words of a length");
    enumerate_cmd->add_option("length", st.length, "word length")->required();
    enumerate_cmd->add_flag("--cyclic", st.cyclic, "only cyclically reduced words");
    add_rank(enumerate_cmd);
    add_json(enumerate_cmd);

    CLI::App* wordmeasure_cmd =
        app.add_subcommand("wordmeasure", "expected fixed points of a word measure");
    wordmeasure_cmd->add_option("word", st.word_text, "freely reduced word")->required();
    wordmeasure_cmd->add_option("--N", st.degree, "symmetric group degree")->required();
    wordmeasure_cmd->add_option("--samples", st.measure_samples, "Monte Carlo samples")
        ->capture_default_str();
    wordmeasure_cmd->add_flag("--exact", st.exact, "exact enumeration instead of sampling");
    wordmeasure_cmd->add_option("--compare", st.compare, "degrees to compare, N1,N2,...")
        ->delimiter(',');
    add_seed(wordmeasure_cmd);
    add_rank(wordmeasure_cmd);
    add_limits(wordmeasure_cmd);
    add_json(wordmeasure_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        st.seed_given = survey_cmd->count("--seed") || sample_cmd->count("--seed") ||
                        wordmeasure_cmd->count("--seed");
        if (st.rank < 2 || st.rank > max_rank) throw input_error("rank must be in 2..26");
        if (st.threads < 1) throw input_error("--threads must be positive");
        if (app.got_subcommand(pirank_cmd)) return run_pirank(st);
        if (app.got_subcommand(primitive_cmd)) return run_primitive(st);
        if (app.got_subcommand(stallings_cmd)) return run_stallings(st);
        if (app.got_subcommand(fold_cmd)) return run_fold(st);
        if (app.got_subcommand(check_cmd)) return run_check(st);
        if (app.got_subcommand(survey_cmd)) return run_survey(st);
        if (app.got_subcommand(sample_cmd)) return run_sample(st);
        if (app.got_subcommand(enumerate_cmd)) return run_enumerate(st);
        if (app.got_subcommand(wordmeasure_cmd)) return run_wordmeasure(st);
        throw input_error("no subcommand selected");
    } catch (const resource_limit_error& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
