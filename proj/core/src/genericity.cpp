#include "fgpr/genericity.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <cmath>
#include <mutex>
#include <set>
#include <stdexcept>
#include <utility>

#include "fgpr/errors.hpp"
#include "fgpr/pirank.hpp"
#include "parallel.hpp"

namespace fgpr {

namespace {

std::string rotate_str(const std::string& s, std::size_t i) {
    return s.substr(i) + s.substr(0, i);
}

void require_nontrivial(const word& w) {
    if (w.empty()) throw input_error("operation undefined for the trivial word");
}

} // namespace

std::vector<param_violation> validate_params(const param_set& p) {
    std::vector<param_violation> out;
    auto add = [&out](std::string ineq, std::string detail) {
        out.push_back({std::move(ineq), std::move(detail)});
    };
    const rational zero(0);
    const rational one(1);
    if (!(p.lambda > zero && p.lambda < one))
        add("0 < lambda < 1", "lambda = " + p.lambda.str());
    if (!(p.mu > zero && p.mu <= one)) add("0 < mu <= 1", "mu = " + p.mu.str());
    if (p.L < 2) add("L >= 2", "L = " + std::to_string(p.L));
    if (p.r < 2) add("r >= 2", "r = " + std::to_string(p.r));
    if (!out.empty()) return out; // chain below needs the basic ranges

    const rational bound_l = p.mu / (rational(15) * rational(p.L) + rational(3) * p.mu);
    const rational bound_r = p.mu / (rational(15) * rational(p.r) + rational(3) * p.mu);
    if (!(p.lambda <= bound_l))
        add("lambda <= mu/(15L+3mu)",
            "lambda = " + p.lambda.str() + ", mu/(15L+3mu) = " + bound_l.str());
    if (!(bound_l <= bound_r))
        add("mu/(15L+3mu) <= mu/(15r+3mu)",
            "requires L >= r; L = " + std::to_string(p.L) + ", r = " + std::to_string(p.r));
    if (!(bound_r < rational(1, 6)))
        add("mu/(15r+3mu) < 1/6", "mu/(15r+3mu) = " + bound_r.str());
    const rational kite = p.mu / (rational(3) * rational(p.r));
    if (!(p.lambda < kite))
        add("lambda < mu/(3r)", "lambda = " + p.lambda.str() + ", mu/(3r) = " + kite.str());
    return out;
}

int max_piece_length(const cyclic_word& w) {
    require_nontrivial(w.rep());
    const std::size_t n = w.length();
    std::string fwd = w.rep().str();
    std::string bwd = w.rep().inverse().str();
    std::vector<std::string> rotations;
    rotations.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        rotations.push_back(rotate_str(fwd, i));
        rotations.push_back(rotate_str(bwd, i));
    }
    std::sort(rotations.begin(), rotations.end());
    // the max prefix over all pairs is attained by an adjacent sorted pair;
    // coinciding rotations overlap in all but one position
    std::size_t best = 0;
    for (std::size_t i = 0; i + 1 < rotations.size(); ++i) {
        const std::string& a = rotations[i];
        const std::string& b = rotations[i + 1];
        std::size_t k = 0;
        while (k < n && a[k] == b[k]) ++k;
        best = std::max(best, std::min(k, n - 1));
    }
    return static_cast<int>(best);
}

bool satisfies_c_prime(const cyclic_word& w, const rational& lambda) {
    int piece = max_piece_length(w);
    return rational(piece) < lambda * rational(static_cast<std::int64_t>(w.length()));
}

namespace {

std::optional<agraph> readability_search(const word& w, const rational& mu, int rank_bound,
                                         bool need_low_degree, int ambient_rank,
                                         const readability_options& opts) {
    require_nontrivial(w);
    if (ambient_rank < 2 || ambient_rank > max_rank) throw input_error("rank out of range");
    if (rank_bound < 0) throw input_error("negative rank bound");
    const auto n = static_cast<std::int64_t>(w.length());
    // any graph reading a nonempty word has at least one edge
    if (mu * rational(n) < rational(1)) return std::nullopt;

    agraph pg = path_graph(w, ambient_rank);
    std::optional<agraph> found;
    closure_options copts;
    copts.max_states = opts.max_states;
    copts.threads = opts.threads;
    for_each_quotient(pg, copts, [&](std::string_view key) {
        int rk = key_cycle_rank(key);
        if (rk > rank_bound) return true;
        std::int64_t vol = rk - 1 + static_cast<std::int64_t>(key_vertex_count(key));
        if (!(rational(vol) <= mu * rational(n))) return true;
        if (need_low_degree && !key_has_low_degree_vertex(key)) return true;
        found = graph_from_key(key);
        return false;
    });
    if (found) {
        // audit every defining clause on the returned witness
        const agraph& g = *found;
        bool ok = is_folded(g) && is_connected(g) && cycle_rank(g) <= rank_bound &&
                  rational(static_cast<std::int64_t>(g.vol())) <= mu * rational(n) &&
                  reads_word(g, w);
        if (ok && need_low_degree) {
            bool low = false;
            for (std::int32_t v = 0; v < g.num_vertices; ++v)
                low = low || degree(g, v) < 2 * ambient_rank;
            ok = low;
        }
        if (!ok) throw std::logic_error("readability witness failed its audit");
    }
    return found;
}

} // namespace

std::optional<agraph> is_mu_readable(const word& w, const rational& mu, int rank,
                                     const readability_options& opts) {
    return readability_search(w, mu, rank - 1, false, rank, opts);
}

std::optional<agraph> is_mu_L_readable(const word& w, const rational& mu, int L, int rank,
                                       const readability_options& opts) {
    return readability_search(w, mu, L, true, rank, opts);
}

genericity_report check_condition(const cyclic_word& w, const param_set& p, check_mode mode,
                                  bool cyclic_two_letter, const readability_options& opts) {
    auto violations = validate_params(p);
    if (!violations.empty()) {
        std::string msg = "invalid parameter set:";
        for (const param_violation& v : violations) msg += " [" + v.inequality + "]";
        throw input_error(msg);
    }
    require_nontrivial(w.rep());

    genericity_report rep;
    rep.input = w;
    rep.params = p;
    rep.mode = mode;
    rep.cyclic_two_letter = cyclic_two_letter;
    rep.max_piece_len = max_piece_length(w);
    const auto n = static_cast<std::int64_t>(w.length());
    rep.c_prime_ok = rational(rep.max_piece_len) < p.lambda * rational(n);
    rep.proper_power = is_proper_power(w.rep());
    rep.all_two_letter_subwords =
        contains_all_two_letter_subwords(w.rep(), p.r, cyclic_two_letter);

    if (!rep.c_prime_ok || rep.proper_power) {
        rep.in_p = tri::no;
        rep.in_p_prime = tri::no;
        return rep;
    }

    std::vector<word> subs;
    if (mode == check_mode::word_only) {
        subs.push_back(w.rep());
    } else {
        // every subword of every rotation with length >= ceil(n/2) is a prefix
        // of some rotation; rotations of a cyclically reduced word are
        // reduced, so prefixes adopt directly
        std::set<word> dedup;
        const std::span<const letter> letters = w.rep().letters();
        const std::size_t len = letters.size();
        const std::size_t shortest = (len + 1) / 2;
        for (std::size_t rot = 0; rot < len; ++rot) {
            std::vector<letter> rotated;
            rotated.reserve(len);
            for (std::size_t i = 0; i < len; ++i) rotated.push_back(letters[(rot + i) % len]);
            for (std::size_t take = shortest; take <= len; ++take)
                dedup.insert(word::from_reduced(std::vector<letter>(
                    rotated.begin(), rotated.begin() + static_cast<std::ptrdiff_t>(take))));
        }
        subs.assign(dedup.begin(), dedup.end());
    }

    bool any_unknown = false;
    bool any_readable = false;
    for (const word& sub : subs) {
        subword_check check;
        check.subword = sub;
        try {
            check.witness_mu = is_mu_readable(sub, p.mu, p.r, opts);
            check.mu_readable = check.witness_mu ? tri::yes : tri::no;
        } catch (const resource_limit_error&) {
            check.mu_readable = tri::unknown;
            any_unknown = true;
        }
        try {
            check.witness_mu_L = is_mu_L_readable(sub, p.mu, p.L, p.r, opts);
            check.mu_L_readable = check.witness_mu_L ? tri::yes : tri::no;
        } catch (const resource_limit_error&) {
            check.mu_L_readable = tri::unknown;
            any_unknown = true;
        }
        if (check.mu_readable == tri::yes || check.mu_L_readable == tri::yes)
            any_readable = true;
        rep.subwords.push_back(std::move(check));
        if (any_readable) break; // verdict settled; stop scanning
    }

    rep.in_p = any_readable ? tri::no : (any_unknown ? tri::unknown : tri::yes);
    if (rep.in_p == tri::no || !rep.all_two_letter_subwords) rep.in_p_prime = tri::no;
    else rep.in_p_prime = rep.in_p;
    return rep;
}

namespace {

struct classify_counts {
    std::uint64_t pi_r = 0;
    std::uint64_t crit_whole = 0;
    std::uint64_t primitive = 0;
    std::uint64_t proper_power = 0;
    std::uint64_t p_prime = 0;
    std::uint64_t p_prime_unknown = 0;

    void operator+=(const classify_counts& o) {
        pi_r += o.pi_r;
        crit_whole += o.crit_whole;
        primitive += o.primitive;
        proper_power += o.proper_power;
        p_prime += o.p_prime;
        p_prime_unknown += o.p_prime_unknown;
    }
};

classify_counts classify_word(const word& w, const survey_options& opts, std::uint64_t weight) {
    classify_counts c;
    pirank_options popts;
    popts.max_states = opts.max_states;
    popts.threads = 1; // parallelism lives at the word level
    pirank_report rep = primitivity_rank(w, opts.rank, popts);
    if (!rep.pi) c.primitive += weight;
    if (rep.pi && *rep.pi == opts.rank) {
        c.pi_r += weight;
        if (rep.crit.size() == 1 && rep.crit[0].is_whole_group()) c.crit_whole += weight;
    }
    if (is_proper_power(w)) c.proper_power += weight;
    if (opts.params) {
        readability_options ropts;
        ropts.max_states = opts.max_states;
        genericity_report check =
            check_condition(cyclic_word::of(w), *opts.params, check_mode::word_only, false, ropts);
        if (check.in_p_prime == tri::yes) c.p_prime += weight;
        if (check.in_p_prime == tri::unknown) c.p_prime_unknown += weight;
    }
    return c;
}

// one representative per rotation/inversion orbit, with its orbit size
std::vector<std::pair<word, std::uint64_t>> orbit_representatives(int rank, int n,
                                                                  std::uint64_t* total) {
    std::vector<std::pair<word, std::uint64_t>> reps;
    std::uint64_t all = 0;
    enumerate_words(rank, n, /*cyclic=*/true, [&](const word& w) {
        ++all;
        std::string self = w.str();
        std::string fwd = self;
        std::string bwd = w.inverse().str();
        std::set<std::string> orbit;
        for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
            orbit.insert(rotate_str(fwd, i));
            orbit.insert(rotate_str(bwd, i));
        }
        if (*orbit.begin() == self) reps.emplace_back(w, orbit.size());
    });
    if (total) *total = all;
    return reps;
}

double binomial_ci95(double f, std::uint64_t total) {
    if (total == 0) return 0;
    return 1.96 * std::sqrt(f * (1 - f) / static_cast<double>(total));
}

survey_row make_row(int n, bool exhaustive, std::uint64_t total, const classify_counts& c,
                    bool has_p_prime) {
    survey_row row;
    row.n = n;
    row.exhaustive = exhaustive;
    row.total = total;
    row.count_pi_r = c.pi_r;
    row.count_crit_whole = c.crit_whole;
    row.count_primitive = c.primitive;
    row.count_proper_power = c.proper_power;
    row.count_p_prime = c.p_prime;
    row.count_p_prime_unknown = c.p_prime_unknown;
    row.has_p_prime = has_p_prime;
    const auto d = static_cast<double>(total);
    if (total > 0) {
        row.f_pi_r = static_cast<double>(c.pi_r) / d;
        row.f_crit_whole = static_cast<double>(c.crit_whole) / d;
        row.f_primitive = static_cast<double>(c.primitive) / d;
        row.f_proper_power = static_cast<double>(c.proper_power) / d;
        if (!exhaustive) row.ci_crit_whole = binomial_ci95(row.f_crit_whole, total);
    }
    return row;
}

} // namespace

survey_table survey(const survey_options& opts) {
    if (opts.rank < 2 || opts.rank > max_rank) throw input_error("rank out of range");
    if (opts.lengths.empty()) throw input_error("survey needs at least one length");
    for (int n : opts.lengths)
        if (n < 1) throw input_error("survey lengths must be positive");
    if (!opts.exhaustive && opts.samples == 0)
        throw input_error("survey needs samples >= 1 or exhaustive mode");
    if (!opts.exhaustive && opts.samples >= (std::uint64_t(1) << 40))
        throw input_error("survey sample count out of range");
    if (opts.params) {
        auto violations = validate_params(*opts.params);
        if (!violations.empty())
            throw input_error("invalid parameter set: " + violations[0].inequality);
    }

    survey_table table;
    for (std::size_t row_index = 0; row_index < opts.lengths.size(); ++row_index) {
        const int n = opts.lengths[row_index];
        classify_counts totals;
        std::mutex merge_mu;
        std::atomic<bool> failed{false};
        std::uint64_t total = 0;

        if (opts.exhaustive) {
            std::vector<std::pair<word, std::uint64_t>> reps =
                orbit_representatives(opts.rank, n, &total);
            detail::parallel_tasks(reps.size(), opts.threads, 1,
                                   [&](std::uint64_t begin, std::uint64_t end) {
                                       classify_counts local;
                                       for (std::uint64_t i = begin; i < end; ++i) {
                                           if (failed.load(std::memory_order_relaxed)) return;
                                           try {
                                               local += classify_word(reps[i].first, opts,
                                                                      reps[i].second);
                                           } catch (const resource_limit_error&) {
                                               failed.store(true, std::memory_order_relaxed);
                                               return;
                                           }
                                       }
                                       std::lock_guard<std::mutex> lock(merge_mu);
                                       totals += local;
                                   });
        } else {
            total = opts.samples;
            detail::parallel_tasks(
                opts.samples, opts.threads, 64, [&](std::uint64_t begin, std::uint64_t end) {
                    classify_counts local;
                    for (std::uint64_t i = begin; i < end; ++i) {
                        if (failed.load(std::memory_order_relaxed)) return;
                        std::uint64_t task = (std::uint64_t(row_index) << 40) | i;
                        word w = sample_word(opts.rank, n, /*cyclic=*/true,
                                             derive_seed(opts.seed, task));
                        try {
                            local += classify_word(w, opts, 1);
                        } catch (const resource_limit_error&) {
                            failed.store(true, std::memory_order_relaxed);
                            return;
                        }
                    }
                    std::lock_guard<std::mutex> lock(merge_mu);
                    totals += local;
                });
        }

        if (failed.load()) {
            survey_row row;
            row.n = n;
            row.exhaustive = opts.exhaustive;
            row.ok = false;
            row.error = "quotient closure exceeded " + std::to_string(opts.max_states) +
                        " states; length infeasible";
            table.rows.push_back(std::move(row));
            continue;
        }
        table.rows.push_back(make_row(n, opts.exhaustive, total, totals, opts.params.has_value()));
    }

    // least-squares fit of log complement against n
    std::vector<std::pair<double, double>> pts;
    for (const survey_row& row : table.rows) {
        if (!row.ok || row.total == 0) continue;
        double comp = 1.0 - row.f_crit_whole;
        if (comp <= 0) continue;
        pts.emplace_back(static_cast<double>(row.n), std::log(comp));
    }
    if (pts.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [x, y] : pts) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const auto m = static_cast<double>(pts.size());
        double denom = m * sxx - sx * sx;
        if (denom != 0) {
            double slope = (m * sxy - sx * sy) / denom;
            double intercept = (sy - slope * sx) / m;
            double mean_y = sy / m;
            double ss_res = 0, ss_tot = 0;
            for (auto [x, y] : pts) {
                double fit_y = intercept + slope * x;
                ss_res += (y - fit_y) * (y - fit_y);
                ss_tot += (y - mean_y) * (y - mean_y);
            }
            decay_fit fit;
            fit.c = std::exp(intercept);
            fit.sigma = std::exp(slope);
            fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
            fit.points = static_cast<int>(pts.size());
            table.fit = fit;
        }
    }
    return table;
}

} // namespace fgpr
