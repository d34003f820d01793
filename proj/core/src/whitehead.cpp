#include "fgpr/whitehead.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>

#include "fgpr/errors.hpp"

namespace fgpr {

namespace {

void check_rank_wh(int rank) {
    if (rank < 1 || rank > max_rank) throw input_error("rank out of range");
}

void check_letter_rank(letter l, int rank) {
    if (l.generator() > rank) throw input_error("letter outside ambient rank");
}

} // namespace

whitehead_graph::whitehead_graph(const cyclic_word& w, int rank) : r_(rank) {
    check_rank_wh(rank);
    const int nv = 2 * rank;
    mult_.assign(static_cast<std::size_t>(nv) * nv, 0);
    const word& rep = w.rep();
    const std::size_t n = rep.length();
    for (std::size_t i = 0; i < n; ++i) {
        letter x = rep.at(i);
        letter y = rep.at((i + 1) % n);
        check_letter_rank(x, rank);
        int u = x.index();
        int v = y.inverse().index();
        ++mult_[static_cast<std::size_t>(u) * nv + v];
        ++mult_[static_cast<std::size_t>(v) * nv + u];
        ++total_;
    }
}

int whitehead_graph::multiplicity(letter x, letter y) const {
    check_letter_rank(x, r_);
    check_letter_rank(y, r_);
    return static_cast<int>(mult_[static_cast<std::size_t>(x.index()) * (2 * r_) + y.index()]);
}

bool whitehead_graph::connected() const {
    const int nv = 2 * r_;
    std::vector<char> seen(nv, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int v = 0; v < nv; ++v) {
            if (!seen[v] && mult_[static_cast<std::size_t>(u) * nv + v] > 0) {
                seen[v] = 1;
                ++reached;
                stack.push_back(v);
            }
        }
    }
    return reached == nv;
}

bool whitehead_graph::has_cut_vertex() const {
    const int nv = 2 * r_;
    std::vector<char> seen(nv);
    std::vector<int> stack;
    for (int cut = 0; cut < nv; ++cut) {
        std::fill(seen.begin(), seen.end(), char(0));
        int start = cut == 0 ? 1 : 0;
        stack.assign(1, start);
        seen[start] = 1;
        int reached = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v = 0; v < nv; ++v) {
                if (v == cut || seen[v]) continue;
                if (mult_[static_cast<std::size_t>(u) * nv + v] > 0) {
                    seen[v] = 1;
                    ++reached;
                    stack.push_back(v);
                }
            }
        }
        if (reached != nv - 1) return true;
    }
    return false;
}

bool whitehead_nonprimitivity_certificate(const cyclic_word& w, int rank) {
    whitehead_graph g(w, rank);
    return g.connected() && !g.has_cut_vertex();
}

std::string whitehead_move::str() const {
    std::string out = "(";
    out += multiplier.to_char();
    out += "; {";
    bool first = true;
    for (int i = 0; i < 64; ++i) {
        if (!(affected >> i & 1)) continue;
        if (!first) out += ", ";
        first = false;
        out += letter::from_index(i).to_char();
    }
    out += "})";
    return out;
}

bool move_valid(const whitehead_move& m, int rank) {
    if (rank < 1 || rank > max_rank) return false;
    if (m.multiplier.generator() > rank) return false;
    const std::uint64_t all = (std::uint64_t(1) << (2 * rank)) - 1;
    if (m.affected & ~all) return false;
    if (!(m.affected >> m.multiplier.index() & 1)) return false;
    if (m.affected >> m.multiplier.inverse().index() & 1) return false;
    return true;
}

word apply_move(const whitehead_move& m, const word& w, int rank) {
    if (!move_valid(m, rank)) throw input_error("invalid whitehead move");
    // image of each positive generator, as up to three letters
    std::vector<std::vector<letter>> image(static_cast<std::size_t>(rank) + 1);
    for (int g = 1; g <= rank; ++g) {
        std::vector<letter>& img = image[g];
        letter x(g, true);
        if (g == m.multiplier.generator()) {
            img.push_back(x);
            continue;
        }
        if (m.affected >> x.inverse().index() & 1) img.push_back(m.multiplier.inverse());
        img.push_back(x);
        if (m.affected >> x.index() & 1) img.push_back(m.multiplier);
    }
    std::vector<letter> out;
    out.reserve(3 * w.length());
    auto push = [&out](letter l) {
        if (!out.empty() && out.back() == l.inverse()) out.pop_back();
        else out.push_back(l);
    };
    for (std::size_t i = 0; i < w.length(); ++i) {
        letter l = w.at(i);
        check_letter_rank(l, rank);
        const std::vector<letter>& img = image[l.generator()];
        if (l.positive()) {
            for (letter t : img) push(t);
        } else {
            for (auto it = img.rbegin(); it != img.rend(); ++it) push(it->inverse());
        }
    }
    return word::from_reduced(std::move(out));
}

void for_each_move(int rank, const std::function<void(const whitehead_move&)>& fn) {
    check_rank_wh(rank);
    const int nv = 2 * rank;
    for (int midx = 0; midx < nv; ++midx) {
        letter mul = letter::from_index(midx);
        int inv = mul.inverse().index();
        std::vector<int> free_pos;
        free_pos.reserve(nv - 2);
        for (int i = 0; i < nv; ++i)
            if (i != midx && i != inv) free_pos.push_back(i);
        const std::uint64_t count = std::uint64_t(1) << free_pos.size();
        for (std::uint64_t mask = 0; mask < count; ++mask) {
            std::uint64_t affected = std::uint64_t(1) << midx;
            for (std::size_t k = 0; k < free_pos.size(); ++k)
                if (mask >> k & 1) affected |= std::uint64_t(1) << free_pos[k];
            fn(whitehead_move{mul, affected});
        }
    }
}

minimize_result whitehead_minimize(const word& w, int rank) {
    check_rank_wh(rank);
    if (w.empty()) throw input_error("cannot minimize the trivial word");
    minimize_result res;
    res.min_word = cyclic_word::of(w);
    for (;;) {
        const word& cur = res.min_word.rep();
        std::uint32_t occurring = 0;
        for (std::size_t i = 0; i < cur.length(); ++i)
            occurring |= std::uint32_t(1) << cur.at(i).generator();
        std::size_t best_len = cur.length();
        std::optional<whitehead_move> best;
        cyclic_word best_word;
        for_each_move(rank, [&](const whitehead_move& m) {
            // a multiplier absent from the word only inserts letters: the
            // length change equals the (S, S^c) cut size of the Whitehead
            // graph, nonnegative when the multiplier has degree zero
            if (!(occurring >> m.multiplier.generator() & 1)) return;
            cyclic_word image = cyclic_word::of(apply_move(m, cur, rank));
            if (image.length() < best_len) {
                best_len = image.length();
                best = m;
                best_word = image;
            }
        });
        if (!best) break;
        res.chain.push_back(*best);
        res.min_word = best_word;
    }
    return res;
}

bool is_primitive(const word& w, int rank) {
    return whitehead_minimize(w, rank).min_word.length() == 1;
}

bool primitivity_cache::is_primitive_cyclic(const cyclic_word& w, int rank) {
    if (rank == 1) return w.length() == 1;
    std::string key = std::to_string(rank) + ':';
    std::string fwd = w.rep().str();
    std::string bwd = cyclic_word::of(w.rep().inverse()).rep().str();
    key += std::min(fwd, bwd);
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = map_.find(key);
        if (it != map_.end()) return it->second;
    }
    bool prim = is_primitive(w.rep(), rank);
    std::lock_guard<std::mutex> lock(mu_);
    map_.emplace(std::move(key), prim);
    return prim;
}

bool loop_is_primitive(const agraph& g, const word& w, primitivity_cache* cache) {
    loop_rewriter rw(g);
    word u = rw.rewrite(w);
    if (u.empty()) return false; // trivial loop belongs to no basis
    int m = rw.rank();
    if (m == 1) return u.length() == 1;
    cyclic_word cu = cyclic_word::of(u);
    if (cache) return cache->is_primitive_cyclic(cu, m);
    return is_primitive(cu.rep(), m);
}

} // namespace fgpr
