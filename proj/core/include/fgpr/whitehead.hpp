#pragma once

#include <cstdint>
#include <functional>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "fgpr/agraph.hpp"
#include "fgpr/words.hpp"

namespace fgpr {

// Whitehead graph of a cyclic word: vertices are the 2r signed letters, one
// edge {x, y^-1} per cyclically adjacent pair x y. Loopless for cyclically
// reduced input.
class whitehead_graph {
public:
    whitehead_graph(const cyclic_word& w, int rank);

    int rank() const { return r_; }
    int multiplicity(letter x, letter y) const;
    std::uint64_t total_edges() const { return total_; }
    bool connected() const;
    bool has_cut_vertex() const;

private:
    int r_;
    std::uint64_t total_ = 0;
    std::vector<std::uint32_t> mult_; // (2r)^2, symmetric
};

// Connected with no cut vertex: a sufficient (not necessary) certificate that
// the word is not primitive.
bool whitehead_nonprimitivity_certificate(const cyclic_word& w, int rank);

// Whitehead automorphism determined by a multiplier letter a and an affected
// set S (bitmask over letter indices) with a in S, a^-1 not in S. Letters map
// to one of {x, xa, a^-1 x, a^-1 x a} according to membership of x, x^-1 in S;
// a itself is fixed.
struct whitehead_move {
    letter multiplier;
    std::uint64_t affected = 0;

    std::string str() const; // e.g. "(a; {a, b, B})"

    friend bool operator==(const whitehead_move& m, const whitehead_move& n) {
        return m.multiplier == n.multiplier && m.affected == n.affected;
    }
    friend bool operator<(const whitehead_move& m, const whitehead_move& n) {
        if (m.multiplier != n.multiplier) return m.multiplier < n.multiplier;
        return m.affected < n.affected;
    }
};

bool move_valid(const whitehead_move& m, int rank);
word apply_move(const whitehead_move& m, const word& w, int rank);

// All 2r * 2^(2r-2) moves in lexicographic (multiplier, affected-mask) order.
void for_each_move(int rank, const std::function<void(const whitehead_move&)>& fn);

struct minimize_result {
    cyclic_word min_word;
    std::vector<whitehead_move> chain;
};

// Greedy strict descent on cyclic length: at each step applies the
// lexicographically least move among those shortening the most. Terminates at
// the minimal cyclic length in the automorphism orbit (classical
// peak-reduction guarantee, relied upon, not re-proven here).
minimize_result whitehead_minimize(const word& w, int rank);

// True iff the cyclic length of w's automorphism orbit minimum is 1, i.e. w
// belongs to some free basis.
bool is_primitive(const word& w, int rank);

// Memoized primitivity keyed by the cyclic word (inversion-normalized).
// Thread-safe.
class primitivity_cache {
public:
    bool is_primitive_cyclic(const cyclic_word& w, int rank);

private:
    std::mutex mu_;
    std::unordered_map<std::string, bool> map_;
};

// Primitivity of the base loop labeled w inside pi_1 of a folded connected
// pointed graph, via the spanning-tree basis rewrite. Independent of the
// spanning tree: tree changes compose with an automorphism of pi_1.
bool loop_is_primitive(const agraph& g, const word& w, primitivity_cache* cache = nullptr);

} // namespace fgpr
