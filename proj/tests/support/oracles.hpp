#pragma once

// Deliberately naive reference implementations used to cross-check the
// library. Each one favors directness over speed and shares as little code
// with the main implementation as possible.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fgpr/agraph.hpp"
#include "fgpr/words.hpp"

namespace oracles {

// Scan-and-merge folding: rebuild the edge list after every single merge.
fgpr::agraph naive_fold(const fgpr::agraph& g);

// Every folded quotient of g, as canonical forms, by brute force over all
// Bell(num_vertices) vertex partitions (restricted growth strings), folding
// each quotient naively.
std::set<std::string> partition_quotients(const fgpr::agraph& g);

struct pirank_result {
    std::optional<int> pi;              // nullopt = infinity
    std::set<std::string> crit;         // canonical forms of the critical graphs
    std::uint64_t distinct_quotients = 0;
};

// Primitivity rank of a cyclically reduced word via partition_quotients of its
// cycle graph: scan ranks 1..ambient_rank, testing the image loop in each
// quotient for primitivity. Works on the least rotation of w, so crit holds
// canonical forms of subgroups containing that rotation.
pirank_result partition_pirank(const fgpr::word& w, int ambient_rank);

// Direct double loop over all pairs of distinct positioned rotations of w and
// w^-1, measuring common prefixes letter by letter.
int naive_max_piece(const fgpr::cyclic_word& w);

// All folded connected graphs over the given rank with at most max_edges
// edges, deduplicated up to labeled isomorphism. Vertex count never exceeds
// max_edges + 1 (connectivity).
std::vector<fgpr::agraph> small_folded_graphs(int rank, int max_edges);

// True iff some path in g (starting anywhere) reads w: forward set propagation
// over the letters.
bool naive_reads(const fgpr::agraph& g, const fgpr::word& w);

// Positioned counts over cyclically reduced words of length n in F_2, from
// closed formulas independent of any word enumeration:
//   cyclically reduced:  3^n + 1 + 2*[n even]
//   primitive:           4n * #{(p,q) : p+q = n, p,q >= 1, gcd(p,q) = 1}   (n >= 2)
//   proper powers:       sum over proper divisors d | n of nonpower(d),
//                        where nonpower(d) peels shorter roots recursively.
std::uint64_t count_cyclically_reduced_f2(int n);
std::uint64_t count_primitive_f2(int n);
std::uint64_t count_proper_power_f2(int n);

// Orbit of w under rotation and inversion, as positioned strings; the orbit
// representative is the minimum in word order (a < A < b < B ...), which makes
// every representative its own least rotation.
std::set<std::string> rotation_inversion_orbit(const fgpr::word& w);
bool is_orbit_representative(const fgpr::word& w);

// All cyclically reduced words of length n that are minimal in their
// rotation/inversion orbit, paired with their orbit sizes.
std::vector<std::pair<fgpr::word, std::uint64_t>> orbit_reps(int rank, int n);

} // namespace oracles
