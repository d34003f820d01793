#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fgpr/errors.hpp"
#include "fgpr/words.hpp"

namespace fgpr {

// Directed graph with edges labeled by generators 1..r; inverse letters
// traverse edges backwards. Each topological edge is stored once, in its
// positive orientation. Vertices are 0..num_vertices-1, base is the marked
// vertex.
struct agraph {
    struct edge {
        std::int32_t from;
        std::int32_t to;
        std::int32_t label; // 1..r

        friend bool operator==(const edge& a, const edge& b) {
            return a.from == b.from && a.to == b.to && a.label == b.label;
        }
    };

    int r = 2;
    std::int32_t num_vertices = 0;
    std::int32_t base = 0;
    std::vector<edge> edges;

    std::size_t vol() const { return edges.size(); }

    friend bool operator==(const agraph& a, const agraph& b) {
        return a.r == b.r && a.num_vertices == b.num_vertices && a.base == b.base &&
               a.edges == b.edges;
    }
};

struct vertex_partition {
    std::vector<std::vector<std::int32_t>> blocks;
};

// Maximal arc: an edge path whose interior vertices all have degree 2 and are
// not the base. steps are (edge index, traversed forward?) pairs.
struct arc {
    std::vector<std::pair<std::int32_t, bool>> steps;
    std::int32_t from = 0;
    std::int32_t to = 0;

    std::size_t length() const { return steps.size(); }
};

agraph rose_graph(int r);
agraph cycle_graph(const cyclic_word& w, int r);
agraph path_graph(const word& w, int r);

int degree(const agraph& g, std::int32_t v); // loops contribute 2
bool is_connected(const agraph& g);
bool is_folded(const agraph& g);
// Core with respect to the base: no dangling trees, i.e. every non-base
// vertex has degree >= 2.
bool is_core(const agraph& g);

// First Betti number edges - vertices + 1. Requires connectivity.
int cycle_rank(const agraph& g);

// Finite index iff 2r-regular, in which case the index equals the vertex
// count. Requires folded + connected + core.
std::optional<std::int64_t> subgroup_index(const agraph& g);

// Removes dangling trees, keeping the base even if isolated.
agraph core_trim(const agraph& g);

agraph fold(const agraph& g);
agraph quotient(const agraph& g, const vertex_partition& p);

// Canonical byte string for a folded pointed graph: BFS from base taking
// slots in (label, sign) order renumbers vertices deterministically, so equal
// strings <=> isomorphic as pointed labeled graphs. Works in linear time
// because path reading in a folded graph is unambiguous.
std::string canonical_form(const agraph& g);
agraph canonicalize(const agraph& g);

// Key introspection without materializing the graph.
std::uint32_t key_vertex_count(std::string_view key);
int key_alphabet_rank(std::string_view key);
int key_cycle_rank(std::string_view key);
// True iff some vertex has degree below 2r (r = the key's alphabet rank).
bool key_has_low_degree_vertex(std::string_view key);
agraph graph_from_key(std::string_view key);

// True iff some path (from any start vertex) reads the freely reduced w.
bool reads_word(const agraph& g, const word& w);
// True iff w labels a closed path at base, i.e. w is in the subgroup (g, base)
// represents.
bool accepts_loop(const agraph& g, const word& w);

// The maximal arcs; their edge sets partition the edges.
std::vector<arc> maximal_arcs(const agraph& g);

struct subgroup {
    agraph graph; // canonical pointed folded core graph
    std::vector<word> basis;
    int rank = 0;
    std::optional<std::int64_t> index; // nullopt = infinite

    bool is_whole_group() const { return index && *index == 1; }
};

// Derives basis/rank/index from a folded connected core graph.
subgroup subgroup_from_graph(const agraph& g);

// Wedge of loops at the base, folded and trimmed to the core: the Stallings
// graph of the subgroup the generators produce.
subgroup stallings_from_generators(std::span<const word> gens, int r);

// Spanning-tree basis of the fundamental group of a folded connected pointed
// graph, one basis word per non-tree edge, and rewriting of base loops into
// that basis. The BFS tree take slots in (label, sign) order, so the basis is
// deterministic.
class loop_rewriter {
public:
    explicit loop_rewriter(const agraph& g);

    int rank() const { return static_cast<int>(basis_.size()); }
    const std::vector<word>& basis() const { return basis_; }

    // Expresses a base loop labeled w in the basis letters x_1..x_rank.
    // Throws membership_error if w is not accepted at base.
    word rewrite(const word& w) const;

private:
    agraph g_;
    std::vector<std::int32_t> slot_to_;
    std::vector<std::int32_t> slot_eid_;
    std::vector<std::int32_t> nontree_index_; // per edge, -1 for tree edges
    std::vector<word> basis_;
};

std::vector<word> basis_of(const agraph& g);

// Fold engine with reusable scratch buffers. One instance per thread; all
// methods leave the result key in an internal buffer valid until the next
// call.
class folder {
public:
    folder() = default;

    // Folds g (validating connectivity) and returns the canonical key.
    std::string_view fold_graph(const agraph& g);
    // Folds g with the vertices of each block pre-identified. block_of maps
    // vertex -> block id.
    std::string_view fold_graph_blocks(const agraph& g, std::span<const std::int32_t> block_of);
    // Folds the graph behind key with vertices a and b identified.
    std::string_view fold_key_merge(std::string_view key, std::int32_t a, std::int32_t b);

    // Graph corresponding to the key returned by the last fold_* call.
    agraph last_graph() const;

private:
    void reset(int r, std::int32_t nv);
    std::int32_t find(std::int32_t v);
    void unite_tables(std::int32_t a, std::int32_t b);
    void insert_half(std::int32_t u, int slot, std::int32_t v);
    void drain();
    void canonical_key(std::int32_t base);

    int r_ = 0;
    std::int32_t nv_ = 0;
    std::int32_t classes_ = 0;
    std::vector<std::int32_t> parent_;
    std::vector<std::int32_t> table_; // classes x 2r slot targets, -1 empty
    std::vector<std::pair<std::int32_t, std::int32_t>> pending_;
    std::vector<std::int32_t> order_;
    std::vector<std::int32_t> newid_;
    std::string key_;
};

struct closure_options {
    std::uint64_t max_states = 10'000'000;
    int threads = 1;
};

// Enumerates every distinct folded quotient of g (including fold(g) itself),
// deduplicated by pointed canonical form: the closure of g under "merge one
// vertex pair, then fold". Every partition quotient appears because any
// partition is a composition of pairwise merges and folding commutes with
// further collapsing. Visit order is deterministic and independent of the
// thread count; visit returning false stops the enumeration. Returns the
// number of states visited. Throws resource_limit_error if the closure
// exceeds max_states states.
std::uint64_t for_each_quotient(const agraph& g, const closure_options& opts,
                                const std::function<bool(std::string_view key)>& visit);

} // namespace fgpr
