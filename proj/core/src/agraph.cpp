#include "fgpr/agraph.hpp"

#include <algorithm>
#include <cstring>
#include <thread>

namespace fgpr {

namespace {

void validate_graph(const agraph& g) {
    if (g.r < 2 || g.r > max_rank)
        throw input_error("graph alphabet rank out of range: " + std::to_string(g.r));
    if (g.num_vertices < 1) throw input_error("graph must have at least one vertex");
    if (g.base < 0 || g.base >= g.num_vertices) throw input_error("graph base vertex out of range");
    for (const auto& e : g.edges) {
        if (e.from < 0 || e.from >= g.num_vertices || e.to < 0 || e.to >= g.num_vertices)
            throw input_error("graph edge endpoint out of range");
        if (e.label < 1 || e.label > g.r) throw input_error("graph edge label out of range");
    }
}

int pos_slot(int label) { return (label - 1) * 2; }
int neg_slot(int label) { return (label - 1) * 2 + 1; }

// Oriented incidence (edge id, leaves v forward?) per vertex; loops yield two
// entries. Entry order follows edge storage order, forward before backward.
std::vector<std::vector<std::pair<std::int32_t, bool>>> incidence_lists(const agraph& g) {
    std::vector<std::vector<std::pair<std::int32_t, bool>>> inc(
        static_cast<std::size_t>(g.num_vertices));
    for (std::int32_t e = 0; e < static_cast<std::int32_t>(g.edges.size()); ++e) {
        inc[static_cast<std::size_t>(g.edges[e].from)].emplace_back(e, true);
        inc[static_cast<std::size_t>(g.edges[e].to)].emplace_back(e, false);
    }
    return inc;
}

// Slot table of a folded graph: for each (vertex, signed label) the target
// vertex and the edge carrying it, or -1. folded() reports collisions instead
// of throwing so callers can phrase their own errors.
struct slot_table {
    int r;
    std::int32_t nv;
    std::vector<std::int32_t> to;
    std::vector<std::int32_t> eid;
    bool folded = true;

    explicit slot_table(const agraph& g)
        : r(g.r), nv(g.num_vertices),
          to(static_cast<std::size_t>(nv) * (2 * r), -1),
          eid(static_cast<std::size_t>(nv) * (2 * r), -1) {
        for (std::int32_t e = 0; e < static_cast<std::int32_t>(g.edges.size()); ++e) {
            const auto& ed = g.edges[e];
            set(ed.from, pos_slot(ed.label), ed.to, e);
            set(ed.to, neg_slot(ed.label), ed.from, e);
        }
    }

    void set(std::int32_t v, int s, std::int32_t t, std::int32_t e) {
        auto i = static_cast<std::size_t>(v) * (2 * r) + static_cast<std::size_t>(s);
        if (to[i] != -1) { folded = false; return; }
        to[i] = t;
        eid[i] = e;
    }

    std::int32_t target(std::int32_t v, int s) const {
        return to[static_cast<std::size_t>(v) * (2 * r) + static_cast<std::size_t>(s)];
    }
    std::int32_t edge(std::int32_t v, int s) const {
        return eid[static_cast<std::size_t>(v) * (2 * r) + static_cast<std::size_t>(s)];
    }
};

slot_table folded_slots_or_throw(const agraph& g, const char* op) {
    validate_graph(g);
    slot_table t(g);
    if (!t.folded) throw input_error(std::string(op) + " requires a folded graph");
    return t;
}

void write_le(std::string& out, std::uint32_t v, int width) {
    for (int i = 0; i < width; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t read_le(const char* p, int width) {
    std::uint32_t v = 0;
    for (int i = 0; i < width; ++i)
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
}

struct key_header {
    int r;
    int width;
    std::uint32_t nv;
};

// Header peek that tolerates trailing bytes; returns the full key length.
std::size_t peek_key(const char* p, std::size_t avail, key_header& h) {
    if (avail < 6) throw input_error("malformed canonical key");
    h.r = static_cast<unsigned char>(p[0]);
    h.width = static_cast<unsigned char>(p[1]);
    h.nv = read_le(p + 2, 4);
    if (h.r < 2 || h.r > max_rank || (h.width != 1 && h.width != 2 && h.width != 4))
        throw input_error("malformed canonical key");
    std::size_t len = 6 + static_cast<std::size_t>(h.nv) * (2 * h.r) * static_cast<std::size_t>(h.width);
    if (avail < len) throw input_error("malformed canonical key");
    return len;
}

key_header parse_header(std::string_view key) {
    key_header h;
    if (peek_key(key.data(), key.size(), h) != key.size())
        throw input_error("malformed canonical key");
    return h;
}

} // namespace

agraph rose_graph(int r) {
    if (r < 2 || r > max_rank) throw input_error("rose rank out of range");
    agraph g;
    g.r = r;
    g.num_vertices = 1;
    g.base = 0;
    for (int k = 1; k <= r; ++k) g.edges.push_back({0, 0, k});
    return g;
}

namespace {

agraph graph_reading(std::span<const letter> letters, int r, bool closed) {
    agraph g;
    g.r = r;
    auto n = static_cast<std::int32_t>(letters.size());
    g.num_vertices = closed ? n : n + 1;
    g.base = 0;
    for (std::int32_t i = 0; i < n; ++i) {
        letter l = letters[static_cast<std::size_t>(i)];
        if (l.generator() > r)
            throw input_error("word letter outside alphabet of rank " + std::to_string(r));
        std::int32_t a = i;
        std::int32_t b = closed ? (i + 1) % n : i + 1;
        if (l.positive())
            g.edges.push_back({a, b, l.generator()});
        else
            g.edges.push_back({b, a, l.generator()});
    }
    return g;
}

} // namespace

agraph cycle_graph(const cyclic_word& w, int r) {
    if (w.empty()) throw input_error("cycle_graph of the trivial word");
    return graph_reading(w.rep().letters(), r, true);
}

agraph path_graph(const word& w, int r) {
    if (w.empty()) throw input_error("path_graph of the trivial word");
    return graph_reading(w.letters(), r, false);
}

int degree(const agraph& g, std::int32_t v) {
    int d = 0;
    for (const auto& e : g.edges) {
        if (e.from == v) ++d;
        if (e.to == v) ++d;
    }
    return d;
}

bool is_connected(const agraph& g) {
    validate_graph(g);
    auto inc = incidence_lists(g);
    std::vector<char> seen(static_cast<std::size_t>(g.num_vertices), 0);
    std::vector<std::int32_t> stack{g.base};
    seen[static_cast<std::size_t>(g.base)] = 1;
    std::int32_t visited = 1;
    while (!stack.empty()) {
        std::int32_t v = stack.back();
        stack.pop_back();
        for (auto [e, fwd] : inc[static_cast<std::size_t>(v)]) {
            std::int32_t u = fwd ? g.edges[static_cast<std::size_t>(e)].to
                                 : g.edges[static_cast<std::size_t>(e)].from;
            if (!seen[static_cast<std::size_t>(u)]) {
                seen[static_cast<std::size_t>(u)] = 1;
                ++visited;
                stack.push_back(u);
            }
        }
    }
    return visited == g.num_vertices;
}

bool is_folded(const agraph& g) {
    validate_graph(g);
    return slot_table(g).folded;
}

bool is_core(const agraph& g) {
    validate_graph(g);
    std::vector<int> deg(static_cast<std::size_t>(g.num_vertices), 0);
    for (const auto& e : g.edges) {
        ++deg[static_cast<std::size_t>(e.from)];
        ++deg[static_cast<std::size_t>(e.to)];
    }
    for (std::int32_t v = 0; v < g.num_vertices; ++v)
        if (v != g.base && deg[static_cast<std::size_t>(v)] < 2) return false;
    return true;
}

int cycle_rank(const agraph& g) {
    if (!is_connected(g)) throw input_error("rank of a disconnected graph");
    return static_cast<int>(g.edges.size()) - g.num_vertices + 1;
}

std::optional<std::int64_t> subgroup_index(const agraph& g) {
    auto t = folded_slots_or_throw(g, "index");
    if (!is_connected(g)) throw input_error("index of a disconnected graph");
    for (std::int32_t v = 0; v < g.num_vertices; ++v)
        for (int s = 0; s < 2 * g.r; ++s)
            if (t.target(v, s) == -1) return std::nullopt;
    return static_cast<std::int64_t>(g.num_vertices);
}

agraph core_trim(const agraph& g) {
    validate_graph(g);
    std::vector<int> deg(static_cast<std::size_t>(g.num_vertices), 0);
    for (const auto& e : g.edges) {
        ++deg[static_cast<std::size_t>(e.from)];
        ++deg[static_cast<std::size_t>(e.to)];
    }
    std::vector<char> dead(static_cast<std::size_t>(g.num_vertices), 0);
    std::vector<char> edge_dead(g.edges.size(), 0);
    auto inc = incidence_lists(g);
    std::vector<std::int32_t> queue;
    for (std::int32_t v = 0; v < g.num_vertices; ++v)
        if (v != g.base && deg[static_cast<std::size_t>(v)] <= 1) queue.push_back(v);
    while (!queue.empty()) {
        std::int32_t v = queue.back();
        queue.pop_back();
        if (dead[static_cast<std::size_t>(v)]) continue;
        dead[static_cast<std::size_t>(v)] = 1;
        for (auto [e, fwd] : inc[static_cast<std::size_t>(v)]) {
            if (edge_dead[static_cast<std::size_t>(e)]) continue;
            edge_dead[static_cast<std::size_t>(e)] = 1;
            std::int32_t u = fwd ? g.edges[static_cast<std::size_t>(e)].to
                                 : g.edges[static_cast<std::size_t>(e)].from;
            if (--deg[static_cast<std::size_t>(u)] <= 1 && u != g.base &&
                !dead[static_cast<std::size_t>(u)])
                queue.push_back(u);
        }
    }
    agraph out;
    out.r = g.r;
    std::vector<std::int32_t> newid(static_cast<std::size_t>(g.num_vertices), -1);
    std::int32_t next = 0;
    for (std::int32_t v = 0; v < g.num_vertices; ++v)
        if (!dead[static_cast<std::size_t>(v)]) newid[static_cast<std::size_t>(v)] = next++;
    out.num_vertices = next;
    out.base = newid[static_cast<std::size_t>(g.base)];
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        if (edge_dead[e]) continue;
        out.edges.push_back({newid[static_cast<std::size_t>(g.edges[e].from)],
                             newid[static_cast<std::size_t>(g.edges[e].to)], g.edges[e].label});
    }
    return out;
}

// ---------------------------------------------------------------------------
// folder

void folder::reset(int r, std::int32_t nv) {
    r_ = r;
    nv_ = nv;
    classes_ = nv;
    parent_.resize(static_cast<std::size_t>(nv));
    for (std::int32_t v = 0; v < nv; ++v) parent_[static_cast<std::size_t>(v)] = v;
    table_.assign(static_cast<std::size_t>(nv) * (2 * r), -1);
    pending_.clear();
}

std::int32_t folder::find(std::int32_t v) {
    while (parent_[static_cast<std::size_t>(v)] != v) {
        parent_[static_cast<std::size_t>(v)] =
            parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(v)])];
        v = parent_[static_cast<std::size_t>(v)];
    }
    return v;
}

void folder::insert_half(std::int32_t u, int slot, std::int32_t v) {
    u = find(u);
    v = find(v);
    auto& cell = table_[static_cast<std::size_t>(u) * (2 * r_) + static_cast<std::size_t>(slot)];
    if (cell == -1) {
        cell = v;
    } else {
        std::int32_t old = find(cell);
        cell = old;
        if (old != v) pending_.emplace_back(old, v);
    }
}

// Merges the table row of the larger representative into the smaller one;
// slot collisions become further pending merges.
void folder::unite_tables(std::int32_t a, std::int32_t b) {
    if (a > b) std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
    --classes_;
    for (int s = 0; s < 2 * r_; ++s) {
        std::int32_t x = table_[static_cast<std::size_t>(b) * (2 * r_) + static_cast<std::size_t>(s)];
        if (x == -1) continue;
        x = find(x);
        auto& cell = table_[static_cast<std::size_t>(a) * (2 * r_) + static_cast<std::size_t>(s)];
        if (cell == -1) {
            cell = x;
        } else {
            std::int32_t y = find(cell);
            cell = y;
            if (y != x) pending_.emplace_back(x, y);
        }
    }
}

void folder::drain() {
    while (!pending_.empty()) {
        auto [a, b] = pending_.back();
        pending_.pop_back();
        a = find(a);
        b = find(b);
        if (a != b) unite_tables(a, b);
    }
}

void folder::canonical_key(std::int32_t base) {
    std::int32_t b = find(base);
    newid_.assign(static_cast<std::size_t>(nv_), -1);
    order_.clear();
    order_.push_back(b);
    newid_[static_cast<std::size_t>(b)] = 0;
    for (std::size_t head = 0; head < order_.size(); ++head) {
        std::int32_t u = order_[head];
        for (int s = 0; s < 2 * r_; ++s) {
            std::int32_t t = table_[static_cast<std::size_t>(u) * (2 * r_) + static_cast<std::size_t>(s)];
            if (t == -1) continue;
            t = find(t);
            table_[static_cast<std::size_t>(u) * (2 * r_) + static_cast<std::size_t>(s)] = t;
            if (newid_[static_cast<std::size_t>(t)] == -1) {
                newid_[static_cast<std::size_t>(t)] = static_cast<std::int32_t>(order_.size());
                order_.push_back(t);
            }
        }
    }
    if (static_cast<std::int32_t>(order_.size()) != classes_)
        throw input_error("graph is not connected");
    auto nv = static_cast<std::uint32_t>(order_.size());
    int width = nv <= 255 ? 1 : (nv <= 65535 ? 2 : 4);
    key_.clear();
    key_.reserve(6 + static_cast<std::size_t>(nv) * (2 * r_) * static_cast<std::size_t>(width));
    key_.push_back(static_cast<char>(r_));
    key_.push_back(static_cast<char>(width));
    write_le(key_, nv, 4);
    for (std::int32_t u : order_) {
        for (int s = 0; s < 2 * r_; ++s) {
            std::int32_t t = table_[static_cast<std::size_t>(u) * (2 * r_) + static_cast<std::size_t>(s)];
            write_le(key_, t == -1 ? 0 : static_cast<std::uint32_t>(newid_[static_cast<std::size_t>(t)]) + 1,
                     width);
        }
    }
}

std::string_view folder::fold_graph(const agraph& g) {
    validate_graph(g);
    reset(g.r, g.num_vertices);
    for (const auto& e : g.edges) {
        insert_half(e.from, pos_slot(e.label), e.to);
        insert_half(e.to, neg_slot(e.label), e.from);
    }
    drain();
    canonical_key(g.base);
    return key_;
}

std::string_view folder::fold_graph_blocks(const agraph& g, std::span<const std::int32_t> block_of) {
    validate_graph(g);
    if (block_of.size() != static_cast<std::size_t>(g.num_vertices))
        throw input_error("partition does not cover the vertex set");
    reset(g.r, g.num_vertices);
    std::vector<std::int32_t> leader(block_of.size(), -1);
    for (std::int32_t v = 0; v < g.num_vertices; ++v) {
        std::int32_t blk = block_of[static_cast<std::size_t>(v)];
        if (blk < 0 || blk >= static_cast<std::int32_t>(block_of.size()))
            throw input_error("partition block id out of range");
        if (leader[static_cast<std::size_t>(blk)] == -1) {
            leader[static_cast<std::size_t>(blk)] = v;
        } else {
            parent_[static_cast<std::size_t>(v)] = leader[static_cast<std::size_t>(blk)];
            --classes_;
        }
    }
    for (const auto& e : g.edges) {
        insert_half(e.from, pos_slot(e.label), e.to);
        insert_half(e.to, neg_slot(e.label), e.from);
    }
    drain();
    canonical_key(g.base);
    return key_;
}

std::string_view folder::fold_key_merge(std::string_view key, std::int32_t a, std::int32_t b) {
    key_header h = parse_header(key);
    reset(h.r, static_cast<std::int32_t>(h.nv));
    if (a < 0 || b < 0 || a >= nv_ || b >= nv_) throw input_error("merge vertex out of range");
    if (a != b) {
        if (a > b) std::swap(a, b);
        parent_[static_cast<std::size_t>(b)] = a;
        --classes_;
    }
    const char* p = key.data() + 6;
    for (std::int32_t v = 0; v < nv_; ++v) {
        for (int gidx = 0; gidx < h.r; ++gidx) {
            std::uint32_t t = read_le(p + (static_cast<std::size_t>(v) * (2 * h.r) + 2 * gidx) * h.width,
                                      h.width);
            if (t == 0) continue;
            insert_half(v, 2 * gidx, static_cast<std::int32_t>(t - 1));
            insert_half(static_cast<std::int32_t>(t - 1), 2 * gidx + 1, v);
        }
    }
    drain();
    canonical_key(0);
    return key_;
}

agraph folder::last_graph() const { return graph_from_key(key_); }

// ---------------------------------------------------------------------------

agraph fold(const agraph& g) {
    folder f;
    f.fold_graph(g);
    return f.last_graph();
}

agraph quotient(const agraph& g, const vertex_partition& p) {
    validate_graph(g);
    std::vector<std::int32_t> block_of(static_cast<std::size_t>(g.num_vertices), -1);
    for (std::size_t b = 0; b < p.blocks.size(); ++b) {
        if (p.blocks[b].empty()) throw input_error("partition has an empty block");
        for (std::int32_t v : p.blocks[b]) {
            if (v < 0 || v >= g.num_vertices) throw input_error("partition names a missing vertex");
            if (block_of[static_cast<std::size_t>(v)] != -1)
                throw input_error("partition blocks overlap");
            block_of[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(b);
        }
    }
    for (std::int32_t v = 0; v < g.num_vertices; ++v)
        if (block_of[static_cast<std::size_t>(v)] == -1)
            throw input_error("partition does not cover the vertex set");
    folder f;
    f.fold_graph_blocks(g, block_of);
    return f.last_graph();
}

std::string canonical_form(const agraph& g) {
    if (!is_folded(g)) throw input_error("canonical_form requires a folded graph");
    folder f;
    return std::string(f.fold_graph(g));
}

agraph canonicalize(const agraph& g) { return graph_from_key(canonical_form(g)); }

std::uint32_t key_vertex_count(std::string_view key) { return parse_header(key).nv; }

int key_alphabet_rank(std::string_view key) { return parse_header(key).r; }

int key_cycle_rank(std::string_view key) {
    key_header h = parse_header(key);
    const char* p = key.data() + 6;
    std::int64_t edges = 0;
    for (std::uint32_t v = 0; v < h.nv; ++v)
        for (int gidx = 0; gidx < h.r; ++gidx)
            if (read_le(p + (static_cast<std::size_t>(v) * (2 * h.r) + 2 * gidx) * h.width, h.width))
                ++edges;
    return static_cast<int>(edges - h.nv + 1);
}

bool key_has_low_degree_vertex(std::string_view key) {
    key_header h = parse_header(key);
    const char* p = key.data() + 6;
    // folded: each slot holds at most one target, so degree < 2r at some
    // vertex is exactly an empty slot somewhere
    const std::size_t slots = static_cast<std::size_t>(h.nv) * (2 * h.r);
    for (std::size_t s = 0; s < slots; ++s)
        if (read_le(p + s * h.width, h.width) == 0) return true;
    return false;
}

agraph graph_from_key(std::string_view key) {
    key_header h = parse_header(key);
    agraph g;
    g.r = h.r;
    g.num_vertices = static_cast<std::int32_t>(h.nv);
    g.base = 0;
    const char* p = key.data() + 6;
    for (std::uint32_t v = 0; v < h.nv; ++v) {
        for (int gidx = 0; gidx < h.r; ++gidx) {
            std::uint32_t t = read_le(p + (static_cast<std::size_t>(v) * (2 * h.r) + 2 * gidx) * h.width,
                                      h.width);
            if (t != 0)
                g.edges.push_back({static_cast<std::int32_t>(v), static_cast<std::int32_t>(t - 1),
                                   gidx + 1});
        }
    }
    return g;
}

bool reads_word(const agraph& g, const word& w) {
    auto t = folded_slots_or_throw(g, "reads_word");
    if (w.empty()) return true;
    std::vector<char> cur(static_cast<std::size_t>(g.num_vertices), 1);
    std::vector<char> next(static_cast<std::size_t>(g.num_vertices), 0);
    for (letter l : w.letters()) {
        if (l.generator() > g.r) return false;
        int s = l.index();
        bool any = false;
        std::fill(next.begin(), next.end(), 0);
        for (std::int32_t v = 0; v < g.num_vertices; ++v) {
            if (!cur[static_cast<std::size_t>(v)]) continue;
            std::int32_t u = t.target(v, s);
            if (u != -1) {
                next[static_cast<std::size_t>(u)] = 1;
                any = true;
            }
        }
        if (!any) return false;
        std::swap(cur, next);
    }
    return true;
}

bool accepts_loop(const agraph& g, const word& w) {
    auto t = folded_slots_or_throw(g, "accepts_loop");
    std::int32_t v = g.base;
    for (letter l : w.letters()) {
        if (l.generator() > g.r) return false;
        v = t.target(v, l.index());
        if (v == -1) return false;
    }
    return v == g.base;
}

std::vector<arc> maximal_arcs(const agraph& g) {
    validate_graph(g);
    if (!is_connected(g)) throw input_error("maximal_arcs of a disconnected graph");
    auto inc = incidence_lists(g);
    std::vector<char> consumed(g.edges.size(), 0);
    auto is_stop = [&](std::int32_t v) {
        return v == g.base || inc[static_cast<std::size_t>(v)].size() != 2;
    };
    std::vector<arc> arcs;
    for (std::int32_t v = 0; v < g.num_vertices; ++v) {
        if (!is_stop(v)) continue;
        for (auto [e0, d0] : inc[static_cast<std::size_t>(v)]) {
            if (consumed[static_cast<std::size_t>(e0)]) continue;
            arc a;
            a.from = v;
            consumed[static_cast<std::size_t>(e0)] = 1;
            a.steps.emplace_back(e0, d0);
            std::int32_t cur = d0 ? g.edges[static_cast<std::size_t>(e0)].to
                                  : g.edges[static_cast<std::size_t>(e0)].from;
            std::int32_t prev_edge = e0;
            while (!is_stop(cur)) {
                // interior vertex: exactly two incidences, leave by the other edge
                auto& pair2 = inc[static_cast<std::size_t>(cur)];
                auto [e1, d1] = pair2[0].first == prev_edge ? pair2[1] : pair2[0];
                consumed[static_cast<std::size_t>(e1)] = 1;
                a.steps.emplace_back(e1, d1);
                cur = d1 ? g.edges[static_cast<std::size_t>(e1)].to
                         : g.edges[static_cast<std::size_t>(e1)].from;
                prev_edge = e1;
            }
            a.to = cur;
            arcs.push_back(std::move(a));
        }
    }
    return arcs;
}

// ---------------------------------------------------------------------------
// loop_rewriter

loop_rewriter::loop_rewriter(const agraph& g) : g_(g) {
    auto t = folded_slots_or_throw(g_, "basis_of");
    slot_to_ = t.to;
    slot_eid_ = t.eid;
    const int m = 2 * g_.r;
    std::vector<std::int32_t> parent_v(static_cast<std::size_t>(g_.num_vertices), -1);
    std::vector<letter> parent_l(static_cast<std::size_t>(g_.num_vertices));
    std::vector<char> visited(static_cast<std::size_t>(g_.num_vertices), 0);
    std::vector<char> edge_tree(g_.edges.size(), 0);
    std::vector<std::int32_t> queue{g_.base};
    visited[static_cast<std::size_t>(g_.base)] = 1;
    std::int32_t seen = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        std::int32_t u = queue[head];
        for (int s = 0; s < m; ++s) {
            std::int32_t v = slot_to_[static_cast<std::size_t>(u) * m + static_cast<std::size_t>(s)];
            if (v == -1 || visited[static_cast<std::size_t>(v)]) continue;
            visited[static_cast<std::size_t>(v)] = 1;
            ++seen;
            edge_tree[static_cast<std::size_t>(
                slot_eid_[static_cast<std::size_t>(u) * m + static_cast<std::size_t>(s)])] = 1;
            parent_v[static_cast<std::size_t>(v)] = u;
            parent_l[static_cast<std::size_t>(v)] = letter::from_index(s);
            queue.push_back(v);
        }
    }
    if (seen != g_.num_vertices) throw input_error("basis_of requires a connected graph");

    // Path label from base to v along the tree.
    auto base_path = [&](std::int32_t v) {
        std::vector<letter> back;
        while (v != g_.base) {
            back.push_back(parent_l[static_cast<std::size_t>(v)]);
            v = parent_v[static_cast<std::size_t>(v)];
        }
        std::reverse(back.begin(), back.end());
        return word::from_reduced(std::move(back));
    };

    nontree_index_.assign(g_.edges.size(), -1);
    std::int32_t next = 0;
    for (std::size_t e = 0; e < g_.edges.size(); ++e) {
        if (edge_tree[e]) continue;
        nontree_index_[e] = next++;
        const auto& ed = g_.edges[e];
        std::vector<letter> mid{letter(ed.label, true)};
        basis_.push_back(base_path(ed.from) * word::from_reduced(std::move(mid)) *
                         base_path(ed.to).inverse());
    }
}

word loop_rewriter::rewrite(const word& w) const {
    const int m = 2 * g_.r;
    std::int32_t v = g_.base;
    std::vector<letter> out;
    for (letter l : w.letters()) {
        if (l.generator() > g_.r) throw membership_error("letter outside graph alphabet");
        auto i = static_cast<std::size_t>(v) * m + static_cast<std::size_t>(l.index());
        std::int32_t u = slot_to_[i];
        if (u == -1) throw membership_error("word not accepted at base: " + w.str());
        std::int32_t e = slot_eid_[i];
        std::int32_t x = nontree_index_[static_cast<std::size_t>(e)];
        if (x != -1) {
            if (x >= max_rank)
                throw input_error("rewrite unsupported beyond rank 26 fundamental groups");
            // label orientations are positive, so the letter's sign is the
            // traversal direction
            letter bl(static_cast<int>(x) + 1, l.positive());
            if (!out.empty() && out.back() == bl.inverse())
                out.pop_back();
            else
                out.push_back(bl);
        }
        v = u;
    }
    if (v != g_.base) throw membership_error("word not accepted at base: " + w.str());
    return word::from_reduced(std::move(out));
}

std::vector<word> basis_of(const agraph& g) { return loop_rewriter(g).basis(); }

// ---------------------------------------------------------------------------
// subgroups

subgroup subgroup_from_graph(const agraph& g) {
    if (!is_folded(g)) throw input_error("subgroup graphs must be folded");
    if (!is_connected(g)) throw input_error("subgroup graphs must be connected");
    if (!is_core(g)) throw input_error("subgroup graphs must be core");
    subgroup s;
    s.graph = canonicalize(g);
    loop_rewriter rw(s.graph);
    s.basis = rw.basis();
    s.rank = rw.rank();
    s.index = subgroup_index(s.graph);
    return s;
}

subgroup stallings_from_generators(std::span<const word> gens, int r) {
    if (gens.empty()) throw input_error("stallings_from_generators needs at least one generator");
    agraph wedge;
    wedge.r = r;
    wedge.num_vertices = 1;
    wedge.base = 0;
    for (const word& g : gens) {
        std::int32_t prev = 0;
        auto n = static_cast<std::int32_t>(g.length());
        for (std::int32_t i = 0; i < n; ++i) {
            letter l = g.at(static_cast<std::size_t>(i));
            if (l.generator() > r)
                throw input_error("generator letter outside alphabet of rank " + std::to_string(r));
            std::int32_t next = i + 1 == n ? 0 : wedge.num_vertices++;
            if (l.positive())
                wedge.edges.push_back({prev, next, l.generator()});
            else
                wedge.edges.push_back({next, prev, l.generator()});
            prev = next;
        }
    }
    if (r < 2 || r > max_rank) throw input_error("rank out of range");
    return subgroup_from_graph(core_trim(fold(wedge)));
}

// ---------------------------------------------------------------------------
// quotient closure

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

// Insert-if-absent set of canonical keys, stored back to back in an arena.
// Key length is recoverable from the key header, so only offsets are indexed.
class key_set {
public:
    key_set() : slots_(1u << 12, empty_slot), mask_((1u << 12) - 1) {}

    std::size_t size() const { return count_; }

    std::string_view at(std::uint64_t offset) const {
        key_header h;
        std::size_t len = peek_key(arena_.data() + offset, arena_.size() - offset, h);
        return {arena_.data() + offset, len};
    }

    bool contains(std::string_view key) const {
        std::uint64_t h = fnv1a(key);
        std::size_t i = h & mask_;
        while (slots_[i].off_plus1 != 0) {
            if (slots_[i].hash == h && equals(slots_[i].off_plus1 - 1, key)) return true;
            i = (i + 1) & mask_;
        }
        return false;
    }

    // returns (arena offset, inserted)
    std::pair<std::uint64_t, bool> insert(std::string_view key) {
        if ((count_ + 1) * 2 > slots_.size()) grow();
        std::uint64_t h = fnv1a(key);
        std::size_t i = h & mask_;
        while (slots_[i].off_plus1 != 0) {
            if (slots_[i].hash == h && equals(slots_[i].off_plus1 - 1, key))
                return {slots_[i].off_plus1 - 1, false};
            i = (i + 1) & mask_;
        }
        std::uint64_t off = arena_.size();
        arena_.insert(arena_.end(), key.begin(), key.end());
        slots_[i] = {h, off + 1};
        ++count_;
        return {off, true};
    }

private:
    struct slot {
        std::uint64_t hash;
        std::uint64_t off_plus1;
    };
    static constexpr slot empty_slot{0, 0};

    bool equals(std::uint64_t off, std::string_view key) const {
        if (off + key.size() > arena_.size()) return false;
        return std::memcmp(arena_.data() + off, key.data(), key.size()) == 0;
    }

    void grow() {
        std::vector<slot> bigger(slots_.size() * 2, empty_slot);
        std::size_t m = bigger.size() - 1;
        for (const slot& s : slots_) {
            if (s.off_plus1 == 0) continue;
            std::size_t i = s.hash & m;
            while (bigger[i].off_plus1 != 0) i = (i + 1) & m;
            bigger[i] = s;
        }
        slots_ = std::move(bigger);
        mask_ = m;
    }

    std::vector<slot> slots_;
    std::vector<char> arena_;
    std::size_t mask_;
    std::size_t count_ = 0;
};

} // namespace

std::uint64_t for_each_quotient(const agraph& g, const closure_options& opts,
                                const std::function<bool(std::string_view key)>& visit) {
    if (opts.threads < 1) throw input_error("thread count must be positive");
    if (opts.max_states < 1) throw input_error("state bound must be positive");
    folder f;
    std::string start(f.fold_graph(g));

    key_set seen;
    // (offset, length) per state in discovery order
    std::vector<std::pair<std::uint64_t, std::uint32_t>> states;
    states.reserve(1024);

    auto admit = [&](std::string_view key) -> bool {
        auto [off, fresh] = seen.insert(key);
        if (!fresh) return false;
        if (seen.size() > opts.max_states)
            throw resource_limit_error("quotient closure exceeded the state bound of " +
                                           std::to_string(opts.max_states),
                                       opts.max_states, seen.size());
        states.emplace_back(off, static_cast<std::uint32_t>(key.size()));
        return true;
    };

    std::uint64_t visited = 0;
    admit(start);
    ++visited;
    if (!visit(start)) return visited;

    std::string scratch;
    std::size_t head = 0;
    while (head < states.size()) {
        std::size_t level_end = states.size();
        if (opts.threads == 1) {
            for (; head < level_end; ++head) {
                scratch.assign(seen.at(states[head].first).data(), states[head].second);
                auto nv = static_cast<std::int32_t>(key_vertex_count(scratch));
                for (std::int32_t i = 0; i < nv; ++i) {
                    for (std::int32_t j = i + 1; j < nv; ++j) {
                        std::string_view child = f.fold_key_merge(scratch, i, j);
                        if (admit(child)) {
                            ++visited;
                            if (!visit(child)) return visited;
                        }
                    }
                }
            }
        } else {
            // level-synchronous: workers propose children, admission and
            // visiting stay sequential in (parent, pair) order so the visit
            // sequence is identical for every thread count
            std::size_t n = level_end - head;
            auto t = static_cast<std::size_t>(opts.threads);
            if (t > n) t = n;
            std::vector<std::vector<std::string>> proposals(t);
            std::vector<std::thread> workers;
            workers.reserve(t);
            for (std::size_t c = 0; c < t; ++c) {
                std::size_t lo = head + n * c / t;
                std::size_t hi = head + n * (c + 1) / t;
                workers.emplace_back([&, lo, hi, c]() {
                    folder wf;
                    std::string local;
                    for (std::size_t s = lo; s < hi; ++s) {
                        local.assign(seen.at(states[s].first).data(), states[s].second);
                        auto nv = static_cast<std::int32_t>(key_vertex_count(local));
                        for (std::int32_t i = 0; i < nv; ++i)
                            for (std::int32_t j = i + 1; j < nv; ++j) {
                                std::string_view child = wf.fold_key_merge(local, i, j);
                                if (!seen.contains(child))
                                    proposals[c].emplace_back(child);
                            }
                    }
                });
            }
            for (auto& w : workers) w.join();
            head = level_end;
            for (auto& chunk : proposals) {
                for (auto& child : chunk) {
                    if (admit(child)) {
                        ++visited;
                        if (!visit(child)) return visited;
                    }
                }
            }
        }
    }
    return visited;
}

} // namespace fgpr
