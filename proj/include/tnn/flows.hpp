#pragma once

// Vertex-disjoint path systems ("flows"), flow-generated functions and the
// Lindström matrix of a weighted planar network.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tnn/core_model.hpp"
#include "tnn/matrix.hpp"
#include "tnn/network.hpp"
#include "tnn/random.hpp"

namespace tnn {

// paths[k] runs from the k-th smallest source of `rows` to the sink recorded
// as its last vertex.
struct Flow {
    IndexSet rows;
    IndexSet cols;
    std::vector<std::vector<int>> paths;

    friend bool operator==(const Flow&, const Flow&) = default;
    friend auto operator<=>(const Flow&, const Flow&) = default;
};

// V_φ, sorted.
inline std::vector<int> flow_vertices(const Flow& f) {
    std::vector<int> vs;
    for (const auto& p : f.paths) vs.insert(vs.end(), p.begin(), p.end());
    std::sort(vs.begin(), vs.end());
    return vs;
}

inline Rational flow_weight(const Flow& f, const Weighting& w) {
    Rational prod = 1;
    for (const auto& p : f.paths)
        for (int v : p) prod *= w[v];
    return prod;
}

// Edge index lookup by (tail, head); networks carry no parallel edges.
class EdgeIndex {
public:
    explicit EdgeIndex(const PlanarNetwork& g) {
        for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
            index_[{g.edges[e].tail, g.edges[e].head}] = e;
    }
    int operator()(int tail, int head) const {
        auto it = index_.find({tail, head});
        return it == index_.end() ? -1 : it->second;
    }

private:
    std::map<std::pair<int, int>, int> index_;
};

// E_φ as sorted edge indices.
inline std::vector<int> flow_edges(const EdgeIndex& idx, const Flow& f) {
    std::vector<int> es;
    for (const auto& p : f.paths)
        for (std::size_t i = 0; i + 1 < p.size(); ++i) es.push_back(idx(p[i], p[i + 1]));
    std::sort(es.begin(), es.end());
    return es;
}

namespace detail {

class FlowSearch {
public:
    FlowSearch(const PlanarNetwork& g, const IndexSet& rows, const IndexSet& cols, std::size_t limit)
        : g_(g), out_(out_edges(g)), rows_(rows), cols_(cols), limit_(limit),
          used_(g.vertices.size(), 0), reserved_(g.vertices.size(), 0),
          sink_slot_(g.vertices.size(), -1), sink_taken_(cols.size(), 0) {
        for (int i : rows) reserved_[g.sources[i - 1]] = 1;
        for (std::size_t k = 0; k < cols.size(); ++k) {
            const int t = g.sinks[cols[k] - 1];
            reserved_[t] = 1;
            sink_slot_[t] = static_cast<int>(k);
        }
    }

    std::vector<Flow> run(bool keep) {
        keep_ = keep;
        current_.rows = rows_;
        current_.cols = cols_;
        place(0);
        return std::move(found_);
    }
    std::size_t count() const { return count_; }

private:
    bool done() const { return count_ >= limit_; }

    void place(std::size_t k) {
        if (done()) return;
        if (k == rows_.size()) {
            ++count_;
            if (keep_) found_.push_back(current_);
            return;
        }
        const int s = g_.sources[rows_[k] - 1];
        used_[s] = 1;
        current_.paths.push_back({s});
        extend(k, s);
        current_.paths.pop_back();
        used_[s] = 0;
    }

    void extend(std::size_t k, int v) {
        if (done()) return;
        if (const int slot = sink_slot_[v]; slot >= 0) {
            if (sink_taken_[slot]) return;
            sink_taken_[slot] = 1;
            place(k + 1);
            sink_taken_[slot] = 0;
            return;
        }
        for (int e : out_[v]) {
            const int w = g_.edges[e].head;
            if (used_[w]) continue;
            if (reserved_[w] && sink_slot_[w] < 0) continue;
            used_[w] = 1;
            current_.paths.back().push_back(w);
            extend(k, w);
            current_.paths.back().pop_back();
            used_[w] = 0;
        }
    }

    const PlanarNetwork& g_;
    std::vector<std::vector<int>> out_;
    const IndexSet& rows_;
    const IndexSet& cols_;
    std::size_t limit_;
    bool keep_ = true;
    std::vector<char> used_, reserved_;
    std::vector<int> sink_slot_;
    std::vector<char> sink_taken_;
    Flow current_;
    std::vector<Flow> found_;
    std::size_t count_ = 0;
};

inline void check_flow_args(const PlanarNetwork& g, const IndexSet& rows, const IndexSet& cols) {
    if (rows.size() != cols.size())
        throw SizeMismatchError("|I| = " + std::to_string(rows.size()) + " but |J| = " +
                                std::to_string(cols.size()));
    for (int i : rows)
        if (i < 1 || i > g.n()) throw RangeError("source index " + std::to_string(i));
    for (int j : cols)
        if (j < 1 || j > g.n_prime()) throw RangeError("sink index " + std::to_string(j));
}

} // namespace detail

// Φ_{I|J}: every system of pairwise vertex-disjoint directed paths from S_I
// to T_J, sorted lexicographically by path vertex sequences.
inline std::vector<Flow> enumerate_flows(const PlanarNetwork& g, const IndexSet& rows_raw,
                                         const IndexSet& cols_raw) {
    const IndexSet rows = make_index_set(rows_raw), cols = make_index_set(cols_raw);
    detail::check_flow_args(g, rows, cols);
    detail::FlowSearch search(g, rows, cols, std::numeric_limits<std::size_t>::max());
    auto flows = search.run(true);
    std::sort(flows.begin(), flows.end());
    return flows;
}

// |Φ_{I|J}|, stopping early once `limit` flows were seen.
inline std::size_t count_flows(const PlanarNetwork& g, const IndexSet& rows_raw,
                               const IndexSet& cols_raw,
                               std::size_t limit = std::numeric_limits<std::size_t>::max()) {
    const IndexSet rows = make_index_set(rows_raw), cols = make_index_set(cols_raw);
    detail::check_flow_args(g, rows, cols);
    detail::FlowSearch search(g, rows, cols, limit);
    search.run(false);
    return search.count();
}

// f_{G,w}(I|J): sum over (I|J)-flows of the product of vertex weights.
inline Rational fg_function(const PlanarNetwork& g, const Weighting& w, const IndexSet& rows,
                            const IndexSet& cols) {
    if (w.size() != g.vertices.size()) throw SizeMismatchError("weighting does not cover the vertex set");
    Rational sum = 0;
    for (const auto& f : enumerate_flows(g, rows, cols)) sum += flow_weight(f, w);
    return sum;
}

namespace detail {

// q_ij = weighted sum over directed s_i -> t_j paths, by dynamic programming.
inline Matrix path_sum_matrix(const PlanarNetwork& g, const Weighting& w) {
    const auto order = topological_order(g);
    const auto out = out_edges(g);
    Matrix q(g.n(), g.n_prime());
    std::vector<Rational> dp(g.vertices.size());
    for (int i = 0; i < g.n(); ++i) {
        std::fill(dp.begin(), dp.end(), Rational(0));
        dp[g.sources[i]] = w[g.sources[i]];
        for (int v : order) {
            if (dp[v] == 0) continue;
            for (int e : out[v]) {
                const int h = g.edges[e].head;
                dp[h] += dp[v] * w[h];
            }
        }
        for (int j = 0; j < g.n_prime(); ++j) q(i, j) = dp[g.sinks[j]];
    }
    return q;
}

inline void check_weights(const PlanarNetwork& g, const Weighting& w) {
    if (w.size() != g.vertices.size()) throw SizeMismatchError("weighting does not cover the vertex set");
    for (std::size_t v = 0; v < w.size(); ++v)
        if (w[v] < 0) throw NegativeWeightError("vertex " + g.vertices[v].id + " has weight " + to_string(w[v]));
}

} // namespace detail

// Q_{G,w} with q_ij = f_{G,w}(i|j).
inline Matrix lindstrom_matrix(const PlanarNetwork& g, const Weighting& w) {
    require_valid(g);
    detail::check_weights(g, w);
    return detail::path_sum_matrix(g, w);
}

// Vertex-split network: every v becomes v' -> v'' (split-edge), edges (u,v)
// become (u'', v'), and fresh terminals hang off s'_i and t''_j.
struct HatNetwork {
    enum class EdgeKind { Split, Rerouted, Extra };

    PlanarNetwork net;
    std::vector<int> in_vertex;  // v -> v'
    std::vector<int> out_vertex; // v -> v''
    std::vector<int> split_edge; // v -> e_v
    std::vector<EdgeKind> kind;  // per hat edge
    std::vector<int> origin;     // hat vertex -> original vertex, -1 for new terminals
};

inline HatNetwork hat_transform(const PlanarNetwork& g) {
    require_valid(g);
    // Offsets along x; nominal geometry, exact for left-to-right drawings.
    Rational gap = 0;
    {
        std::vector<Rational> xs;
        for (const auto& v : g.vertices) xs.push_back(v.pos.x);
        std::sort(xs.begin(), xs.end());
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            const Rational d = xs[i + 1] - xs[i];
            if (d > 0 && (gap == 0 || d < gap)) gap = d;
        }
        if (gap == 0) gap = 1;
    }
    const Rational eps = gap / 8;

    HatNetwork h;
    const int nv = g.vertex_count();
    h.in_vertex.resize(nv);
    h.out_vertex.resize(nv);
    h.split_edge.resize(nv);
    for (int v = 0; v < nv; ++v) {
        const auto& src = g.vertices[v];
        h.in_vertex[v] = h.net.add_vertex(src.id + "'", src.pos.x - eps, src.pos.y);
        h.origin.push_back(v);
        h.out_vertex[v] = h.net.add_vertex(src.id + "''", src.pos.x + eps, src.pos.y);
        h.origin.push_back(v);
    }
    for (int v = 0; v < nv; ++v) {
        h.split_edge[v] = h.net.add_edge(h.in_vertex[v], h.out_vertex[v]);
        h.kind.push_back(HatNetwork::EdgeKind::Split);
    }
    for (const auto& e : g.edges) {
        h.net.add_edge(h.out_vertex[e.tail], h.in_vertex[e.head]);
        h.kind.push_back(HatNetwork::EdgeKind::Rerouted);
    }
    for (int i = 0; i < g.n(); ++i) {
        const auto& s = g.vertices[g.sources[i]];
        const int hs = h.net.add_vertex("^" + s.id, s.pos.x - 2 * eps, s.pos.y);
        h.origin.push_back(-1);
        h.net.sources.push_back(hs);
        h.net.add_edge(hs, h.in_vertex[g.sources[i]]);
        h.kind.push_back(HatNetwork::EdgeKind::Extra);
    }
    for (int j = 0; j < g.n_prime(); ++j) {
        const auto& t = g.vertices[g.sinks[j]];
        const int ht = h.net.add_vertex("^" + t.id, t.pos.x + 2 * eps, t.pos.y);
        h.origin.push_back(-1);
        h.net.sinks.push_back(ht);
        h.net.add_edge(h.out_vertex[g.sinks[j]], ht);
        h.kind.push_back(HatNetwork::EdgeKind::Extra);
    }
    return h;
}

// Vertex weights on Ĝ giving the same flow weights as w on G: w(v) sits on v'.
inline Weighting hat_weighting(const HatNetwork& h, const Weighting& w) {
    Weighting out(h.net.vertices.size(), Rational(1));
    for (std::size_t v = 0; v < h.in_vertex.size(); ++v) out[h.in_vertex[v]] = w[v];
    return out;
}

// Drops every non-terminal vertex not lying on a source-to-sink path.
inline PlanarNetwork prune_network(const PlanarNetwork& g) {
    const int nv = g.vertex_count();
    std::vector<char> fwd(nv, 0), bwd(nv, 0);
    const auto out = out_edges(g);
    const auto in = in_edges(g);
    std::vector<int> stack;
    for (int s : g.sources) { fwd[s] = 1; stack.push_back(s); }
    while (!stack.empty()) {
        int v = stack.back(); stack.pop_back();
        for (int e : out[v]) if (!fwd[g.edges[e].head]) { fwd[g.edges[e].head] = 1; stack.push_back(g.edges[e].head); }
    }
    for (int t : g.sinks) { bwd[t] = 1; stack.push_back(t); }
    while (!stack.empty()) {
        int v = stack.back(); stack.pop_back();
        for (int e : in[v]) if (!bwd[g.edges[e].tail]) { bwd[g.edges[e].tail] = 1; stack.push_back(g.edges[e].tail); }
    }
    std::vector<char> keep(nv, 0);
    for (int v = 0; v < nv; ++v) keep[v] = fwd[v] && bwd[v];
    for (int s : g.sources) keep[s] = 1;
    for (int t : g.sinks) keep[t] = 1;
    PlanarNetwork out_g;
    std::vector<int> remap(nv, -1);
    for (int v = 0; v < nv; ++v)
        if (keep[v]) {
            remap[v] = out_g.vertex_count();
            out_g.vertices.push_back(g.vertices[v]);
        }
    for (const auto& e : g.edges)
        if (fwd[e.tail] && bwd[e.head] && remap[e.tail] >= 0 && remap[e.head] >= 0)
            out_g.add_edge(remap[e.tail], remap[e.head]);
    for (int s : g.sources) out_g.sources.push_back(remap[s]);
    for (int t : g.sinks) out_g.sinks.push_back(remap[t]);
    return out_g;
}

// Generic staircase grid G*(n, n'): n sources on the left, n' sinks on the
// right, inner columns alternating down- and up-diagonals so that every
// source reaches every sink.
inline PlanarNetwork staircase_network(int n, int n_prime) {
    const int rows = std::max(n, n_prime);
    const int inner = 2 * rows + 2;
    PlanarNetwork g;
    // grid[c][r] for c in [0, inner+1], r in [1, rows]; -1 when absent
    std::vector<std::vector<int>> grid(inner + 2, std::vector<int>(rows + 1, -1));
    for (int i = 1; i <= n; ++i) {
        grid[0][i] = g.add_vertex("s" + std::to_string(i), 0, -i);
        g.sources.push_back(grid[0][i]);
    }
    for (int c = 1; c <= inner; ++c)
        for (int r = 1; r <= rows; ++r)
            grid[c][r] = g.add_vertex("g" + std::to_string(c) + "_" + std::to_string(r), c, -r);
    for (int j = 1; j <= n_prime; ++j) {
        grid[inner + 1][j] = g.add_vertex("t" + std::to_string(j), inner + 1, -j);
        g.sinks.push_back(grid[inner + 1][j]);
    }
    for (int c = 0; c <= inner; ++c)
        for (int r = 1; r <= rows; ++r) {
            const int a = grid[c][r];
            if (a < 0) continue;
            if (grid[c + 1][r] >= 0) g.add_edge(a, grid[c + 1][r]);
            const int r2 = (c % 2 == 1) ? r + 1 : r - 1; // odd gaps go down, even gaps go up
            if (r2 >= 1 && r2 <= rows && grid[c + 1][r2] >= 0) g.add_edge(a, grid[c + 1][r2]);
        }
    return prune_network(g); // non-square shapes leave dead corners
}

struct RandomTnn {
    Matrix matrix;
    PlanarNetwork network;
    Weighting weights;
};

// TNN matrix from integer weights in [1, 100] on G*(n, n'); deterministic in seed.
inline RandomTnn random_tnn(int n, int n_prime, std::uint64_t seed) {
    if (n < 1 || n_prime < 1) throw RangeError("matrix dimensions must be positive");
    RandomTnn out;
    out.network = staircase_network(n, n_prime);
    SplitMix64 rng(seed);
    out.weights.reserve(out.network.vertices.size());
    for (std::size_t v = 0; v < out.network.vertices.size(); ++v) out.weights.emplace_back(static_cast<long>(rng.uniform(1, 100)));
    out.matrix = detail::path_sum_matrix(out.network, out.weights);
    return out;
}

// Small random layered network: sources in column 0, sinks in the last
// column, inner grid edges chosen at random, then pruned. Always valid.
inline PlanarNetwork random_planar_network(SplitMix64& rng, int max_vertices) {
    const int n = static_cast<int>(rng.uniform(1, std::min(3, std::max(1, max_vertices / 4))));
    const int n_prime = static_cast<int>(rng.uniform(1, std::min(3, std::max(1, max_vertices / 4))));
    const int budget = std::max(0, max_vertices - n - n_prime);
    const int rows = static_cast<int>(rng.uniform(1, std::max(1, std::min(3, budget))));
    const int max_cols = budget / rows;
    const int cols = max_cols > 0 ? static_cast<int>(rng.uniform(1, max_cols)) : 0;

    PlanarNetwork g;
    std::vector<std::vector<int>> grid(cols + 2, std::vector<int>(std::max({rows, n, n_prime}) + 1, -1));
    for (int i = 1; i <= n; ++i) {
        grid[0][i] = g.add_vertex("s" + std::to_string(i), 0, -i);
        g.sources.push_back(grid[0][i]);
    }
    for (int c = 1; c <= cols; ++c)
        for (int r = 1; r <= rows; ++r)
            grid[c][r] = g.add_vertex("v" + std::to_string(c) + "_" + std::to_string(r), c, -r);
    for (int j = 1; j <= n_prime; ++j) {
        grid[cols + 1][j] = g.add_vertex("t" + std::to_string(j), cols + 1, -j);
        g.sinks.push_back(grid[cols + 1][j]);
    }
    const int height = static_cast<int>(grid[0].size()) - 1;
    for (int c = 0; c <= cols; ++c) {
        const bool down = rng.coin();
        for (int r = 1; r <= height; ++r) {
            const int a = grid[c][r];
            if (a < 0) continue;
            if (grid[c + 1][r] >= 0 && rng.coin(3, 4)) g.add_edge(a, grid[c + 1][r]);
            const int r2 = down ? r + 1 : r - 1;
            if (r2 >= 1 && r2 <= height && grid[c + 1][r2] >= 0 && rng.coin(1, 2)) g.add_edge(a, grid[c + 1][r2]);
        }
        if (c >= 1)
            for (int r = 1; r < rows; ++r)
                if (rng.coin(1, 4)) g.add_edge(grid[c][r], grid[c][r + 1]);
    }
    return prune_network(g);
}

inline Weighting random_weights(SplitMix64& rng, const PlanarNetwork& g, bool allow_zero = true) {
    Weighting w;
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
        const auto num = rng.uniform(allow_zero ? 0 : 1, 9);
        const auto den = rng.uniform(1, 4);
        Rational q(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
        q.canonicalize();
        w.push_back(q);
    }
    return w;
}

} // namespace tnn
