#pragma once

// Double flows on a vertex-split network: decomposition of E_φ △ E_φ' into
// circuits and terminal-to-terminal paths, the matching those paths induce,
// and the path-switching transformation between proper pairs.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tnn/core_model.hpp"
#include "tnn/flows.hpp"

namespace tnn {

// φ is an (XC|X'C')-flow and φ' an (XC̄|X'C̄')-flow on the same hat network.
struct DoubleFlow {
    ProperPair pair;
    Flow phi;
    Flow phi_prime;

    friend bool operator==(const DoubleFlow&, const DoubleFlow&) = default;
    friend auto operator<=>(const DoubleFlow&, const DoubleFlow&) = default;
};

enum class PathClass { CCbar, CCprime, CbarCbarPrime, CprimeCbarPrime };

inline const char* to_string(PathClass c) {
    switch (c) {
    case PathClass::CCbar: return "C-Cbar";
    case PathClass::CCprime: return "C-C'";
    case PathClass::CbarCbarPrime: return "Cbar-Cbar'";
    case PathClass::CprimeCbarPrime: return "C'-Cbar'";
    }
    return "?";
}

// A walk through E_φ △ E_φ'. edges[i] joins vertices[i] and vertices[i+1];
// from_phi[i] tells which flow the edge came from.
struct Trail {
    std::vector<int> vertices;
    std::vector<int> edges;
    std::vector<bool> from_phi;
};

struct ChordPath : Trail {
    Couple ends;
    PathClass cls = PathClass::CCbar;
};

struct Decomposition {
    std::vector<Trail> circuits;
    std::vector<ChordPath> paths;
};

// Within a trail, φ-edges are all traversed one way and φ'-edges the other.
inline bool alternates(const PlanarNetwork& g, const Trail& t) {
    if (t.edges.empty()) return true;
    auto agree = [&](std::size_t i) {
        const bool forward = g.edges[t.edges[i]].tail == t.vertices[i];
        return forward == t.from_phi[i];
    };
    const bool first = agree(0);
    for (std::size_t i = 1; i < t.edges.size(); ++i)
        if (agree(i) != first) return false;
    return true;
}

// Degree laws of a vertex-split network.
inline void check_hat_laws(const HatNetwork& h) {
    const auto& g = h.net;
    const auto out = out_edges(g);
    const auto in = in_edges(g);
    std::vector<int> split_count(g.vertices.size(), 0);
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
        if (h.kind[e] != HatNetwork::EdgeKind::Split) continue;
        const auto& edge = g.edges[e];
        ++split_count[edge.tail];
        ++split_count[edge.head];
        if (out[edge.tail].size() != 1 || in[edge.head].size() != 1)
            throw StructureError("split-edge at " + g.vertices[edge.tail].id + " is not the unique exit/entry");
    }
    std::vector<char> terminal(g.vertices.size(), 0);
    for (int s : g.sources) {
        terminal[s] = 1;
        if (out[s].size() != 1 || !in[s].empty())
            throw StructureError("source " + g.vertices[s].id + " needs one leaving and no entering edge");
    }
    for (int t : g.sinks) {
        terminal[t] = 1;
        if (in[t].size() != 1 || !out[t].empty())
            throw StructureError("sink " + g.vertices[t].id + " needs one entering and no leaving edge");
    }
    for (std::size_t v = 0; v < g.vertices.size(); ++v)
        if (!terminal[v] && split_count[v] != 1)
            throw StructureError("vertex " + g.vertices[v].id + " is incident to " +
                                 std::to_string(split_count[v]) + " split-edges");
}

namespace detail {

inline void require_dims(const HatNetwork& h, const Context& ctx) {
    if (h.net.n() != ctx.n() || h.net.n_prime() != ctx.n_prime())
        throw DimensionError("network has " + std::to_string(h.net.n()) + " sources and " +
                             std::to_string(h.net.n_prime()) + " sinks, context is " +
                             std::to_string(ctx.n()) + "x" + std::to_string(ctx.n_prime()));
}

// Terminal vertex -> ground element (rows for sources, columns for sinks).
inline std::map<int, GroundElement> terminal_elements(const HatNetwork& h) {
    std::map<int, GroundElement> out;
    for (int i = 0; i < h.net.n(); ++i) out[h.net.sources[i]] = row(i + 1);
    for (int j = 0; j < h.net.n_prime(); ++j) out[h.net.sinks[j]] = col(j + 1);
    return out;
}

inline bool contains(const IndexSet& s, int i) { return std::binary_search(s.begin(), s.end(), i); }

} // namespace detail

// All double flows for a proper pair.
inline std::vector<DoubleFlow> double_flows(const HatNetwork& h, const Context& ctx, const ProperPair& p) {
    detail::require_dims(h, ctx);
    require_proper(ctx, p);
    const auto first = enumerate_flows(h.net, rows_of(ctx, p), cols_of(ctx, p));
    if (first.empty()) return {};
    const auto second = enumerate_flows(h.net, rows_of_complement(ctx, p), cols_of_complement(ctx, p));
    std::vector<DoubleFlow> out;
    out.reserve(first.size() * second.size());
    for (const auto& a : first)
        for (const auto& b : second) out.push_back({p, a, b});
    return out;
}

// Splits E_φ △ E_φ' into vertex-disjoint circuits and terminal-to-terminal
// paths. Paths are traced from terminals in circular order, circuits from
// the least remaining edge.
inline Decomposition decompose(const HatNetwork& h, const Context& ctx, const DoubleFlow& df) {
    check_hat_laws(h);
    detail::require_dims(h, ctx);
    const auto& g = h.net;
    const EdgeIndex idx(g);
    const auto e_phi = flow_edges(idx, df.phi);
    const auto e_psi = flow_edges(idx, df.phi_prime);

    std::vector<int> diff;
    std::vector<char> is_phi(g.edges.size(), 0);
    std::set_symmetric_difference(e_phi.begin(), e_phi.end(), e_psi.begin(), e_psi.end(),
                                  std::back_inserter(diff));
    for (int e : e_phi) is_phi[e] = 1;

    std::vector<std::vector<int>> incident(g.vertices.size());
    for (int e : diff) {
        incident[g.edges[e].tail].push_back(e);
        incident[g.edges[e].head].push_back(e);
    }
    for (std::size_t v = 0; v < incident.size(); ++v)
        if (incident[v].size() > 2)
            throw StructureError("vertex " + g.vertices[v].id + " has degree " +
                                 std::to_string(incident[v].size()) + " in the symmetric difference");

    std::vector<char> used(g.edges.size(), 0);
    auto trace = [&](int start, int first_edge) {
        Trail t;
        t.vertices.push_back(start);
        int v = start, e = first_edge;
        while (e >= 0 && !used[e]) {
            used[e] = 1;
            const int w = g.edges[e].tail == v ? g.edges[e].head : g.edges[e].tail;
            t.edges.push_back(e);
            t.from_phi.push_back(is_phi[e] != 0);
            t.vertices.push_back(w);
            v = w;
            e = -1;
            for (int f : incident[v])
                if (!used[f]) { e = f; break; }
        }
        return t;
    };

    const auto terms = detail::terminal_elements(h);
    std::vector<int> boundary;
    for (int i = 0; i < g.n(); ++i) boundary.push_back(g.sources[i]);
    for (int j = g.n_prime() - 1; j >= 0; --j) boundary.push_back(g.sinks[j]);

    Decomposition dec;
    for (int b : boundary) {
        if (incident[b].size() != 1 || used[incident[b][0]]) continue;
        ChordPath p;
        static_cast<Trail&>(p) = trace(b, incident[b][0]);
        const int end = p.vertices.back();
        auto it = terms.find(end);
        if (it == terms.end())
            throw StructureError("path from " + g.vertices[b].id + " ends at non-terminal " + g.vertices[end].id);
        const GroundElement a = terms.at(b), z = it->second;
        for (const auto& e : {a, z}) {
            const bool in_y = e.side == Side::Row ? detail::contains(ctx.y(), e.index)
                                                  : detail::contains(ctx.y_prime(), e.index);
            if (!in_y) throw StructureError("path endpoint " + to_string(e) + " lies outside Y ⊔ Y'");
        }
        p.ends = Couple(a, z);
        const auto& u = p.ends.first;
        const auto& w = p.ends.second;
        const bool u_white = u.side == Side::Row ? detail::contains(df.pair.c, u.index)
                                                 : detail::contains(df.pair.c_prime, u.index);
        const bool w_white = w.side == Side::Row ? detail::contains(df.pair.c, w.index)
                                                 : detail::contains(df.pair.c_prime, w.index);
        if (u.side == w.side) {
            if (u_white == w_white)
                throw StructureError("same-side path joins two elements of one colour");
            p.cls = u.side == Side::Row ? PathClass::CCbar : PathClass::CprimeCbarPrime;
        } else {
            if (u_white != w_white) throw StructureError("cross path joins elements of different colours");
            p.cls = u_white ? PathClass::CCprime : PathClass::CbarCbarPrime;
        }
        dec.paths.push_back(std::move(p));
    }
    for (int e : diff) {
        if (used[e]) continue;
        const int start = g.edges[e].tail;
        Trail c = trace(start, e);
        if (c.vertices.back() != start) throw StructureError("open trail left after removing terminal paths");
        dec.circuits.push_back(std::move(c));
    }
    return dec;
}

// M(φ,φ'): couples formed by the endpoints of the decomposition paths.
inline Matching matching_of(const Decomposition& dec) {
    std::vector<Couple> cs;
    for (const auto& p : dec.paths) cs.push_back(p.ends);
    return Matching(std::move(cs));
}

inline Matching matching_of(const HatNetwork& h, const Context& ctx, const DoubleFlow& df) {
    return matching_of(decompose(h, ctx, df));
}

// Rebuilds the flow whose edge set is `edges`, checking it is an (I|J)-flow.
inline Flow flow_from_edges(const PlanarNetwork& g, const std::vector<int>& edges, const IndexSet& rows,
                            const IndexSet& cols) {
    std::map<int, int> next;
    for (int e : edges)
        if (!next.emplace(g.edges[e].tail, g.edges[e].head).second)
            throw StructureError("edge set branches at " + g.vertices[g.edges[e].tail].id);
    Flow f;
    f.rows = rows;
    f.cols = cols;
    std::set<int> seen;
    std::size_t walked = 0;
    IndexSet reached;
    std::map<int, int> sink_index;
    for (int j = 0; j < g.n_prime(); ++j) sink_index[g.sinks[j]] = j + 1;
    for (int i : rows) {
        std::vector<int> path{g.sources[i - 1]};
        if (!seen.insert(path.back()).second) throw StructureError("paths share a vertex");
        while (true) {
            auto it = next.find(path.back());
            if (it == next.end()) break;
            path.push_back(it->second);
            ++walked;
            if (!seen.insert(path.back()).second) throw StructureError("paths share a vertex");
        }
        auto s = sink_index.find(path.back());
        if (s == sink_index.end()) throw StructureError("path does not end at a sink");
        reached.push_back(s->second);
        f.paths.push_back(std::move(path));
    }
    if (walked != edges.size()) throw StructureError("edge set is not a union of source-sink paths");
    if (reached != cols) throw StructureError("paths end at the wrong sinks");
    return f;
}

// Exchanges φ and φ' along the paths whose couples lie in m0. The result is a
// double flow for exchange(pair, M, m0) with the same edge multiset.
inline DoubleFlow switch_double_flow(const HatNetwork& h, const Context& ctx, const DoubleFlow& df,
                                     const std::vector<Couple>& m0) {
    const auto dec = decompose(h, ctx, df);
    const Matching m = matching_of(dec);
    const ProperPair target = exchange(ctx, df.pair, m, m0);

    std::vector<int> e0;
    for (const auto& p : dec.paths)
        if (std::find(m0.begin(), m0.end(), p.ends) != m0.end()) e0.insert(e0.end(), p.edges.begin(), p.edges.end());
    std::sort(e0.begin(), e0.end());

    const EdgeIndex idx(h.net);
    auto flip = [&](const Flow& f) {
        const auto es = flow_edges(idx, f);
        std::vector<int> out;
        std::set_symmetric_difference(es.begin(), es.end(), e0.begin(), e0.end(), std::back_inserter(out));
        return out;
    };
    DoubleFlow out;
    out.pair = target;
    out.phi = flow_from_edges(h.net, flip(df.phi), rows_of(ctx, target), cols_of(ctx, target));
    out.phi_prime = flow_from_edges(h.net, flip(df.phi_prime), rows_of_complement(ctx, target),
                                    cols_of_complement(ctx, target));
    return out;
}

// E_φ ⊔ E_φ' as edge -> multiplicity.
inline std::map<int, int> edge_multiset(const HatNetwork& h, const DoubleFlow& df) {
    const EdgeIndex idx(h.net);
    std::map<int, int> m;
    for (int e : flow_edges(idx, df.phi)) ++m[e];
    for (int e : flow_edges(idx, df.phi_prime)) ++m[e];
    return m;
}

} // namespace tnn
