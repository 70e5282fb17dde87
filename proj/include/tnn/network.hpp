#pragma once

// Planar acyclic networks with boundary terminals and their validation.

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tnn/errors.hpp"
#include "tnn/rational.hpp"

namespace tnn {

struct Point {
    Rational x;
    Rational y;

    friend bool operator==(const Point&, const Point&) = default;
};

struct Vertex {
    std::string id;
    Point pos;

    friend bool operator==(const Vertex&, const Vertex&) = default;
};

struct Edge {
    int tail = 0;
    int head = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Vertices are addressed by position in `vertices`; sources[i-1] is s_i and
// sinks[j-1] is t_j.
struct PlanarNetwork {
    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    std::vector<int> sources;
    std::vector<int> sinks;

    int n() const { return static_cast<int>(sources.size()); }
    int n_prime() const { return static_cast<int>(sinks.size()); }
    int vertex_count() const { return static_cast<int>(vertices.size()); }

    int add_vertex(std::string id, Rational x, Rational y) {
        vertices.push_back({std::move(id), {std::move(x), std::move(y)}});
        return vertex_count() - 1;
    }
    int add_edge(int tail, int head) {
        edges.push_back({tail, head});
        return static_cast<int>(edges.size()) - 1;
    }

    int find_vertex(const std::string& id) const {
        for (int i = 0; i < vertex_count(); ++i)
            if (vertices[i].id == id) return i;
        return -1;
    }

    friend bool operator==(const PlanarNetwork&, const PlanarNetwork&) = default;
};

// Nonnegative vertex weights indexed like PlanarNetwork::vertices.
using Weighting = std::vector<Rational>;

inline Weighting unit_weights(const PlanarNetwork& g) {
    return Weighting(g.vertices.size(), Rational(1));
}

// Outgoing edge indices per vertex, in edge order.
inline std::vector<std::vector<int>> out_edges(const PlanarNetwork& g) {
    std::vector<std::vector<int>> out(g.vertices.size());
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) out[g.edges[e].tail].push_back(e);
    return out;
}

inline std::vector<std::vector<int>> in_edges(const PlanarNetwork& g) {
    std::vector<std::vector<int>> in(g.vertices.size());
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) in[g.edges[e].head].push_back(e);
    return in;
}

// Topological order, or empty optional-like result (size < |V|) when cyclic.
inline std::vector<int> topological_order(const PlanarNetwork& g) {
    std::vector<int> indeg(g.vertices.size(), 0);
    for (const auto& e : g.edges) ++indeg[e.head];
    const auto out = out_edges(g);
    std::queue<int> ready;
    for (int v = 0; v < g.vertex_count(); ++v)
        if (indeg[v] == 0) ready.push(v);
    std::vector<int> order;
    while (!ready.empty()) {
        const int v = ready.front();
        ready.pop();
        order.push_back(v);
        for (int e : out[v])
            if (--indeg[g.edges[e].head] == 0) ready.push(g.edges[e].head);
    }
    return order;
}

namespace geom {

inline int sign(const Rational& q) { return sgn(q); }

inline int orientation(const Point& a, const Point& b, const Point& c) {
    return sign((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

// p on the closed segment [a, b], given collinearity.
inline bool within_box(const Point& a, const Point& b, const Point& p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

inline bool on_segment(const Point& a, const Point& b, const Point& p) {
    return orientation(a, b, p) == 0 && within_box(a, b, p);
}

// Closed-segment intersection test.
inline bool segments_intersect(const Point& p1, const Point& p2, const Point& p3, const Point& p4) {
    const int d1 = orientation(p3, p4, p1), d2 = orientation(p3, p4, p2);
    const int d3 = orientation(p1, p2, p3), d4 = orientation(p1, p2, p4);
    if (d1 * d2 < 0 && d3 * d4 < 0) return true;
    if (d1 == 0 && within_box(p3, p4, p1)) return true;
    if (d2 == 0 && within_box(p3, p4, p2)) return true;
    if (d3 == 0 && within_box(p1, p2, p3)) return true;
    if (d4 == 0 && within_box(p1, p2, p4)) return true;
    return false;
}

inline Rational dot(const Point& o, const Point& a, const Point& b) {
    return (a.x - o.x) * (b.x - o.x) + (a.y - o.y) * (b.y - o.y);
}

// Convex hull in counter-clockwise order without collinear points.
inline std::vector<Point> convex_hull(std::vector<Point> pts) {
    auto less = [](const Point& a, const Point& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    };
    std::sort(pts.begin(), pts.end(), less);
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && orientation(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && orientation(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

} // namespace geom

struct Violation {
    enum class Kind { Structure, Cycle, Crossing, TerminalOrder, Redundant };
    Kind kind;
    std::string message;
};

inline const char* to_string(Violation::Kind k) {
    switch (k) {
    case Violation::Kind::Structure: return "structure";
    case Violation::Kind::Cycle: return "cycle";
    case Violation::Kind::Crossing: return "crossing";
    case Violation::Kind::TerminalOrder: return "terminal-order";
    case Violation::Kind::Redundant: return "redundant";
    }
    return "?";
}

struct NetworkReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }
    bool has(Violation::Kind k) const {
        return std::any_of(violations.begin(), violations.end(),
                           [k](const Violation& v) { return v.kind == k; });
    }
    std::string summary() const {
        std::string s;
        for (const auto& v : violations) s += std::string(to_string(v.kind)) + ": " + v.message + "\n";
        return s;
    }
};

namespace detail {

inline void check_structure(const PlanarNetwork& g, NetworkReport& rep) {
    using K = Violation::Kind;
    const int nv = g.vertex_count();
    std::set<std::string> ids;
    for (const auto& v : g.vertices)
        if (!ids.insert(v.id).second) rep.violations.push_back({K::Structure, "duplicate vertex id " + v.id});
    std::set<std::pair<Rational, Rational>> positions;
    for (const auto& v : g.vertices)
        if (!positions.insert({v.pos.x, v.pos.y}).second)
            rep.violations.push_back({K::Structure, "vertex " + v.id + " shares its position"});
    std::set<std::pair<int, int>> seen;
    for (const auto& e : g.edges) {
        if (e.tail < 0 || e.tail >= nv || e.head < 0 || e.head >= nv) {
            rep.violations.push_back({K::Structure, "edge endpoint out of range"});
            continue;
        }
        if (e.tail == e.head) rep.violations.push_back({K::Structure, "self-loop at " + g.vertices[e.tail].id});
        auto key = std::minmax(e.tail, e.head);
        if (!seen.insert({key.first, key.second}).second)
            rep.violations.push_back({K::Structure, "parallel edges between " + g.vertices[e.tail].id +
                                                        " and " + g.vertices[e.head].id});
    }
    std::set<int> terms;
    for (int s : g.sources)
        if (s < 0 || s >= nv || !terms.insert(s).second)
            rep.violations.push_back({K::Structure, "bad or repeated source"});
    for (int t : g.sinks)
        if (t < 0 || t >= nv || !terms.insert(t).second)
            rep.violations.push_back({K::Structure, "bad or repeated sink"});
}

inline void check_crossings(const PlanarNetwork& g, NetworkReport& rep) {
    using K = Violation::Kind;
    const auto& V = g.vertices;
    const int ne = static_cast<int>(g.edges.size());
    auto name = [&](const Edge& e) { return V[e.tail].id + "->" + V[e.head].id; };
    for (int i = 0; i < ne; ++i) {
        const Edge& e = g.edges[i];
        const Point &a = V[e.tail].pos, &b = V[e.head].pos;
        for (int v = 0; v < g.vertex_count(); ++v) {
            if (v == e.tail || v == e.head) continue;
            if (geom::on_segment(a, b, V[v].pos))
                rep.violations.push_back({K::Crossing, "edge " + name(e) + " passes through " + V[v].id});
        }
        for (int j = i + 1; j < ne; ++j) {
            const Edge& f = g.edges[j];
            const Point &c = V[f.tail].pos, &d = V[f.head].pos;
            const int shared = (e.tail == f.tail) + (e.tail == f.head) + (e.head == f.tail) + (e.head == f.head);
            if (shared == 0) {
                if (geom::segments_intersect(a, b, c, d))
                    rep.violations.push_back({K::Crossing, "edges " + name(e) + " and " + name(f) + " cross"});
            } else if (shared == 1) {
                const int p = (e.tail == f.tail || e.tail == f.head) ? e.tail : e.head;
                const int oe = p == e.tail ? e.head : e.tail;
                const int of = p == f.tail ? f.head : f.tail;
                const Point& o = V[p].pos;
                if (geom::orientation(o, V[oe].pos, V[of].pos) == 0 && geom::dot(o, V[oe].pos, V[of].pos) > 0)
                    rep.violations.push_back({K::Crossing, "edges " + name(e) + " and " + name(f) + " overlap"});
            }
        }
    }
}

inline bool is_rotation(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size()) return false;
    if (a.empty()) return true;
    for (std::size_t s = 0; s < a.size(); ++s) {
        bool ok = true;
        for (std::size_t i = 0; i < a.size() && ok; ++i) ok = a[(s + i) % a.size()] == b[i];
        if (ok) return true;
    }
    return false;
}

// Terminals must sit on the hull boundary in clockwise order s_n..s_1, t_1..t_n'.
inline void check_terminal_order(const PlanarNetwork& g, NetworkReport& rep) {
    using K = Violation::Kind;
    std::vector<int> required;
    for (int i = g.n() - 1; i >= 0; --i) required.push_back(g.sources[i]);
    for (int t : g.sinks) required.push_back(t);
    if (required.size() <= 2 || g.vertices.empty()) return;

    std::vector<Point> pts;
    for (const auto& v : g.vertices) pts.push_back(v.pos);
    auto hull = geom::convex_hull(pts);
    std::vector<std::pair<std::pair<std::size_t, Rational>, int>> keyed;

    if (hull.size() >= 3) {
        std::reverse(hull.begin(), hull.end()); // clockwise
        for (int t : required) {
            const Point& p = g.vertices[t].pos;
            bool placed = false;
            for (std::size_t e = 0; e < hull.size() && !placed; ++e) {
                const Point& a = hull[e];
                const Point& b = hull[(e + 1) % hull.size()];
                if (geom::on_segment(a, b, p) && !(p == b)) {
                    const Rational dx = p.x - a.x, dy = p.y - a.y;
                    keyed.push_back({{e, dx * dx + dy * dy}, t});
                    placed = true;
                }
            }
            if (!placed) {
                rep.violations.push_back({K::TerminalOrder, "terminal " + g.vertices[t].id +
                                                                " is not on the outer boundary"});
                return;
            }
        }
        std::sort(keyed.begin(), keyed.end());
        std::vector<int> seq;
        for (const auto& k : keyed) seq.push_back(k.second);
        if (!is_rotation(seq, required))
            rep.violations.push_back({K::TerminalOrder, "terminals are not in clockwise order s_n..s_1,t_1..t_n'"});
        return;
    }
    // Collinear layout: accept either direction along the line.
    const Point& o = hull.front();
    const Point& far = hull.back();
    for (int t : required) keyed.push_back({{0, geom::dot(o, far, g.vertices[t].pos)}, t});
    std::sort(keyed.begin(), keyed.end());
    std::vector<int> seq;
    for (const auto& k : keyed) seq.push_back(k.second);
    std::vector<int> rev(seq.rbegin(), seq.rend());
    if (!is_rotation(seq, required) && !is_rotation(rev, required))
        rep.violations.push_back({K::TerminalOrder, "collinear terminals out of order"});
}

inline void check_redundant(const PlanarNetwork& g, NetworkReport& rep) {
    using K = Violation::Kind;
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
    for (const auto& e : g.edges)
        if (!fwd[e.tail] || !bwd[e.head])
            rep.violations.push_back({K::Redundant, "edge " + g.vertices[e.tail].id + "->" +
                                                        g.vertices[e.head].id + " lies on no source-sink path"});
}

} // namespace detail

// Diagnoses cycles, crossings, terminal order and redundant edges.
inline NetworkReport validate_network(const PlanarNetwork& g) {
    NetworkReport rep;
    detail::check_structure(g, rep);
    if (!rep.ok()) return rep; // remaining checks assume well-formed indices
    if (static_cast<int>(topological_order(g).size()) != g.vertex_count())
        rep.violations.push_back({Violation::Kind::Cycle, "network has a directed cycle"});
    detail::check_crossings(g, rep);
    detail::check_terminal_order(g, rep);
    detail::check_redundant(g, rep);
    return rep;
}

inline void require_valid(const PlanarNetwork& g) {
    const auto rep = validate_network(g);
    if (!rep.ok()) throw InvalidNetworkError(rep.summary());
}

} // namespace tnn
