#pragma once

// Ground data for quadratic minor inequalities: contexts, proper pairs,
// families with multiplicities, noncrossing feasible matchings and the
// matching-count criterion that decides universality over TNN matrices.

#include <algorithm>
#include <cassert>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tnn/errors.hpp"

namespace tnn {

// Sorted, duplicate-free list of 1-based indices.
using IndexSet = std::vector<int>;

inline IndexSet make_index_set(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline bool is_subset(const IndexSet& a, const IndexSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline IndexSet set_union(const IndexSet& a, const IndexSet& b) {
    IndexSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline IndexSet set_difference(const IndexSet& a, const IndexSet& b) {
    IndexSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline IndexSet set_symmetric_difference(const IndexSet& a, const IndexSet& b) {
    IndexSet out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                  std::back_inserter(out));
    return out;
}

inline IndexSet set_intersection(const IndexSet& a, const IndexSet& b) {
    IndexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline std::string format_index_set(const IndexSet& s, bool primed = false) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) os << ',';
        os << s[i];
        if (primed) os << '\'';
    }
    os << '}';
    return os.str();
}

enum class Side { Row, Col };

// A point of Y ⊔ Y'. The ordering is the circular sequence
// (y_1 < ... < y_m, then y'_{m'} > ... > y'_1): rows ascending first,
// then columns descending.
struct GroundElement {
    Side side = Side::Row;
    int index = 1;

    friend bool operator==(const GroundElement&, const GroundElement&) = default;
    friend std::strong_ordering operator<=>(const GroundElement& a, const GroundElement& b) {
        if (a.side != b.side) return a.side == Side::Row ? std::strong_ordering::less
                                                         : std::strong_ordering::greater;
        if (a.side == Side::Row) return a.index <=> b.index;
        return b.index <=> a.index;
    }
};

inline GroundElement row(int i) { return {Side::Row, i}; }
inline GroundElement col(int j) { return {Side::Col, j}; }

inline std::string to_string(const GroundElement& e) {
    return std::to_string(e.index) + (e.side == Side::Col ? "'" : "");
}

// Unordered couple, stored with first < second in circular order.
struct Couple {
    GroundElement first;
    GroundElement second;

    Couple() = default;
    Couple(GroundElement a, GroundElement b) : first(a), second(b) {
        if (second < first) std::swap(first, second);
    }

    friend bool operator==(const Couple&, const Couple&) = default;
    friend auto operator<=>(const Couple&, const Couple&) = default;
};

// Perfect matching on Y ⊔ Y'; couples sorted by first endpoint.
struct Matching {
    std::vector<Couple> couples;

    Matching() = default;
    explicit Matching(std::vector<Couple> cs) : couples(std::move(cs)) {
        std::sort(couples.begin(), couples.end());
    }

    bool contains(const Couple& c) const {
        return std::binary_search(couples.begin(), couples.end(), c);
    }

    friend bool operator==(const Matching&, const Matching&) = default;
    friend auto operator<=>(const Matching&, const Matching&) = default;
};

// "{1-4, 2-3, 5-1', 5'-2', 4'-3'}"
inline std::string to_string(const Matching& m) {
    std::string out = "{";
    for (std::size_t i = 0; i < m.couples.size(); ++i) {
        if (i) out += ", ";
        out += to_string(m.couples[i].first) + "-" + to_string(m.couples[i].second);
    }
    return out + "}";
}

class Context;
Context make_context(int n, int n_prime, std::vector<int> x, std::vector<int> y,
                     std::vector<int> x_prime, std::vector<int> y_prime);

// (n, n', X, Y, X', Y'), validated at construction.
class Context {
public:
    int n() const { return n_; }
    int n_prime() const { return n_prime_; }
    const IndexSet& x() const { return x_; }
    const IndexSet& y() const { return y_; }
    const IndexSet& x_prime() const { return x_prime_; }
    const IndexSet& y_prime() const { return y_prime_; }

    int m() const { return static_cast<int>(y_.size()); }
    int m_prime() const { return static_cast<int>(y_prime_.size()); }
    int ground_size() const { return m() + m_prime(); }

    // Y ⊔ Y' in circular order.
    std::vector<GroundElement> ground() const {
        std::vector<GroundElement> g;
        g.reserve(ground_size());
        for (int i : y_) g.push_back(row(i));
        for (auto it = y_prime_.rbegin(); it != y_prime_.rend(); ++it) g.push_back(col(*it));
        return g;
    }

    // Position in the circular sequence, or -1 if e is not in Y ⊔ Y'.
    int position(const GroundElement& e) const {
        if (e.side == Side::Row) {
            auto it = std::lower_bound(y_.begin(), y_.end(), e.index);
            if (it == y_.end() || *it != e.index) return -1;
            return static_cast<int>(it - y_.begin());
        }
        auto it = std::lower_bound(y_prime_.begin(), y_prime_.end(), e.index);
        if (it == y_prime_.end() || *it != e.index) return -1;
        return m() + (m_prime() - 1 - static_cast<int>(it - y_prime_.begin()));
    }

    friend bool operator==(const Context&, const Context&) = default;

private:
    friend Context make_context(int, int, std::vector<int>, std::vector<int>,
                                std::vector<int>, std::vector<int>);
    Context() = default;

    int n_ = 0;
    int n_prime_ = 0;
    IndexSet x_, y_, x_prime_, y_prime_;
};

inline Context make_context(int n, int n_prime, std::vector<int> x, std::vector<int> y,
                            std::vector<int> x_prime, std::vector<int> y_prime) {
    auto check_range = [](const std::vector<int>& v, int hi, const char* name) {
        for (int i : v)
            if (i < 1 || i > hi)
                throw RangeError(std::string(name) + " index " + std::to_string(i) +
                                 " outside [1," + std::to_string(hi) + "]");
    };
    if (n < 1 || n_prime < 1) throw RangeError("matrix dimensions must be positive");
    check_range(x, n, "X");
    check_range(y, n, "Y");
    check_range(x_prime, n_prime, "X'");
    check_range(y_prime, n_prime, "Y'");

    Context ctx;
    ctx.n_ = n;
    ctx.n_prime_ = n_prime;
    ctx.x_ = make_index_set(std::move(x));
    ctx.y_ = make_index_set(std::move(y));
    ctx.x_prime_ = make_index_set(std::move(x_prime));
    ctx.y_prime_ = make_index_set(std::move(y_prime));

    if (ctx.y_.empty() || ctx.y_prime_.empty()) throw EmptyYError("Y and Y' must be nonempty");
    if (!set_intersection(ctx.x_, ctx.y_).empty()) throw OverlapError("X and Y intersect");
    if (!set_intersection(ctx.x_prime_, ctx.y_prime_).empty())
        throw OverlapError("X' and Y' intersect");
    const auto lhs = 2 * ctx.x_.size() + ctx.y_.size();
    const auto rhs = 2 * ctx.x_prime_.size() + ctx.y_prime_.size();
    if (lhs != rhs)
        throw BalanceError("2|X|+|Y| = " + std::to_string(lhs) + " but 2|X'|+|Y'| = " +
                           std::to_string(rhs));
    return ctx;
}

// (C ⊆ Y, C' ⊆ Y'). Complements are derived from the context.
struct ProperPair {
    IndexSet c;
    IndexSet c_prime;

    friend bool operator==(const ProperPair&, const ProperPair&) = default;
    friend auto operator<=>(const ProperPair&, const ProperPair&) = default;
};

inline std::string to_string(const ProperPair& p) {
    return "(" + format_index_set(p.c) + "," + format_index_set(p.c_prime, true) + ")";
}

inline IndexSet complement_c(const Context& ctx, const ProperPair& p) {
    return set_difference(ctx.y(), p.c);
}
inline IndexSet complement_c_prime(const Context& ctx, const ProperPair& p) {
    return set_difference(ctx.y_prime(), p.c_prime);
}

// Row/column sets of the two minors of the quadratic term for p.
inline IndexSet rows_of(const Context& ctx, const ProperPair& p) { return set_union(ctx.x(), p.c); }
inline IndexSet cols_of(const Context& ctx, const ProperPair& p) {
    return set_union(ctx.x_prime(), p.c_prime);
}
inline IndexSet rows_of_complement(const Context& ctx, const ProperPair& p) {
    return set_union(ctx.x(), complement_c(ctx, p));
}
inline IndexSet cols_of_complement(const Context& ctx, const ProperPair& p) {
    return set_union(ctx.x_prime(), complement_c_prime(ctx, p));
}

inline bool is_proper(const Context& ctx, const IndexSet& c_raw, const IndexSet& c_prime_raw) {
    const IndexSet c = make_index_set(c_raw);
    const IndexSet cp = make_index_set(c_prime_raw);
    if (!is_subset(c, ctx.y())) throw RangeError("C " + format_index_set(c) + " is not a subset of Y");
    if (!is_subset(cp, ctx.y_prime()))
        throw RangeError("C' " + format_index_set(cp, true) + " is not a subset of Y'");
    const auto xs = ctx.x().size(), xps = ctx.x_prime().size();
    return xs + c.size() == xps + cp.size() &&
           xs + (ctx.y().size() - c.size()) == xps + (ctx.y_prime().size() - cp.size());
}

inline ProperPair make_proper_pair(const Context& ctx, std::vector<int> c, std::vector<int> c_prime) {
    ProperPair p{make_index_set(std::move(c)), make_index_set(std::move(c_prime))};
    if (!is_proper(ctx, p.c, p.c_prime))
        throw NotProperError(to_string(p) + " violates the cardinality balance");
    return p;
}

namespace detail {

// All k-subsets of `base` in lexicographic order.
inline void k_subsets(const IndexSet& base, std::size_t k, std::size_t start, IndexSet& cur,
                      std::vector<IndexSet>& out) {
    if (cur.size() == k) {
        out.push_back(cur);
        return;
    }
    for (std::size_t i = start; i + (k - cur.size()) <= base.size(); ++i) {
        cur.push_back(base[i]);
        k_subsets(base, k, i + 1, cur, out);
        cur.pop_back();
    }
}

inline std::vector<IndexSet> k_subsets(const IndexSet& base, std::size_t k) {
    std::vector<IndexSet> out;
    IndexSet cur;
    k_subsets(base, k, 0, cur, out);
    return out;
}

} // namespace detail

// All proper pairs, ordered by |C|, then C, then C' (lexicographic lists).
inline std::vector<ProperPair> proper_pairs(const Context& ctx) {
    std::vector<ProperPair> out;
    const int diff2 = ctx.m() - ctx.m_prime(); // = 2(|C| - |C'|)
    assert(diff2 % 2 == 0);
    const int shift = diff2 / 2;
    for (int k = 0; k <= ctx.m(); ++k) {
        const int kp = k - shift;
        if (kp < 0 || kp > ctx.m_prime()) continue;
        const auto cs = detail::k_subsets(ctx.y(), k);
        const auto cps = detail::k_subsets(ctx.y_prime(), kp);
        for (const auto& c : cs)
            for (const auto& cp : cps) out.push_back({c, cp});
    }
    return out;
}

// Crossing test for chords given by circular positions.
inline bool chords_cross(int a, int b, int c, int d) {
    if (a > b) std::swap(a, b);
    if (c > d) std::swap(c, d);
    return (a < c && c < b && b < d) || (c < a && a < d && d < b);
}

namespace detail {

struct ColoredGround {
    std::vector<GroundElement> elems;
    std::vector<bool> white;
};

inline ColoredGround colored_ground(const Context& ctx, const ProperPair& p) {
    ColoredGround g;
    g.elems = ctx.ground();
    g.white.resize(g.elems.size());
    for (std::size_t i = 0; i < g.elems.size(); ++i) {
        const auto& e = g.elems[i];
        const IndexSet& s = e.side == Side::Row ? p.c : p.c_prime;
        g.white[i] = std::binary_search(s.begin(), s.end(), e.index);
    }
    return g;
}

// A couple is admissible iff (same half) == (different colours).
inline bool admissible(const ColoredGround& g, int p, int q) {
    const bool same_half = g.elems[p].side == g.elems[q].side;
    const bool diff_colour = g.white[p] != g.white[q];
    return same_half == diff_colour;
}

using PositionMatching = std::vector<std::pair<int, int>>;

// Noncrossing admissible perfect matchings of the interval [l, r).
inline const std::vector<PositionMatching>&
interval_matchings(const ColoredGround& g, int l, int r,
                   std::map<std::pair<int, int>, std::vector<PositionMatching>>& memo) {
    auto key = std::make_pair(l, r);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::vector<PositionMatching> out;
    if (l >= r) {
        out.emplace_back();
    } else if ((r - l) % 2 == 0) {
        for (int j = l + 1; j < r; j += 2) {
            if (!admissible(g, l, j)) continue;
            const auto& inner = interval_matchings(g, l + 1, j, memo);
            if (inner.empty()) continue;
            const auto& outer = interval_matchings(g, j + 1, r, memo);
            for (const auto& a : inner)
                for (const auto& b : outer) {
                    PositionMatching m;
                    m.reserve(1 + a.size() + b.size());
                    m.emplace_back(l, j);
                    m.insert(m.end(), a.begin(), a.end());
                    m.insert(m.end(), b.begin(), b.end());
                    out.push_back(std::move(m));
                }
        }
    }
    return memo.emplace(key, std::move(out)).first->second;
}

} // namespace detail

inline void require_proper(const Context& ctx, const ProperPair& p) {
    if (!is_proper(ctx, p.c, p.c_prime))
        throw NotProperError(to_string(p) + " is not proper for the context");
}

// The set M_{C,C'}: noncrossing perfect matchings on Y ⊔ Y' where mixed-colour
// couples stay within one half and equal-colour couples join the halves.
inline std::vector<Matching> feasible_matchings(const Context& ctx, const ProperPair& p) {
    require_proper(ctx, p);
    const auto g = detail::colored_ground(ctx, p);
    const int size = static_cast<int>(g.elems.size());
    assert(size % 2 == 0);
    std::map<std::pair<int, int>, std::vector<detail::PositionMatching>> memo;
    const auto& raw = detail::interval_matchings(g, 0, size, memo);
    std::vector<Matching> out;
    out.reserve(raw.size());
    for (const auto& pm : raw) {
        std::vector<Couple> cs;
        cs.reserve(pm.size());
        for (auto [a, b] : pm) cs.emplace_back(g.elems[a], g.elems[b]);
        out.emplace_back(std::move(cs));
    }
    std::sort(out.begin(), out.end());
    return out;
}

// True iff m partitions Y ⊔ Y' into couples whose chords pairwise do not cross.
inline bool is_noncrossing_perfect(const Context& ctx, const Matching& m) {
    const int size = ctx.ground_size();
    if (static_cast<int>(m.couples.size()) * 2 != size) return false;
    std::vector<int> seen(size, 0);
    std::vector<std::pair<int, int>> pos;
    for (const auto& c : m.couples) {
        const int a = ctx.position(c.first), b = ctx.position(c.second);
        if (a < 0 || b < 0 || a == b) return false;
        if (seen[a]++ || seen[b]++) return false;
        pos.emplace_back(a, b);
    }
    for (std::size_t i = 0; i < pos.size(); ++i)
        for (std::size_t j = i + 1; j < pos.size(); ++j)
            if (chords_cross(pos[i].first, pos[i].second, pos[j].first, pos[j].second))
                return false;
    return true;
}

// Membership test M ∈ M_{C,C'} without enumerating.
inline bool is_feasible(const Context& ctx, const ProperPair& p, const Matching& m) {
    if (!is_noncrossing_perfect(ctx, m)) return false;
    const auto g = detail::colored_ground(ctx, p);
    for (const auto& c : m.couples)
        if (!detail::admissible(g, ctx.position(c.first), ctx.position(c.second))) return false;
    return true;
}

// Swaps the colours of every element covered by m0, a subset of m.
inline ProperPair exchange([[maybe_unused]] const Context& ctx, const ProperPair& p, const Matching& m,
                           const std::vector<Couple>& m0) {
    IndexSet rows, cols;
    for (const auto& c : m0) {
        if (!m.contains(c))
            throw NotSubsetError("couple " + to_string(c.first) + "-" + to_string(c.second) +
                                 " is not in the matching");
        for (const auto& e : {c.first, c.second})
            (e.side == Side::Row ? rows : cols).push_back(e.index);
    }
    ProperPair out{set_symmetric_difference(p.c, make_index_set(rows)),
                   set_symmetric_difference(p.c_prime, make_index_set(cols))};
    assert(is_proper(ctx, out.c, out.c_prime));
    return out;
}

// Multiset of proper pairs.
struct FamilyEntry {
    ProperPair pair;
    std::uint64_t multiplicity = 1;

    friend bool operator==(const FamilyEntry&, const FamilyEntry&) = default;
};

using Family = std::vector<FamilyEntry>;

inline void validate_family(const Context& ctx, const Family& fam) {
    for (const auto& e : fam) {
        if (e.multiplicity == 0) throw NotProperError("multiplicity must be positive");
        require_proper(ctx, e.pair);
    }
}

using MatchingCounts = std::map<Matching, std::uint64_t>;

// #_M(F) for every matching M occurring in the family.
inline MatchingCounts matching_multiset(const Context& ctx, const Family& fam) {
    MatchingCounts counts;
    std::map<ProperPair, std::vector<Matching>> cache;
    for (const auto& e : fam) {
        auto it = cache.find(e.pair);
        if (it == cache.end()) it = cache.emplace(e.pair, feasible_matchings(ctx, e.pair)).first;
        for (const auto& m : it->second) counts[m] += e.multiplicity;
    }
    return counts;
}

enum class Status { Universal, NotUniversal };

inline const char* to_string(Status s) {
    return s == Status::Universal ? "Universal" : "NotUniversal";
}

struct CountPair {
    std::uint64_t in_a = 0;
    std::uint64_t in_b = 0;

    friend bool operator==(const CountPair&, const CountPair&) = default;
};

struct Verdict {
    Status status = Status::Universal;
    std::optional<Matching> witness;
    std::map<Matching, CountPair> counts;

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

// Universal iff #_M(A) >= #_M(B) for every M occurring in B. The witness
// minimises #_M(A) - #_M(B), ties going to the least matching.
inline Verdict check_universal(const Context& ctx, const Family& a, const Family& b) {
    validate_family(ctx, a);
    validate_family(ctx, b);
    Verdict v;
    for (const auto& [m, k] : matching_multiset(ctx, a)) v.counts[m].in_a = k;
    for (const auto& [m, k] : matching_multiset(ctx, b)) v.counts[m].in_b = k;
    std::uint64_t worst_deficit = 0;
    // Map iteration is in matching order, so strict '>' keeps the least on ties.
    for (const auto& [m, c] : v.counts) {
        if (c.in_a >= c.in_b) continue;
        const auto deficit = c.in_b - c.in_a;
        if (deficit > worst_deficit) {
            worst_deficit = deficit;
            v.witness = m;
        }
    }
    v.status = v.witness ? Status::NotUniversal : Status::Universal;
    return v;
}

// Order-preserving relabelling onto Y = [m], Y' = [m'] with min(|X|,|X'|) = 0.
struct Canonical {
    Context ctx;
    Family a;
    Family b;
    std::map<int, int> row_map; // old Y index -> new
    std::map<int, int> col_map; // old Y' index -> new
};

inline Matching relabel(const Matching& m, const Canonical& c) {
    std::vector<Couple> cs;
    auto map_elem = [&](const GroundElement& e) {
        return e.side == Side::Row ? row(c.row_map.at(e.index)) : col(c.col_map.at(e.index));
    };
    for (const auto& cp : m.couples) cs.emplace_back(map_elem(cp.first), map_elem(cp.second));
    return Matching(std::move(cs));
}

inline Canonical canonicalize(const Context& ctx, const Family& a, const Family& b) {
    validate_family(ctx, a);
    validate_family(ctx, b);
    std::map<int, int> row_map, col_map;
    for (int i = 0; i < ctx.m(); ++i) row_map[ctx.y()[i]] = i + 1;
    for (int j = 0; j < ctx.m_prime(); ++j) col_map[ctx.y_prime()[j]] = j + 1;

    const int drop = static_cast<int>(std::min(ctx.x().size(), ctx.x_prime().size()));
    const int xs = static_cast<int>(ctx.x().size()) - drop;
    const int xps = static_cast<int>(ctx.x_prime().size()) - drop;
    std::vector<int> x, xp, y, yp;
    for (int i = 1; i <= ctx.m(); ++i) y.push_back(i);
    for (int j = 1; j <= ctx.m_prime(); ++j) yp.push_back(j);
    for (int i = 1; i <= xs; ++i) x.push_back(ctx.m() + i);
    for (int j = 1; j <= xps; ++j) xp.push_back(ctx.m_prime() + j);

    auto map_family = [&](const Family& f) {
        Family out;
        for (const auto& e : f) {
            ProperPair p;
            for (int i : e.pair.c) p.c.push_back(row_map.at(i));
            for (int j : e.pair.c_prime) p.c_prime.push_back(col_map.at(j));
            p.c = make_index_set(p.c);
            p.c_prime = make_index_set(p.c_prime);
            out.push_back({p, e.multiplicity});
        }
        return out;
    };
    return Canonical{make_context(ctx.m() + xs, ctx.m_prime() + xps, x, y, xp, yp),
                     map_family(a), map_family(b), row_map, col_map};
}

} // namespace tnn
