#pragma once

// Counterexample construction for non-universal inequalities: a planar
// network whose unit-weight flows single out one matching, and the
// certificate built from its path matrix.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tnn/core_model.hpp"
#include "tnn/flows.hpp"
#include "tnn/inequality.hpp"

namespace tnn {

// A proper pair on which the network disagrees with the matching.
struct P1P2Failure {
    ProperPair pair;
    bool feasible = false;
    std::size_t flows = 0;            // capped at 2
    std::size_t complement_flows = 0; // capped at 2
};

inline std::string to_string(const P1P2Failure& f) {
    return to_string(f.pair) + (f.feasible ? " (feasible)" : " (infeasible)") + ": " +
           std::to_string(f.flows) + " and " + std::to_string(f.complement_flows) + " flows";
}

// First proper pair violating: unique flows on both sides when m is feasible,
// an empty side otherwise.
inline std::optional<P1P2Failure> find_p1p2_failure(const Context& ctx, const Matching& m,
                                                    const PlanarNetwork& g) {
    require_valid(g);
    if (g.n() != ctx.n() || g.n_prime() != ctx.n_prime())
        throw DimensionError("network terminals do not match the context");
    for (const auto& p : proper_pairs(ctx)) {
        const bool feasible = is_feasible(ctx, p, m);
        const auto a = count_flows(g, rows_of(ctx, p), cols_of(ctx, p), 2);
        if (!feasible && a == 0) continue;
        const auto b = count_flows(g, rows_of_complement(ctx, p), cols_of_complement(ctx, p), 2);
        const bool ok = feasible ? (a == 1 && b == 1) : (a == 0 || b == 0);
        if (!ok) return P1P2Failure{p, feasible, a, b};
    }
    return std::nullopt;
}

inline bool verify_p1p2(const Context& ctx, const Matching& m, const PlanarNetwork& g) {
    return !find_p1p2_failure(ctx, m, g);
}

namespace detail {

// Straight-line layout of the union of one double flow realising m.
//
// Sources sit on x = 0, sinks on x = W, and the cross couples of m are drawn
// as horizontal lines that cut the picture into bands. On the left, each
// row-row couple becomes a merge chain that collects the units of everything
// nested inside it and passes one more unit outwards; X sources are single
// units. Column-column couples on the right mirror this and consume units.
// Inside a band, units travel along straight bridges from the left edge to
// the right edge of a rectangle; surplus or deficit is carried across a cross
// line by alternating merge/split events on it. All bridge endpoints of a
// band sit on its rectangle, so a noncrossing pairing gives a plane drawing.
class WitnessBuilder {
public:
    WitnessBuilder(const Context& ctx, const Matching& m) : ctx_(ctx), m_(m) {}

    PlanarNetwork build() {
        classify();
        place_terminals_y();
        compute_depths();
        collect_bands();
        compute_transfers();
        place_x();
        create_terminals();
        for (auto& band : bands_) build_band_items(band);
        build_cross_lines();
        for (std::size_t i = 0; i < bands_.size(); ++i) route_band(i);
        for (auto& v : g_.vertices) v.pos.y = -v.pos.y;
        return std::move(g_);
    }

private:
    struct Band {
        int row_lo, row_hi, col_lo, col_hi; // exclusive bounds
        Rational top, bottom;
        std::vector<int> emitters;  // left edge, top to bottom
        std::vector<int> absorbers; // right edge, top to bottom
        int surplus = 0;
    };
    struct CrossLine {
        int row, col;
        Rational y;
        long transfer = 0; // > 0 carries units downwards
        std::vector<int> merges, splits;
    };

    void classify() {
        for (const auto& c : m_.couples) {
            const auto& a = c.first;
            const auto& b = c.second;
            if (a.side == Side::Row && b.side == Side::Row) {
                row_partner_[a.index] = b.index;
                row_partner_[b.index] = a.index;
            } else if (a.side == Side::Col && b.side == Side::Col) {
                col_partner_[a.index] = b.index;
                col_partner_[b.index] = a.index;
            } else {
                const int r = a.side == Side::Row ? a.index : b.index;
                const int k = a.side == Side::Col ? a.index : b.index;
                crosses_.push_back({r, k, Rational(0), 0, {}, {}});
            }
        }
        std::sort(crosses_.begin(), crosses_.end(), [](const CrossLine& p, const CrossLine& q) { return p.row < q.row; });
        for (std::size_t i = 1; i < crosses_.size(); ++i)
            if (crosses_[i].col <= crosses_[i - 1].col)
                throw InfeasibleMatchingError("cross couples of the matching intersect");
        is_x_row_.insert(ctx_.x().begin(), ctx_.x().end());
        is_x_col_.insert(ctx_.x_prime().begin(), ctx_.x_prime().end());
    }

    // Rows and columns of one band share a vertical interval; a cross couple's
    // row and column get the same height.
    void place_terminals_y() {
        row_y_.assign(ctx_.n() + 1, Rational(0));
        col_y_.assign(ctx_.n_prime() + 1, Rational(0));
        std::vector<int> rb{0}, cb{0};
        for (const auto& c : crosses_) {
            rb.push_back(c.row);
            cb.push_back(c.col);
        }
        rb.push_back(ctx_.n() + 1);
        cb.push_back(ctx_.n_prime() + 1);
        Rational h = 0;
        for (std::size_t i = 0; i + 1 < rb.size(); ++i) {
            const int rows = rb[i + 1] - rb[i] - 1;
            const int cols = cb[i + 1] - cb[i] - 1;
            const Rational span = std::max(rows, cols) + 1;
            for (int k = 1; k <= rows; ++k) row_y_[rb[i] + k] = h + span * k / (rows + 1);
            for (int k = 1; k <= cols; ++k) col_y_[cb[i] + k] = h + span * k / (cols + 1);
            Band b{rb[i], rb[i + 1], cb[i], cb[i + 1], h, h + span, {}, {}, 0};
            bands_.push_back(b);
            h += span;
            if (i < crosses_.size()) {
                crosses_[i].y = h;
                row_y_[crosses_[i].row] = h;
                col_y_[crosses_[i].col] = h;
            }
        }
    }

    // Nesting depth of same-side couples.
    void compute_depths() {
        auto depth_of = [](const std::map<int, int>& partner, int limit) {
            int best = -1, open = 0;
            for (int i = 1; i <= limit; ++i) {
                auto it = partner.find(i);
                if (it == partner.end()) continue;
                if (it->second > i) best = std::max(best, open++);
                else --open;
            }
            return best;
        };
        left_depth_ = depth_of(row_partner_, ctx_.n());
        right_depth_ = depth_of(col_partner_, ctx_.n_prime());
    }

    void collect_bands() {
        for (auto& b : bands_) {
            for (int r = b.row_lo + 1; r < b.row_hi; ++r) {
                if (is_x_row_.count(r)) ++b.surplus;
                auto it = row_partner_.find(r);
                if (it != row_partner_.end() && it->second > r) {
                    b.surplus += 1 + inner_supply(r, it->second, row_partner_, is_x_row_);
                    r = it->second;
                }
            }
            for (int c = b.col_lo + 1; c < b.col_hi; ++c) {
                if (is_x_col_.count(c)) --b.surplus;
                auto it = col_partner_.find(c);
                if (it != col_partner_.end() && it->second > c) {
                    b.surplus -= 1 + inner_supply(c, it->second, col_partner_, is_x_col_);
                    c = it->second;
                }
            }
        }
    }

    // Units entering the chain of couple {a, b} from inside it.
    static int inner_supply(int a, int b, const std::map<int, int>& partner, const std::set<int>& is_x) {
        int units = 0;
        for (int r = a + 1; r < b; ++r) {
            if (is_x.count(r)) ++units;
            auto it = partner.find(r);
            if (it != partner.end() && it->second > r) {
                units += 1 + inner_supply(r, it->second, partner, is_x);
                r = it->second;
            }
        }
        return units;
    }

    void compute_transfers() {
        long running = 0;
        for (std::size_t i = 0; i < crosses_.size(); ++i) {
            running += bands_[i].surplus;
            crosses_[i].transfer = running;
            max_transfer_ = std::max(max_transfer_, std::abs(running));
        }
        running += bands_.back().surplus;
        if (running != 0) throw InfeasibleMatchingError("matching does not balance X against X'");
    }

    void place_x() {
        x_left_ = std::max(1, left_depth_ + 1);
        x_right_ = x_left_ + 2 + 2 * max_transfer_;
        width_ = x_right_ + std::max(1, right_depth_ + 1);
    }

    int vertex(const Rational& x, const Rational& y) {
        return g_.add_vertex("w" + std::to_string(counter_++), x, y);
    }

    void create_terminals() {
        for (int i = 1; i <= ctx_.n(); ++i) g_.sources.push_back(g_.add_vertex("s" + std::to_string(i), 0, row_y_[i]));
        for (int j = 1; j <= ctx_.n_prime(); ++j)
            g_.sinks.push_back(g_.add_vertex("t" + std::to_string(j), width_, col_y_[j]));
    }

    const Rational& y_of(int v) const { return g_.vertices[v].pos.y; }

    // Merge chain of rows {a, b} at nesting depth d; returns its outward
    // merge vertices, top to bottom.
    std::vector<int> left_chain(int a, int b, int d) {
        std::vector<int> inner;
        for (int r = a + 1; r < b; ++r) {
            if (is_x_row_.count(r)) inner.push_back(g_.sources[r - 1]);
            auto it = row_partner_.find(r);
            if (it != row_partner_.end() && it->second > r) {
                const auto sub = left_chain(r, it->second, d + 1);
                inner.insert(inner.end(), sub.begin(), sub.end());
                r = it->second;
            }
        }
        const Rational x = x_left_ - d;
        std::vector<int> merges;
        merges.push_back(vertex(x, (row_y_[a] + row_y_[a + 1]) / 2));
        for (std::size_t j = 0; j < inner.size(); ++j) {
            const int s = vertex(x, y_of(inner[j]));
            g_.add_edge(inner[j], s);
            g_.add_edge(s, merges.back());
            const Rational next = j + 1 < inner.size() ? (y_of(inner[j]) + y_of(inner[j + 1])) / 2
                                                       : (row_y_[b - 1] + row_y_[b]) / 2;
            merges.push_back(vertex(x, next));
            g_.add_edge(s, merges.back());
        }
        g_.add_edge(g_.sources[a - 1], merges.front());
        g_.add_edge(g_.sources[b - 1], merges.back());
        return merges;
    }

    // Split chain of columns {a, b}; returns its outward split vertices.
    std::vector<int> right_chain(int a, int b, int d) {
        std::vector<int> inner;
        for (int c = a + 1; c < b; ++c) {
            if (is_x_col_.count(c)) inner.push_back(g_.sinks[c - 1]);
            auto it = col_partner_.find(c);
            if (it != col_partner_.end() && it->second > c) {
                const auto sub = right_chain(c, it->second, d + 1);
                inner.insert(inner.end(), sub.begin(), sub.end());
                c = it->second;
            }
        }
        const Rational x = x_right_ + d;
        std::vector<int> splits;
        splits.push_back(vertex(x, (col_y_[a] + col_y_[a + 1]) / 2));
        for (std::size_t j = 0; j < inner.size(); ++j) {
            const int mv = vertex(x, y_of(inner[j]));
            g_.add_edge(mv, inner[j]);
            g_.add_edge(splits.back(), mv);
            const Rational next = j + 1 < inner.size() ? (y_of(inner[j]) + y_of(inner[j + 1])) / 2
                                                       : (col_y_[b - 1] + col_y_[b]) / 2;
            splits.push_back(vertex(x, next));
            g_.add_edge(splits.back(), mv);
        }
        g_.add_edge(splits.front(), g_.sinks[a - 1]);
        g_.add_edge(splits.back(), g_.sinks[b - 1]);
        return splits;
    }

    void build_band_items(Band& b) {
        for (int r = b.row_lo + 1; r < b.row_hi; ++r) {
            if (is_x_row_.count(r)) {
                const int relay = vertex(x_left_, row_y_[r]);
                g_.add_edge(g_.sources[r - 1], relay);
                b.emitters.push_back(relay);
            }
            auto it = row_partner_.find(r);
            if (it != row_partner_.end() && it->second > r) {
                const auto ms = left_chain(r, it->second, 0);
                b.emitters.insert(b.emitters.end(), ms.begin(), ms.end());
                r = it->second;
            }
        }
        for (int c = b.col_lo + 1; c < b.col_hi; ++c) {
            if (is_x_col_.count(c)) {
                const int relay = vertex(x_right_, col_y_[c]);
                g_.add_edge(relay, g_.sinks[c - 1]);
                b.absorbers.push_back(relay);
            }
            auto it = col_partner_.find(c);
            if (it != col_partner_.end() && it->second > c) {
                const auto ss = right_chain(c, it->second, 0);
                b.absorbers.insert(b.absorbers.end(), ss.begin(), ss.end());
                c = it->second;
            }
        }
    }

    // s -> M1 <- S1 -> M2 <- ... -> Mk <- Sk -> t along the line of the couple.
    void build_cross_lines() {
        for (auto& c : crosses_) {
            const int s = g_.sources[c.row - 1], t = g_.sinks[c.col - 1];
            const long k = std::abs(c.transfer);
            if (k == 0) {
                g_.add_edge(s, t);
                continue;
            }
            for (long j = 0; j < k; ++j) {
                c.merges.push_back(vertex(x_left_ + 1 + 2 * j, c.y));
                c.splits.push_back(vertex(x_left_ + 2 + 2 * j, c.y));
            }
            g_.add_edge(s, c.merges.front());
            for (long j = 0; j < k; ++j) {
                g_.add_edge(c.splits[j], c.merges[j]);
                if (j + 1 < k) g_.add_edge(c.splits[j], c.merges[j + 1]);
            }
            g_.add_edge(c.splits.back(), t);
        }
    }

    // Pairs the unit supplies and demands around the band rectangle without
    // crossings and joins each pair by a straight bridge.
    void route_band(std::size_t i) {
        const Band& b = bands_[i];
        std::vector<std::pair<int, int>> cycle; // (vertex, +1 supply / -1 demand)
        if (i > 0) {
            const auto& above = crosses_[i - 1];
            if (above.transfer > 0)
                for (int v : above.merges) cycle.push_back({v, +1});
            else
                for (int v : above.splits) cycle.push_back({v, -1});
        }
        for (int v : b.absorbers) cycle.push_back({v, -1});
        if (i < crosses_.size()) {
            const auto& below = crosses_[i];
            if (below.transfer > 0)
                for (auto it = below.splits.rbegin(); it != below.splits.rend(); ++it) cycle.push_back({*it, -1});
            else
                for (auto it = below.merges.rbegin(); it != below.merges.rend(); ++it) cycle.push_back({*it, +1});
        }
        for (auto it = b.emitters.rbegin(); it != b.emitters.rend(); ++it) cycle.push_back({*it, +1});

        std::vector<std::pair<int, int>> stack;
        for (const auto& p : cycle) {
            if (!stack.empty() && stack.back().second != p.second) {
                const auto q = stack.back();
                stack.pop_back();
                if (q.second > 0) g_.add_edge(q.first, p.first);
                else g_.add_edge(p.first, q.first);
            } else {
                stack.push_back(p);
            }
        }
        if (!stack.empty()) throw ConstructionFailure("band " + std::to_string(i) + " is unbalanced");
    }

    const Context& ctx_;
    const Matching& m_;
    PlanarNetwork g_;
    int counter_ = 0;
    std::map<int, int> row_partner_, col_partner_;
    std::set<int> is_x_row_, is_x_col_;
    std::vector<CrossLine> crosses_;
    std::vector<Band> bands_;
    std::vector<Rational> row_y_, col_y_;
    int left_depth_ = -1, right_depth_ = -1;
    long max_transfer_ = 0;
    long x_left_ = 1, x_right_ = 3, width_ = 4;
};

inline bool within_size_bound(const Context& ctx, const PlanarNetwork& g) {
    const long bound = static_cast<long>(ctx.n() + ctx.n_prime()) * (ctx.n() + ctx.n_prime());
    return g.vertex_count() < bound;
}

inline bool acceptable(const Context& ctx, const Matching& m, const PlanarNetwork& g) {
    return validate_network(g).ok() && within_size_bound(ctx, g) && verify_p1p2(ctx, m, g);
}

} // namespace detail

inline PlanarNetwork layout_witness_network(const Context& ctx, const Matching& m) {
    if (!is_noncrossing_perfect(ctx, m))
        throw InfeasibleMatchingError(to_string(m) + " is not a noncrossing perfect matching on Y and Y'");
    return detail::WitnessBuilder(ctx, m).build();
}

// Exhaustive search over edge subsets of a small layered grid, used when the
// layout does not verify. Gives up beyond `max_edges` candidate edges.
inline std::optional<PlanarNetwork> search_witness_network(const Context& ctx, const Matching& m,
                                                           std::size_t max_edges = 16) {
    const int k = std::max(1, ctx.n() + ctx.n_prime() - 1);
    PlanarNetwork grid;
    const int rows = std::max(ctx.n(), ctx.n_prime());
    std::vector<std::vector<int>> at(k + 2, std::vector<int>(rows + 1, -1));
    for (int i = 1; i <= ctx.n(); ++i) {
        at[0][i] = grid.add_vertex("s" + std::to_string(i), 0, -i);
        grid.sources.push_back(at[0][i]);
    }
    for (int c = 1; c <= k; ++c)
        for (int r = 1; r <= rows; ++r) at[c][r] = grid.add_vertex("g" + std::to_string(c) + "_" + std::to_string(r), c, -r);
    for (int j = 1; j <= ctx.n_prime(); ++j) {
        at[k + 1][j] = grid.add_vertex("t" + std::to_string(j), k + 1, -j);
        grid.sinks.push_back(at[k + 1][j]);
    }
    std::vector<Edge> candidates;
    for (int c = 0; c <= k; ++c)
        for (int r = 1; r <= rows; ++r) {
            if (at[c][r] < 0) continue;
            for (int r2 : {r - 1, r, r + 1}) {
                if (r2 < 1 || r2 > rows || at[c + 1][r2] < 0) continue;
                // one diagonal direction per gap keeps every subset plane
                if (r2 != r && (r2 < r) != (c % 2 == 0)) continue;
                candidates.push_back({at[c][r], at[c + 1][r2]});
            }
        }
    if (candidates.size() > max_edges) return std::nullopt;
    const std::uint64_t total = std::uint64_t{1} << candidates.size();
    for (std::uint64_t mask = 1; mask < total; ++mask) {
        PlanarNetwork g = grid;
        g.edges.clear();
        for (std::size_t e = 0; e < candidates.size(); ++e)
            if (mask >> e & 1) g.edges.push_back(candidates[e]);
        g = prune_network(g);
        if (detail::acceptable(ctx, m, g)) return g;
    }
    return std::nullopt;
}

inline PlanarNetwork build_witness_network(const Context& ctx, const Matching& m) {
    auto g = layout_witness_network(ctx, m);
    if (detail::acceptable(ctx, m, g)) return g;
    if (auto found = search_witness_network(ctx, m)) return *found;
    throw ConstructionFailure("no verified witness network for " + to_string(m));
}

struct WitnessCertificate {
    Matching matching;
    PlanarNetwork network;
    Matrix matrix;
    Rational lhs;
    std::uint64_t count_a = 0;
    std::uint64_t count_b = 0;
    Rational positive_sum; // A-part of the inequality at `matrix`
    Rational negative_sum; // B-part

    friend bool operator==(const WitnessCertificate&, const WitnessCertificate&) = default;
};

inline WitnessCertificate build_counterexample(const Context& ctx, const Family& a, const Family& b,
                                               const Verdict& verdict) {
    if (verdict.status == Status::Universal || !verdict.witness)
        throw IsUniversalError("the inequality holds for every TNN matrix; there is nothing to refute");
    WitnessCertificate cert;
    cert.matching = *verdict.witness;
    cert.network = build_witness_network(ctx, cert.matching);
    cert.matrix = lindstrom_matrix(cert.network, unit_weights(cert.network));
    cert.positive_sum = quadratic_sum(cert.matrix, ctx, a);
    cert.negative_sum = quadratic_sum(cert.matrix, ctx, b);
    cert.lhs = cert.positive_sum - cert.negative_sum;
    const auto& counts = verdict.counts.at(cert.matching);
    cert.count_a = counts.in_a;
    cert.count_b = counts.in_b;
    if (cert.positive_sum != Rational(static_cast<unsigned long>(cert.count_a)) ||
        cert.negative_sum != Rational(static_cast<unsigned long>(cert.count_b)))
        throw StructureError("witness network does not reproduce the matching counts");
    return cert;
}

inline WitnessCertificate build_counterexample(const Context& ctx, const Family& a, const Family& b) {
    return build_counterexample(ctx, a, b, check_universal(ctx, a, b));
}

} // namespace tnn
