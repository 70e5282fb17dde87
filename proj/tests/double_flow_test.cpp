#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace tnn;

namespace {

// Exhaustive law check of every double flow for the given proper pairs of ctx
// on h. Returns the number of double flows seen.
std::size_t check_all(const HatNetwork& h, const Weighting& hw, const Matrix& q, const Context& ctx,
                      const std::vector<ProperPair>& pairs) {
    std::size_t seen = 0;
    const std::size_t want_paths = static_cast<std::size_t>(ctx.m() + ctx.m_prime()) / 2;
    std::map<Matching, Rational> first_group;
    for (const auto& p : pairs) {
        std::map<Matching, Rational> groups;
        Rational total = 0;
        for (const auto& df : double_flows(h, ctx, p)) {
            ++seen;
            const auto dec = decompose(h, ctx, df);
            EXPECT_EQ(dec.paths.size(), want_paths);
            for (const auto& path : dec.paths) {
                EXPECT_TRUE(alternates(h.net, path));
                EXPECT_FALSE(path.edges.empty());
            }
            for (const auto& c : dec.circuits) EXPECT_TRUE(alternates(h.net, c));
            const auto m = matching_of(dec);
            EXPECT_TRUE(oracle::feasible(ctx, p).count(m)) << to_string(p) << " " << to_string(m);
            const Rational wt = flow_weight(df.phi, hw) * flow_weight(df.phi_prime, hw);
            groups[m] += wt;
            total += wt;
            for (std::size_t mask = 0; mask < (std::size_t{1} << m.couples.size()); ++mask) {
                std::vector<Couple> sub;
                for (std::size_t k = 0; k < m.couples.size(); ++k)
                    if (mask >> k & 1) sub.push_back(m.couples[k]);
                const auto psi = switch_double_flow(h, ctx, df, sub);
                EXPECT_EQ(psi.pair, exchange(ctx, p, m, sub));
                EXPECT_EQ(edge_multiset(h, psi), edge_multiset(h, df));
                EXPECT_EQ(matching_of(h, ctx, psi), m);
                EXPECT_EQ(switch_double_flow(h, ctx, psi, sub), df);
            }
        }
        const Rational product = oracle::cofactor_minor(q, rows_of(ctx, p), cols_of(ctx, p)) *
                                 oracle::cofactor_minor(q, rows_of_complement(ctx, p), cols_of_complement(ctx, p));
        EXPECT_EQ(total, product) << to_string(p);
        for (const auto& m : feasible_matchings(ctx, p)) {
            const Rational wt = groups.count(m) ? groups[m] : Rational(0);
            auto [it, fresh] = first_group.emplace(m, wt);
            if (!fresh) {
                EXPECT_EQ(it->second, wt) << to_string(m);
            }
        }
    }
    return seen;
}

} // namespace

TEST(DoubleFlow, SmallExampleContext) {
    // X = ∅, X' = {1'}, Y = {1,2,3}, Y' = {2'}, C = {1,3}, C' = {2'}
    const auto ctx = make_context(3, 2, {}, {1, 2, 3}, {1}, {2});
    const auto p = make_proper_pair(ctx, {1, 3}, {2});
    // 1, 3 and 2' are white, 2 is black: admissible couples are 1-2 and
    // 2-3 on one side, 1-2' and 3-2' across.
    const std::set<Couple> allowed{Couple(row(1), row(2)), Couple(row(2), row(3)),
                                   Couple(row(1), col(2)), Couple(row(3), col(2))};
    const auto ms = feasible_matchings(ctx, p);
    ASSERT_EQ(ms.size(), 2u);
    for (const auto& m : ms) {
        // On the witness network for m the double flow is unique and reads back m.
        const auto g = build_witness_network(ctx, m);
        const auto h = hat_transform(g);
        const auto dfs = double_flows(h, ctx, p);
        ASSERT_EQ(dfs.size(), 1u);
        const auto& df = dfs[0];
        EXPECT_EQ(df.phi.rows, (IndexSet{1, 3}));
        EXPECT_EQ(df.phi.cols, (IndexSet{1, 2}));
        EXPECT_EQ(df.phi_prime.rows, (IndexSet{2}));
        EXPECT_EQ(df.phi_prime.cols, (IndexSet{1}));
        const auto dec = decompose(h, ctx, df);
        ASSERT_EQ(dec.paths.size(), 2u);
        for (const auto& path : dec.paths) EXPECT_TRUE(allowed.count(path.ends));
        EXPECT_EQ(matching_of(dec), m);
        const auto w = unit_weights(g);
        const auto pairs = proper_pairs(ctx);
        const auto feasible_for = std::count_if(pairs.begin(), pairs.end(),
                                                [&](const ProperPair& q) { return is_feasible(ctx, q, m); });
        EXPECT_EQ(check_all(h, hat_weighting(h, w), lindstrom_matrix(g, w), ctx, pairs),
                  static_cast<std::size_t>(feasible_for));
    }
}

TEST(DoubleFlow, PathClassesMatchColours) {
    const auto ctx = make_context(3, 3, {}, {1, 2, 3}, {3}, {1});
    const auto g = staircase_network(3, 3);
    const auto h = hat_transform(g);
    for (const auto& p : proper_pairs(ctx))
        for (const auto& df : double_flows(h, ctx, p))
            for (const auto& path : decompose(h, ctx, df).paths) {
                auto white = [&](const GroundElement& e) {
                    return detail::contains(e.side == Side::Row ? p.c : p.c_prime, e.index);
                };
                const auto [a, b] = std::pair{path.ends.first, path.ends.second};
                switch (path.cls) {
                case PathClass::CCbar:
                    EXPECT_TRUE(a.side == Side::Row && b.side == Side::Row && white(a) != white(b));
                    break;
                case PathClass::CprimeCbarPrime:
                    EXPECT_TRUE(a.side == Side::Col && b.side == Side::Col && white(a) != white(b));
                    break;
                case PathClass::CCprime:
                    EXPECT_TRUE(a.side != b.side && white(a) && white(b));
                    break;
                case PathClass::CbarCbarPrime:
                    EXPECT_TRUE(a.side != b.side && !white(a) && !white(b));
                    break;
                }
            }
}

TEST(DoubleFlow, RandomSmallNetworks) {
    SplitMix64 rng(5);
    std::size_t total = 0, networks = 0;
    for (int trial = 0; trial < 400 && networks < 40; ++trial) {
        const auto g = random_planar_network(rng, 10);
        const auto ctx = detail::random_context(rng, g.n(), g.n_prime());
        if (!ctx) continue;
        const auto h = hat_transform(g);
        const auto w = random_weights(rng, g);
        const auto seen = check_all(h, hat_weighting(h, w), lindstrom_matrix(g, w), *ctx, proper_pairs(*ctx));
        total += seen;
        networks += seen > 0;
    }
    EXPECT_EQ(networks, 40u);
    EXPECT_GT(total, 100u);
}

TEST(DoubleFlow, Errors) {
    const auto ctx = make_context(2, 2, {}, {1, 2}, {}, {1, 2});
    const auto h = hat_transform(staircase_network(3, 2));
    EXPECT_THROW(double_flows(h, ctx, make_proper_pair(ctx, {1}, {1})), DimensionError);
    const auto h2 = hat_transform(staircase_network(2, 2));
    const auto p = make_proper_pair(ctx, {1}, {1});
    const auto dfs = double_flows(h2, ctx, p);
    ASSERT_FALSE(dfs.empty());
    const auto m = matching_of(h2, ctx, dfs[0]);
    for (const auto& other : {Couple(row(1), row(2)), Couple(row(1), col(1)), Couple(row(1), col(2))})
        if (!m.contains(other)) {
            EXPECT_THROW(switch_double_flow(h2, ctx, dfs[0], {other}), NotSubsetError);
        }
}
