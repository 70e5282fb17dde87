#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace tnn;

namespace {

// s1 -> t1 directly.
PlanarNetwork single_edge() {
    PlanarNetwork g;
    const int s = g.add_vertex("s1", 0, 0);
    const int t = g.add_vertex("t1", 1, 0);
    g.sources = {s};
    g.sinks = {t};
    g.add_edge(s, t);
    return g;
}

// Two sources on the left, two sinks on the right, one shared middle vertex.
PlanarNetwork diamond() {
    PlanarNetwork g;
    const int s1 = g.add_vertex("s1", 0, 1);
    const int s2 = g.add_vertex("s2", 0, -1);
    const int v = g.add_vertex("v", 1, 0);
    const int t1 = g.add_vertex("t1", 2, 1);
    const int t2 = g.add_vertex("t2", 2, -1);
    g.sources = {s1, s2};
    g.sinks = {t1, t2};
    g.add_edge(s1, v);
    g.add_edge(s2, v);
    g.add_edge(v, t1);
    g.add_edge(v, t2);
    return g;
}

} // namespace

TEST(Validate, AcceptsSimpleNetworks) {
    EXPECT_TRUE(validate_network(single_edge()).ok());
    EXPECT_TRUE(validate_network(diamond()).ok()) << validate_network(diamond()).summary();
    for (int n = 1; n <= 4; ++n)
        for (int np = 1; np <= 4; ++np) EXPECT_TRUE(validate_network(staircase_network(n, np)).ok());
}

TEST(Validate, DetectsCycle) {
    auto g = diamond();
    const int w = g.add_vertex("w", 1, 2);
    g.add_edge(g.find_vertex("t1"), w);
    g.add_edge(w, g.find_vertex("s1"));
    const auto rep = validate_network(g);
    EXPECT_TRUE(rep.has(Violation::Kind::Cycle));
}

TEST(Validate, DetectsCrossing) {
    PlanarNetwork g;
    const int s1 = g.add_vertex("s1", 0, 1);
    const int s2 = g.add_vertex("s2", 0, -1);
    const int t1 = g.add_vertex("t1", 2, 1);
    const int t2 = g.add_vertex("t2", 2, -1);
    g.sources = {s1, s2};
    g.sinks = {t1, t2};
    g.add_edge(s1, t2);
    g.add_edge(s2, t1);
    EXPECT_TRUE(validate_network(g).has(Violation::Kind::Crossing));
}

TEST(Validate, DetectsTerminalOrder) {
    auto g = diamond();
    std::swap(g.sinks[0], g.sinks[1]);
    EXPECT_TRUE(validate_network(g).has(Violation::Kind::TerminalOrder));
}

TEST(Validate, DetectsRedundantEdge) {
    auto g = single_edge();
    const int v = g.add_vertex("v", 0, 1);
    g.add_edge(v, g.sinks[0]);
    EXPECT_TRUE(validate_network(g).has(Violation::Kind::Redundant));
}

TEST(Validate, DetectsStructuralProblems) {
    auto g = single_edge();
    g.add_edge(0, 1);
    EXPECT_TRUE(validate_network(g).has(Violation::Kind::Structure));
    auto h = single_edge();
    h.vertices[1].pos = h.vertices[0].pos;
    EXPECT_TRUE(validate_network(h).has(Violation::Kind::Structure));
    EXPECT_THROW(require_valid(h), InvalidNetworkError);
}

TEST(Lindstrom, SingleEdge) {
    const auto g = single_edge();
    Weighting w{Rational(2), Rational(3)};
    EXPECT_EQ(lindstrom_matrix(g, w), (Matrix{{6}}));
    EXPECT_EQ(lindstrom_matrix(g, unit_weights(g)), (Matrix{{1}}));
}

TEST(Lindstrom, DiamondMinors) {
    const auto g = diamond();
    const Weighting w(5, Rational(1));
    const auto q = lindstrom_matrix(g, w);
    EXPECT_EQ(q, (Matrix{{1, 1}, {1, 1}}));
    // both paths must use v, so there is no (12|12)-flow
    EXPECT_EQ(fg_function(g, w, {1, 2}, {1, 2}), Rational(0));
    EXPECT_EQ(minor(q, {1, 2}, {1, 2}), Rational(0));
}

TEST(Lindstrom, RejectsBadWeights) {
    const auto g = single_edge();
    EXPECT_THROW(lindstrom_matrix(g, Weighting{Rational(1)}), SizeMismatchError);
    EXPECT_THROW(lindstrom_matrix(g, Weighting{Rational(1), Rational(-1)}), NegativeWeightError);
}

TEST(Lindstrom, RandomNetworksAgreeWithPathSystemOracle) {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 60; ++trial) {
        const auto g = random_planar_network(rng, 12);
        ASSERT_TRUE(validate_network(g).ok()) << validate_network(g).summary();
        const auto w = random_weights(rng, g);
        const auto q = lindstrom_matrix(g, w);
        EXPECT_TRUE(is_tnn(q));
        for (const auto& i : oracle::subsets(g.n()))
            for (const auto& j : oracle::subsets(g.n_prime())) {
                if (i.size() != j.size() || i.size() > 3) continue;
                const Rational want = oracle::flow_sum(g, w, i, j);
                EXPECT_EQ(fg_function(g, w, i, j), want);
                EXPECT_EQ(minor(q, i, j), want);
                EXPECT_EQ(enumerate_flows(g, i, j).size(), oracle::flow_count(g, i, j));
            }
    }
}
