#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace tnn;

namespace {

const char* kExample = R"({
  "n": 5, "nPrime": 5,
  "X": [], "Y": [1, 2, 3, 4, 5],
  "XPrime": [], "YPrime": [1, 2, 3, 4, 5],
  "A": [{"C": [1, 2], "CPrime": [4, 5]}, {"C": [1, 2], "CPrime": [3, 4], "multiplicity": 2}],
  "B": [{"C": [1, 2], "CPrime": [3, 5]}]
})";

std::string error_of(const std::string& text) {
    try {
        parse_problem(text);
    } catch (const ParseError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST(ProblemFile, Parses) {
    const auto p = parse_problem(kExample);
    EXPECT_EQ(p.ctx.n(), 5);
    EXPECT_EQ(p.ctx.y_prime(), (IndexSet{1, 2, 3, 4, 5}));
    ASSERT_EQ(p.a.size(), 2u);
    EXPECT_EQ(p.a[1].multiplicity, 2u);
    EXPECT_EQ(p.a[0].pair.c_prime, (IndexSet{4, 5}));
    EXPECT_EQ(p.b[0].multiplicity, 1u);
}

TEST(ProblemFile, RoundTrip) {
    const auto p = parse_problem(kExample);
    const auto q = parse_problem(to_json(p).dump());
    EXPECT_EQ(q.ctx, p.ctx);
    EXPECT_EQ(q.a, p.a);
    EXPECT_EQ(q.b, p.b);
}

TEST(ProblemFile, LocatedErrors) {
    EXPECT_NE(error_of("{\n  \"n\": 5,\n  oops\n}").find("line 3"), std::string::npos);
    EXPECT_NE(error_of(R"({"nPrime": 1})").find("$.n"), std::string::npos);
    EXPECT_NE(error_of(R"({"n": "5"})").find("$.n"), std::string::npos);
    const std::string subset = R"({"n": 2, "nPrime": 2, "X": [], "Y": [1, 2], "XPrime": [], "YPrime": [1, 2],
        "A": [], "B": [{"C": [3], "CPrime": [1]}]})";
    EXPECT_NE(error_of(subset).find("$.B[0]"), std::string::npos);
    const std::string mult = R"({"n": 2, "nPrime": 2, "X": [], "Y": [1, 2], "XPrime": [], "YPrime": [1, 2],
        "A": [{"C": [1], "CPrime": [1], "multiplicity": 0}], "B": []})";
    EXPECT_NE(error_of(mult).find("multiplicity"), std::string::npos);
    const std::string balance = R"({"n": 2, "nPrime": 2, "X": [], "Y": [1, 2], "XPrime": [], "YPrime": [1],
        "A": [], "B": []})";
    EXPECT_NE(error_of(balance).find("Balance"), std::string::npos);
    EXPECT_THROW(load_problem("/nonexistent/problem.json"), ParseError);
}

TEST(Json, ElementsAndMatchings) {
    EXPECT_EQ(parse_element("3'"), col(3));
    EXPECT_EQ(parse_element("12"), row(12));
    EXPECT_THROW(parse_element("x"), ParseError);
    EXPECT_THROW(parse_element("'"), ParseError);
    const auto ctx = make_context(3, 3, {}, {1, 2, 3}, {2}, {1});
    for (const auto& p : proper_pairs(ctx))
        for (const auto& m : feasible_matchings(ctx, p)) EXPECT_EQ(matching_from_json(to_json(m)), m);
}

TEST(Json, VerdictRoundTrip) {
    const auto p = parse_problem(kExample);
    for (const auto& v : {check_universal(p.ctx, p.a, p.b), check_universal(p.ctx, p.b, p.a)}) {
        const auto back = verdict_from_json(json::parse(to_json(v).dump()));
        EXPECT_EQ(back, v);
    }
}

TEST(Json, NetworkAndCertificateRoundTrip) {
    SplitMix64 rng(2);
    for (int i = 0; i < 20; ++i) {
        const auto g = random_planar_network(rng, 12);
        const auto w = random_weights(rng, g);
        const auto back = network_from_json(json::parse(to_json(g, &w).dump()));
        EXPECT_EQ(back.network, g);
        ASSERT_TRUE(back.weights);
        EXPECT_EQ(*back.weights, w);
        EXPECT_FALSE(network_from_json(to_json(g)).weights);
    }
    const auto p = parse_problem(kExample);
    const auto cert = build_counterexample(p.ctx, p.b, p.a);
    EXPECT_EQ(certificate_from_json(json::parse(to_json(cert).dump())), cert);
}

TEST(Json, NetworkErrors) {
    EXPECT_THROW(network_from_json(json::parse(R"({"vertices": [{"id": "a", "x": 0, "y": 0}], "edges": [{"tail": "a", "head": "b"}],
                                                   "sources": [], "sinks": []})")),
                 ParseError);
    EXPECT_THROW(network_from_json(json::parse(R"({"vertices": [{"id": "a", "x": "1/0", "y": 0}], "edges": [],
                                                   "sources": [], "sinks": []})")),
                 ParseError);
}

TEST(Json, MatrixUsesExactStrings) {
    const Matrix q{{Rational(1, 3), 2}, {0, -5}};
    const auto j = to_json(q);
    EXPECT_EQ(j[0][0], "1/3");
    EXPECT_EQ(matrix_from_json(j), q);
}
