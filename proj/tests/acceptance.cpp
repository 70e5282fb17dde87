// Acceptance gate: one PASS/FAIL line per criterion, each under its time limit.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "oracles.hpp"

using namespace tnn;

namespace {

struct Check {
    std::vector<std::string> problems;
    std::string note;

    void require(bool ok, const std::string& what) {
        if (!ok && problems.size() < 5) problems.push_back(what);
        if (!ok && problems.size() == 5) problems.push_back("...");
    }
    bool ok() const { return problems.empty(); }
};

Matching mk(std::initializer_list<std::pair<const char*, const char*>> cs) {
    std::vector<Couple> v;
    for (auto [a, b] : cs) v.emplace_back(parse_element(a), parse_element(b));
    return Matching(v);
}

std::set<Matching> as_set(const std::vector<Matching>& ms) { return {ms.begin(), ms.end()}; }

Context ctx55() { return make_context(5, 5, {}, {1, 2, 3, 4, 5}, {}, {1, 2, 3, 4, 5}); }

const Matching M1 = mk({{"1", "4"}, {"2", "3"}, {"3'", "4'"}, {"2'", "5'"}, {"5", "1'"}});
const Matching M2 = mk({{"1", "4"}, {"2", "3"}, {"2'", "3'"}, {"4'", "5'"}, {"5", "1'"}});
const Matching M3 = mk({{"1", "4"}, {"2", "3"}, {"1'", "4'"}, {"2'", "3'"}, {"5", "5'"}});

// ---- 1 ---------------------------------------------------------------------

void golden_example(Check& c) {
    const auto ctx = ctx55();
    const auto p45 = make_proper_pair(ctx, {1, 2}, {4, 5});
    const auto p34 = make_proper_pair(ctx, {1, 2}, {3, 4});
    const auto p35 = make_proper_pair(ctx, {1, 2}, {3, 5});
    c.require(feasible_matchings(ctx, p45) == std::vector<Matching>{M1}, "(12,4'5') should give exactly M1");
    c.require(as_set(feasible_matchings(ctx, p34)) == std::set<Matching>{M2, M3}, "(12,3'4') should give {M2,M3}");
    c.require(feasible_matchings(ctx, p34).size() == 2, "(12,3'4') has duplicates");
    c.require(as_set(feasible_matchings(ctx, p35)) == std::set<Matching>{M1, M2}, "(12,3'5') should give {M1,M2}");
    c.require(feasible_matchings(ctx, p35).size() == 2, "(12,3'5') has duplicates");
    const auto v = check_universal(ctx, {{p45, 1}, {p34, 1}}, {{p35, 1}});
    c.require(v.status == Status::Universal, "verdict should be Universal");
}

// ---- 2 ---------------------------------------------------------------------

void swapped_refutation(Check& c) {
    const auto ctx = ctx55();
    const Family a{{make_proper_pair(ctx, {1, 2}, {3, 5}), 1}};
    const Family b{{make_proper_pair(ctx, {1, 2}, {4, 5}), 1}, {make_proper_pair(ctx, {1, 2}, {3, 4}), 1}};
    const auto v = check_universal(ctx, a, b);
    c.require(v.status == Status::NotUniversal, "verdict should be NotUniversal");
    c.require(v.witness == M3, "witness should be M3");
    try {
        const auto cert = build_counterexample(ctx, a, b, v);
        const auto ones = unit_weights(cert.network);
        c.require(lindstrom_matrix(cert.network, ones) == cert.matrix, "certificate matrix is not the unit-weight path matrix");
        c.require(oracle::is_tnn(cert.matrix), "certificate matrix is not TNN");
        c.require(evaluate_inequality(cert.matrix, ctx, a, b) == -1, "inequality value should be -1");
        c.require(cert.count_a == 0 && cert.count_b == 1, "counts should be 0 and 1");
        c.note = std::to_string(cert.network.vertex_count()) + "-vertex witness";
    } catch (const ConstructionFailure& e) {
        c.note = std::string("construction failure reported: ") + e.what();
    }
}

// ---- 3 ---------------------------------------------------------------------

void classical_2x2(Check& c) {
    const auto ctx = make_context(2, 2, {}, {1, 2}, {}, {1, 2});
    const Family a{{make_proper_pair(ctx, {1}, {1}), 1}};
    const Family b{{make_proper_pair(ctx, {1}, {2}), 1}};
    c.require(check_universal(ctx, a, b).status == Status::Universal, "verdict should be Universal");
    const auto values = parallel_map<std::pair<Rational, Rational>>(1000, [&](std::size_t t) {
        const auto q = random_tnn(2, 2, derive_seed(2024, t)).matrix;
        // Δ(1|1)Δ(2|2) - Δ(1|2)Δ(2|1), straight from the entries.
        return std::pair{evaluate_inequality(q, ctx, a, b), Rational(q(0, 0) * q(1, 1) - q(0, 1) * q(1, 0))};
    });
    for (std::size_t t = 0; t < values.size(); ++t) {
        c.require(values[t].first == values[t].second, "sample " + std::to_string(t) + " disagrees with the entry formula");
        c.require(values[t].second >= 0, "sample " + std::to_string(t) + " violates the inequality");
    }
}

// ---- 4 ---------------------------------------------------------------------

void lindstrom_equivalence(Check& c) {
    constexpr std::size_t kNetworks = 200;
    struct Result {
        std::size_t triples = 0;
        std::vector<std::string> bad;
    };
    const auto results = parallel_map<Result>(kNetworks, [](std::size_t t) {
        Result r;
        SplitMix64 rng(derive_seed(404, t));
        const auto g = random_planar_network(rng, 12);
        if (g.vertex_count() > 12 || !validate_network(g).ok()) r.bad.push_back("generator produced an invalid network");
        const auto w = random_weights(rng, g);
        const auto q = lindstrom_matrix(g, w);
        for (const auto& i : oracle::subsets(g.n()))
            for (const auto& j : oracle::subsets(g.n_prime())) {
                if (i.size() != j.size() || i.size() > 3) continue;
                ++r.triples;
                const Rational f = fg_function(g, w, i, j);
                if (minor(q, i, j) != f || oracle::flow_sum(g, w, i, j) != f)
                    r.bad.push_back("network " + std::to_string(t) + " (" + format_index_set(i) + "|" +
                                    format_index_set(j, true) + ")");
            }
        return r;
    });
    std::size_t triples = 0;
    for (const auto& r : results) {
        triples += r.triples;
        for (const auto& b : r.bad) c.require(false, b);
    }
    c.note = std::to_string(kNetworks) + " networks, " + std::to_string(triples) + " (G,I,J) triples";
}

// ---- 5 ---------------------------------------------------------------------

// Canonical shapes plus an interleaved X/X' variant for each (|Y|, |Y'|).
std::vector<Context> contexts_up_to(int ground) {
    std::vector<Context> out;
    for (int m = 1; m < ground; ++m)
        for (int mp = 1; m + mp <= ground; ++mp) {
            if ((m + mp) % 2) continue;
            const int x = std::max(0, (mp - m) / 2), xp = std::max(0, (m - mp) / 2);
            for (int extra = 0; extra <= 1; ++extra) {
                const int nx = x + extra, nxp = xp + extra;
                // rows: Y and X interleaved, X taking the even slots first
                std::vector<int> ys, xs, yps, xps;
                for (int r = 1, placed_x = 0, placed_y = 0; placed_x < nx || placed_y < m; ++r) {
                    if (placed_x < nx && (r % 2 == 0 || placed_y == m)) xs.push_back(r), ++placed_x;
                    else ys.push_back(r), ++placed_y;
                }
                for (int r = 1, placed_x = 0, placed_y = 0; placed_x < nxp || placed_y < mp; ++r) {
                    if (placed_x < nxp && (r % 2 == 1 || placed_y == mp)) xps.push_back(r), ++placed_x;
                    else yps.push_back(r), ++placed_y;
                }
                out.push_back(make_context(m + nx, mp + nxp, xs, ys, xps, yps));
            }
        }
    return out;
}

void matching_oracle(Check& c) {
    const auto contexts = contexts_up_to(10);
    const auto counts = parallel_map<std::size_t>(contexts.size(), [&](std::size_t k) {
        std::size_t pairs = 0;
        const auto& ctx = contexts[k];
        auto want_pairs = oracle::pairs(ctx);
        auto got_pairs = proper_pairs(ctx);
        std::sort(want_pairs.begin(), want_pairs.end());
        std::sort(got_pairs.begin(), got_pairs.end());
        if (want_pairs != got_pairs) throw std::runtime_error("proper pairs differ for a context");
        for (const auto& p : got_pairs) {
            const auto got = feasible_matchings(ctx, p);
            if (as_set(got) != oracle::feasible(ctx, p) || as_set(got).size() != got.size())
                throw std::runtime_error("feasible matchings differ for " + to_string(p) + " with |Y|=" +
                                         std::to_string(ctx.m()) + ", |Y'|=" + std::to_string(ctx.m_prime()));
            ++pairs;
        }
        return pairs;
    });
    std::size_t total = 0;
    for (auto n : counts) total += n;
    c.note = std::to_string(contexts.size()) + " contexts, " + std::to_string(total) + " proper pairs";
}

// ---- 6 and 7 ---------------------------------------------------------------

struct HatInstance {
    PlanarNetwork g;
    Weighting w;
    Context ctx;
};

// Small random networks paired with random contexts, kept only when some
// proper pair has a double flow.
std::vector<HatInstance> hat_instances(std::size_t want) {
    std::vector<HatInstance> out;
    for (std::uint64_t t = 0; out.size() < want && t < 20000; ++t) {
        SplitMix64 rng(derive_seed(606, t));
        auto g = random_planar_network(rng, 12);
        auto w = random_weights(rng, g);
        auto ctx = detail::random_context(rng, g.n(), g.n_prime());
        if (!ctx) continue;
        const auto h = hat_transform(g);
        bool any = false;
        for (const auto& p : proper_pairs(*ctx))
            if (!double_flows(h, *ctx, p).empty()) {
                any = true;
                break;
            }
        if (any) out.push_back({std::move(g), std::move(w), *ctx});
    }
    // Denser shapes: small staircases, and witness networks (one double flow
    // per feasible pair) for every noncrossing matching of small contexts.
    SplitMix64 rng(607);
    for (const auto& ctx : oracle::small_contexts(6)) {
        if (ctx.n() <= 2 && ctx.n_prime() <= 2) {
            auto g = staircase_network(ctx.n(), ctx.n_prime());
            auto w = random_weights(rng, g);
            out.push_back({std::move(g), std::move(w), ctx});
        }
        std::set<Matching> ms;
        for (const auto& p : proper_pairs(ctx))
            for (const auto& m : feasible_matchings(ctx, p)) ms.insert(m);
        for (const auto& m : ms) {
            auto g = build_witness_network(ctx, m);
            auto w = random_weights(rng, g, false);
            out.push_back({std::move(g), std::move(w), ctx});
        }
    }
    return out;
}

struct DoubleFlowStats {
    std::size_t networks = 0, double_flows = 0, switches = 0, pairs = 0;
};

void double_flow_laws(Check& c, const std::vector<HatInstance>& inst, DoubleFlowStats& st) {
    struct Result {
        std::size_t dfs = 0, switches = 0;
        std::vector<std::string> bad;
    };
    const auto results = parallel_map<Result>(inst.size(), [&](std::size_t k) {
        Result r;
        const auto& [g, w, ctx] = inst[k];
        const auto h = hat_transform(g);
        auto fail = [&](const std::string& s) { r.bad.push_back("instance " + std::to_string(k) + ": " + s); };
        try {
            check_hat_laws(h);
        } catch (const StructureError& e) {
            fail(e.what());
        }
        const std::size_t want_paths = static_cast<std::size_t>(ctx.m() + ctx.m_prime()) / 2;
        for (const auto& p : proper_pairs(ctx)) {
            const auto feasible = oracle::feasible(ctx, p);
            for (const auto& df : double_flows(h, ctx, p)) {
                ++r.dfs;
                const auto dec = decompose(h, ctx, df);
                if (dec.paths.size() != want_paths) fail("path count");
                for (const auto& path : dec.paths) {
                    auto white = [&](const GroundElement& e) {
                        const auto& s = e.side == Side::Row ? p.c : p.c_prime;
                        return std::find(s.begin(), s.end(), e.index) != s.end();
                    };
                    const auto& [a, b] = std::pair{path.ends.first, path.ends.second};
                    const bool same = a.side == b.side;
                    bool cls_ok = false;
                    switch (path.cls) {
                    case PathClass::CCbar: cls_ok = same && a.side == Side::Row && white(a) != white(b); break;
                    case PathClass::CprimeCbarPrime: cls_ok = same && a.side == Side::Col && white(a) != white(b); break;
                    case PathClass::CCprime: cls_ok = !same && white(a) && white(b); break;
                    case PathClass::CbarCbarPrime: cls_ok = !same && !white(a) && !white(b); break;
                    }
                    if (!cls_ok) fail("endpoint class");
                    if (!alternates(h.net, path)) fail("path does not alternate");
                }
                const auto m = matching_of(dec);
                if (!feasible.count(m)) fail(to_string(m) + " infeasible for " + to_string(p));
                const auto edges = edge_multiset(h, df);
                for (std::size_t mask = 0; mask < (std::size_t{1} << m.couples.size()); ++mask) {
                    std::vector<Couple> sub;
                    for (std::size_t i = 0; i < m.couples.size(); ++i)
                        if (mask >> i & 1) sub.push_back(m.couples[i]);
                    const auto psi = switch_double_flow(h, ctx, df, sub);
                    ++r.switches;
                    if (psi.pair != exchange(ctx, p, m, sub)) fail("switch lands on the wrong pair");
                    if (edge_multiset(h, psi) != edges) fail("switch changes the edge multiset");
                    if (switch_double_flow(h, ctx, psi, sub) != df) fail("switch is not an involution");
                }
            }
        }
        return r;
    });
    for (const auto& r : results) {
        st.double_flows += r.dfs;
        st.switches += r.switches;
        if (r.dfs > 0) ++st.networks;
        for (const auto& b : r.bad) c.require(false, b);
    }
    c.require(st.networks >= 50, "only " + std::to_string(st.networks) + " networks carry double flows");
    c.note = std::to_string(st.networks) + " hat networks, " + std::to_string(st.double_flows) + " double flows, " +
             std::to_string(st.switches) + " switches";
}

void regrouping(Check& c, const std::vector<HatInstance>& inst) {
    struct Result {
        std::size_t pairs = 0;
        std::vector<std::string> bad;
    };
    const auto results = parallel_map<Result>(inst.size(), [&](std::size_t k) {
        Result r;
        const auto& [g, w, ctx] = inst[k];
        const auto h = hat_transform(g);
        const auto hw = hat_weighting(h, w);
        const auto q = lindstrom_matrix(g, w);
        std::map<Matching, Rational> weight_of;
        for (const auto& p : proper_pairs(ctx)) {
            ++r.pairs;
            std::map<Matching, Rational> groups;
            for (const auto& df : double_flows(h, ctx, p))
                groups[matching_of(h, ctx, df)] += flow_weight(df.phi, hw) * flow_weight(df.phi_prime, hw);
            Rational total = 0;
            for (const auto& [m, wt] : groups) total += wt;
            const Rational product = oracle::cofactor_minor(q, rows_of(ctx, p), cols_of(ctx, p)) *
                                     oracle::cofactor_minor(q, rows_of_complement(ctx, p), cols_of_complement(ctx, p));
            if (total != product) r.bad.push_back("instance " + std::to_string(k) + " " + to_string(p));
            for (const auto& m : feasible_matchings(ctx, p)) {
                const Rational wt = groups.count(m) ? groups[m] : Rational(0);
                auto [it, fresh] = weight_of.emplace(m, wt);
                if (!fresh && it->second != wt)
                    r.bad.push_back("instance " + std::to_string(k) + " group weight of " + to_string(m));
            }
        }
        return r;
    });
    std::size_t pairs = 0;
    for (const auto& r : results) {
        pairs += r.pairs;
        for (const auto& b : r.bad) c.require(false, b);
    }
    c.note = std::to_string(inst.size()) + " instances, " + std::to_string(pairs) + " proper pairs";
}

// ---- 8 ---------------------------------------------------------------------

struct Instance {
    Context ctx;
    Family a, b;
};

std::optional<Instance> random_instance(SplitMix64& rng) {
    const int n = static_cast<int>(rng.uniform(1, 5)), np = static_cast<int>(rng.uniform(1, 5));
    const auto ctx = detail::random_context(rng, n, np);
    if (!ctx || ctx->ground_size() > 8) return std::nullopt;
    const auto pairs = proper_pairs(*ctx);
    Instance inst{*ctx, {}, {}};
    const int na = static_cast<int>(rng.uniform(1, 4)), nb = static_cast<int>(rng.uniform(1, 3));
    for (int i = 0; i < na; ++i) inst.a.push_back({pairs[rng.uniform(0, pairs.size() - 1)], 1 + static_cast<std::uint64_t>(rng.uniform(0, 1))});
    for (int i = 0; i < nb; ++i) inst.b.push_back({pairs[rng.uniform(0, pairs.size() - 1)], 1});
    return inst;
}

void monte_carlo(Check& c) {
    std::vector<Instance> universal, refuted;
    SplitMix64 rng(808);
    for (int attempt = 0; attempt < 100000 && (universal.size() < 50 || refuted.size() < 50); ++attempt) {
        auto inst = random_instance(rng);
        if (!inst) continue;
        const auto v = check_universal(inst->ctx, inst->a, inst->b);
        auto& bucket = v.status == Status::Universal ? universal : refuted;
        if (bucket.size() < 50) bucket.push_back(std::move(*inst));
    }
    c.require(universal.size() == 50, "could not sample 50 universal instances");

    const auto violations = parallel_map<std::size_t>(universal.size(), [&](std::size_t k) {
        const auto& in = universal[k];
        std::size_t bad = 0;
        for (std::uint64_t t = 0; t < 200; ++t) {
            const auto q = random_tnn(in.ctx.n(), in.ctx.n_prime(), derive_seed(k, t)).matrix;
            if (evaluate_inequality(q, in.ctx, in.a, in.b) < 0) ++bad;
        }
        return bad;
    });
    for (std::size_t k = 0; k < violations.size(); ++k)
        c.require(violations[k] == 0, "internal bug: universal instance " + std::to_string(k) + " violated on " +
                                          std::to_string(violations[k]) + " samples");

    const auto certified = parallel_map<int>(refuted.size(), [&](std::size_t k) {
        const auto& in = refuted[k];
        try {
            const auto cert = build_counterexample(in.ctx, in.a, in.b);
            const bool ok = cert.lhs < 0 && evaluate_inequality(cert.matrix, in.ctx, in.a, in.b) == cert.lhs &&
                            lindstrom_matrix(cert.network, unit_weights(cert.network)) == cert.matrix && is_tnn(cert.matrix);
            return ok ? 1 : -1;
        } catch (const ConstructionFailure&) {
            return 0;
        }
    });
    std::size_t built = 0;
    for (std::size_t k = 0; k < certified.size(); ++k) {
        c.require(certified[k] != -1, "certificate for refuted instance " + std::to_string(k) + " does not violate");
        built += certified[k] == 1;
    }
    c.note = std::to_string(universal.size()) + " universal x 200 samples; " + std::to_string(built) + "/" +
             std::to_string(refuted.size()) + " refutations certified";
}

struct Criterion {
    const char* name;
    double limit_s;
    std::function<void(Check&)> run;
};

} // namespace

int main() {
    std::vector<HatInstance> hats;
    DoubleFlowStats stats;
    const std::vector<Criterion> criteria{
        {"AC1 golden 5x5 example", 1, golden_example},
        {"AC2 swapped-family refutation", 60, swapped_refutation},
        {"AC3 2x2 determinant inequality", 5, classical_2x2},
        {"AC4 path-matrix minors equal flow sums", 120, lindstrom_equivalence},
        {"AC5 feasible matchings vs brute force", 120, matching_oracle},
        {"AC6 double-flow laws", 120,
         [&](Check& c) {
             hats = hat_instances(100);
             double_flow_laws(c, hats, stats);
         }},
        {"AC7 double-flow regrouping", 120, [&](Check& c) { regrouping(c, hats); }},
        {"AC8 Monte Carlo soundness sweep", 600, monte_carlo},
    };
    int failed = 0;
    for (const auto& cr : criteria) {
        Check c;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            cr.run(c);
        } catch (const std::exception& e) {
            c.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::ostringstream time;
        time.precision(3);
        time << std::fixed << secs << " s / " << cr.limit_s << " s";
        c.require(secs < cr.limit_s, "too slow: " + time.str());
        std::cout << (c.ok() ? "[PASS] " : "[FAIL] ") << cr.name << " (" << time.str() << ")";
        if (!c.note.empty()) std::cout << " " << c.note;
        std::cout << "\n";
        for (const auto& p : c.problems) std::cout << "       " << p << "\n";
        failed += !c.ok();
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
    return failed ? 1 : 0;
}
