#pragma once

// Randomised consistency battery over small planar networks: path-matrix
// minors against flow sums, vertex-split laws, and the double-flow calculus.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tnn/double_flow.hpp"
#include "tnn/flows.hpp"
#include "tnn/io.hpp"
#include "tnn/random.hpp"

namespace tnn {

struct SelfTestOptions {
    int max_vertices = 12;
    std::uint64_t seed = 1;
    int trials = 200;
    int max_minor = 3;
    std::size_t max_double_flows = 4000; // per network
    bool inject_fault = false;           // negate one determinant; the run must fail
};

struct TrialResult {
    std::uint64_t seed = 0;
    std::size_t triples = 0;      // (G, I, J) minor comparisons
    std::size_t double_flows = 0; // decomposed double flows
    std::size_t switches = 0;     // switch round trips
    std::vector<std::string> failures;
    std::string network; // serialized network when something failed
};

namespace detail {

inline std::vector<IndexSet> subsets_up_to(int n, int k) {
    IndexSet all;
    for (int i = 1; i <= n; ++i) all.push_back(i);
    std::vector<IndexSet> out;
    for (int s = 0; s <= std::min(n, k); ++s)
        for (auto& sub : k_subsets(all, s)) out.push_back(std::move(sub));
    return out;
}

// A balanced context on n rows and n' columns, or nothing after a few tries.
inline std::optional<Context> random_context(SplitMix64& rng, int n, int n_prime) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<int> x, y, xp, yp;
        for (int i = 1; i <= n; ++i) {
            const auto r = rng.uniform(0, 3);
            if (r == 0) x.push_back(i);
            else if (r <= 2) y.push_back(i);
        }
        for (int j = 1; j <= n_prime; ++j) {
            const auto r = rng.uniform(0, 3);
            if (r == 0) xp.push_back(j);
            else if (r <= 2) yp.push_back(j);
        }
        if (y.empty() || yp.empty() || 2 * x.size() + y.size() != 2 * xp.size() + yp.size()) continue;
        return make_context(n, n_prime, x, y, xp, yp);
    }
    return std::nullopt;
}

inline void check_minors(const PlanarNetwork& g, const Weighting& w, const SelfTestOptions& opt, TrialResult& r) {
    const Matrix q = lindstrom_matrix(g, w);
    const auto rows = subsets_up_to(g.n(), opt.max_minor);
    const auto cols = subsets_up_to(g.n_prime(), opt.max_minor);
    bool faulted = false;
    for (const auto& i : rows)
        for (const auto& j : cols) {
            if (i.size() != j.size()) continue;
            Rational det = minor(q, i, j);
            if (opt.inject_fault && !faulted) {
                det = -det - 1; // Δ(∅|∅) = 1 comes first, so this always bites
                faulted = true;
            }
            const Rational f = fg_function(g, w, i, j);
            ++r.triples;
            if (det != f)
                r.failures.push_back("minor(" + format_index_set(i) + "|" + format_index_set(j, true) +
                                     ") = " + to_string(det) + " but flow sum = " + to_string(f));
        }
}

inline void check_hat(const PlanarNetwork& g, const Weighting& w, const HatNetwork& h, TrialResult& r) {
    try {
        check_hat_laws(h);
    } catch (const StructureError& e) {
        r.failures.push_back(std::string("hat laws: ") + e.what());
        return;
    }
    if (h.net.vertex_count() != 2 * g.vertex_count() + g.n() + g.n_prime())
        r.failures.push_back("hat network has the wrong number of vertices");
    if (path_sum_matrix(h.net, hat_weighting(h, w)) != path_sum_matrix(g, w))
        r.failures.push_back("hat network changes the path matrix");
}

inline void check_double_flows(const HatNetwork& h, const Weighting& hw, const Matrix& q, const Context& ctx,
                               const SelfTestOptions& opt, SplitMix64& rng, TrialResult& r) {
    const std::size_t want_paths = static_cast<std::size_t>(ctx.m() + ctx.m_prime()) / 2;
    std::map<Matching, std::optional<Rational>> group_weight;
    for (const auto& p : proper_pairs(ctx)) {
        if (r.double_flows >= opt.max_double_flows) return;
        const auto dfs = double_flows(h, ctx, p);
        std::map<Matching, Rational> groups;
        Rational total = 0;
        for (const auto& df : dfs) {
            ++r.double_flows;
            const auto dec = decompose(h, ctx, df);
            if (dec.paths.size() != want_paths) {
                r.failures.push_back(to_string(p) + ": " + std::to_string(dec.paths.size()) + " paths, expected " +
                                     std::to_string(want_paths));
                continue;
            }
            for (const auto& path : dec.paths)
                if (!alternates(h.net, path)) r.failures.push_back(to_string(p) + ": path does not alternate");
            const Matching m = matching_of(dec);
            if (!is_feasible(ctx, p, m)) r.failures.push_back(to_string(p) + ": " + to_string(m) + " is not feasible");
            const Rational wt = flow_weight(df.phi, hw) * flow_weight(df.phi_prime, hw);
            groups[m] += wt;
            total += wt;

            // One random subset of couples per double flow, plus the full set.
            std::vector<std::vector<Couple>> subsets(2);
            for (const auto& c : m.couples) {
                if (rng.coin()) subsets[0].push_back(c);
                subsets[1].push_back(c);
            }
            for (const auto& m0 : subsets) {
                const auto psi = switch_double_flow(h, ctx, df, m0);
                ++r.switches;
                if (psi.pair != exchange(ctx, p, m, m0)) r.failures.push_back("switch lands on the wrong pair");
                if (edge_multiset(h, psi) != edge_multiset(h, df)) r.failures.push_back("switch changes the edge multiset");
                if (switch_double_flow(h, ctx, psi, m0) != df) r.failures.push_back("switch is not an involution");
            }
        }
        const Rational product = minor(q, rows_of(ctx, p), cols_of(ctx, p)) *
                                 minor(q, rows_of_complement(ctx, p), cols_of_complement(ctx, p));
        if (total != product)
            r.failures.push_back(to_string(p) + ": double-flow sum " + to_string(total) + " != minor product " +
                                 to_string(product));
        // A matching's group weight does not depend on the pair it is read from.
        for (const auto& m : feasible_matchings(ctx, p)) {
            const Rational wt = groups.count(m) ? groups[m] : Rational(0);
            auto& seen = group_weight[m];
            if (!seen) seen = wt;
            else if (*seen != wt)
                r.failures.push_back(to_string(m) + ": group weight differs between pairs");
        }
    }
}

} // namespace detail

inline TrialResult lindstrom_trial(const SelfTestOptions& opt, std::uint64_t index) {
    TrialResult r;
    r.seed = derive_seed(opt.seed, index);
    SplitMix64 rng(r.seed);
    const PlanarNetwork g = random_planar_network(rng, opt.max_vertices);
    const Weighting w = random_weights(rng, g);
    try {
        detail::check_minors(g, w, opt, r);
        const HatNetwork h = hat_transform(g);
        detail::check_hat(g, w, h, r);
        if (auto ctx = detail::random_context(rng, g.n(), g.n_prime()))
            detail::check_double_flows(h, hat_weighting(h, w), lindstrom_matrix(g, w), *ctx, opt, rng, r);
    } catch (const std::exception& e) {
        r.failures.push_back(std::string("exception: ") + e.what());
    }
    if (!r.failures.empty()) r.network = to_json(g, &w).dump();
    return r;
}

} // namespace tnn
