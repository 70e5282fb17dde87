// tnn-certify: decide and certify quadratic inequalities between products of
// minors of totally nonnegative matrices.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tnn/tnn.hpp"

namespace {

using namespace tnn;

enum Exit : int {
    kOk = 0,
    kInputError = 2,
    kNotUniversal = 10,
    kIsUniversal = 11,
    kAlarm = 20,
    kConstructionFailure = 30,
};

struct Options {
    bool json = false;
};

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

void print_table(const Verdict& v) {
    std::size_t width = 8;
    for (const auto& [m, c] : v.counts) width = std::max(width, to_string(m).size());
    std::cout << std::left << std::setw(static_cast<int>(width)) << "matching" << "  #A  #B\n";
    for (const auto& [m, c] : v.counts)
        std::cout << std::left << std::setw(static_cast<int>(width)) << to_string(m) << "  " << std::setw(3) << c.in_a
                  << " " << c.in_b << "\n";
}

// ---- check ------------------------------------------------------------------

int cmd_check(const std::string& path, bool with_witness, const Options& opt) {
    const auto prob = load_problem(path);
    const Verdict v = check_universal(prob.ctx, prob.a, prob.b);
    json out = to_json(v);
    std::optional<WitnessCertificate> cert;
    std::string failure;
    if (with_witness && v.status == Status::NotUniversal) {
        try {
            cert = build_counterexample(prob.ctx, prob.a, prob.b, v);
            out["certificate"] = to_json(*cert);
        } catch (const ConstructionFailure& e) {
            failure = e.what();
            out["certificate"] = {{"constructionFailure", failure}};
        }
    }
    if (opt.json) {
        print_json(out);
    } else {
        std::cout << "verdict: " << to_string(v.status) << "\n";
        print_table(v);
        if (v.witness) std::cout << "witness: " << to_string(*v.witness) << "\n";
        if (cert)
            std::cout << "counterexample: countA = " << cert->count_a << ", countB = " << cert->count_b
                      << ", lhs = " << to_string(cert->lhs) << " (" << cert->network.vertex_count()
                      << "-vertex network)\n";
        if (!failure.empty()) std::cout << "no certificate: " << failure << "\n";
    }
    return v.status == Status::Universal ? kOk : kNotUniversal;
}

// ---- matchings --------------------------------------------------------------

std::vector<int> parse_int_list(const std::string& text, const std::string& flag) {
    std::vector<int> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ParseError(flag + ": '" + item + "' is not an integer");
        }
    }
    return out;
}

struct InlineContext {
    int n = 0, n_prime = 0;
    std::vector<int> x, y, x_prime, y_prime, c, c_prime;
    bool has_pair = false;
};

int cmd_matchings(const std::string& path, const InlineContext& in, bool count_only, const Options& opt) {
    std::vector<std::pair<std::string, ProperPair>> pairs;
    std::optional<Context> ctx;
    if (!path.empty()) {
        auto prob = load_problem(path);
        ctx = prob.ctx;
        if (!in.has_pair) {
            for (std::size_t i = 0; i < prob.a.size(); ++i) pairs.push_back({"A[" + std::to_string(i) + "]", prob.a[i].pair});
            for (std::size_t i = 0; i < prob.b.size(); ++i) pairs.push_back({"B[" + std::to_string(i) + "]", prob.b[i].pair});
        }
    } else {
        ctx = make_context(in.n, in.n_prime, in.x, in.y, in.x_prime, in.y_prime);
    }
    if (in.has_pair) pairs.push_back({"", make_proper_pair(*ctx, in.c, in.c_prime)});
    if (pairs.empty()) throw ParseError("no proper pair given (use --C/--CPrime or a problem file with families)");

    json out = json::array();
    for (const auto& [label, p] : pairs) {
        const auto ms = feasible_matchings(*ctx, p);
        if (opt.json) {
            json ja = json::array();
            for (const auto& m : ms) ja.push_back(to_json(m));
            json entry = {{"C", p.c}, {"CPrime", p.c_prime}, {"count", ms.size()}};
            if (!label.empty()) entry["entry"] = label;
            if (!count_only) entry["matchings"] = ja;
            out.push_back(entry);
            continue;
        }
        if (pairs.size() > 1) std::cout << "# " << label << " " << to_string(p) << "\n";
        if (count_only) {
            std::cout << ms.size() << "\n";
        } else {
            for (const auto& m : ms) std::cout << to_string(m) << "\n";
        }
    }
    if (opt.json) print_json(pairs.size() == 1 ? out[0] : out);
    return kOk;
}

// ---- random-test ------------------------------------------------------------

int cmd_random_test(const std::string& path, int trials, std::uint64_t seed, const std::vector<int>& size,
                    const Options& opt) {
    auto prob = load_problem(path);
    Context ctx = prob.ctx;
    if (!size.empty()) {
        if (size.size() != 2) throw ParseError("--size expects n,n'");
        ctx = make_context(size[0], size[1], ctx.x(), ctx.y(), ctx.x_prime(), ctx.y_prime());
    }
    if (trials < 0) throw ParseError("--trials must be nonnegative");
    const Verdict v = check_universal(ctx, prob.a, prob.b);

    struct Sample {
        std::uint64_t seed;
        Rational value;
    };
    const auto samples = parallel_map<Sample>(static_cast<std::size_t>(trials), [&](std::size_t t) {
        const auto s = derive_seed(seed, t);
        return Sample{s, evaluate_inequality(random_tnn(ctx.n(), ctx.n_prime(), s).matrix, ctx, prob.a, prob.b)};
    });
    std::optional<Rational> min_value;
    std::optional<std::uint64_t> offending;
    std::size_t violations = 0, zeros = 0;
    for (const auto& s : samples) {
        if (!min_value || s.value < *min_value) min_value = s.value;
        if (s.value < 0) {
            ++violations;
            if (!offending) offending = s.seed;
        }
        if (s.value == 0) ++zeros;
    }
    const bool alarm = v.status == Status::Universal && violations > 0;
    if (opt.json) {
        json out = {{"verdict", to_string(v.status)},
                    {"trials", trials},
                    {"seed", seed},
                    {"n", ctx.n()},
                    {"nPrime", ctx.n_prime()},
                    {"minValue", min_value ? json(to_string(*min_value)) : json(nullptr)},
                    {"violations", violations},
                    {"zeroValues", zeros},
                    {"offendingSeed", offending ? json(*offending) : json(nullptr)}};
        print_json(out);
    } else {
        std::cout << "verdict: " << to_string(v.status) << "\n"
                  << "trials: " << trials << " (seed " << seed << ", " << ctx.n() << "x" << ctx.n_prime() << ")\n"
                  << "min value: " << (min_value ? to_string(*min_value) : "n/a") << "\n"
                  << "zero values: " << zeros << "\n"
                  << "violations: " << violations << "\n";
        if (offending) std::cout << "first violating seed: " << *offending << "\n";
        if (alarm) std::cout << "ALARM: a universal inequality failed on a TNN matrix; this is an internal bug\n";
    }
    if (alarm) return kAlarm;
    return v.status == Status::Universal ? kOk : kNotUniversal;
}

// ---- verify-lindstrom -------------------------------------------------------

int cmd_verify_lindstrom(const SelfTestOptions& st, const Options& opt) {
    if (st.trials < 0 || st.max_vertices < 2) throw ParseError("--trials must be >= 0 and --max-vertices >= 2");
    const auto results = parallel_map<TrialResult>(static_cast<std::size_t>(st.trials),
                                                   [&](std::size_t t) { return lindstrom_trial(st, t); });
    std::size_t triples = 0, dfs = 0, switches = 0, failed = 0;
    json failures = json::array();
    for (const auto& r : results) {
        triples += r.triples;
        dfs += r.double_flows;
        switches += r.switches;
        if (r.failures.empty()) continue;
        ++failed;
        failures.push_back({{"seed", r.seed}, {"failures", r.failures}, {"network", json::parse(r.network)}});
    }
    if (opt.json) {
        print_json({{"networks", results.size()},
                    {"triples", triples},
                    {"doubleFlows", dfs},
                    {"switches", switches},
                    {"failedNetworks", failed},
                    {"failures", failures}});
    } else {
        std::cout << "networks: " << results.size() << "\n"
                  << "(G, I, J) triples: " << triples << "\n"
                  << "double flows: " << dfs << "\n"
                  << "switch round trips: " << switches << "\n"
                  << "failed networks: " << failed << "\n";
        for (const auto& f : failures) {
            std::cout << "-- seed " << f["seed"] << "\n";
            for (const auto& msg : f["failures"]) std::cout << "   " << msg.get<std::string>() << "\n";
            std::cout << "   network: " << f["network"].dump() << "\n";
        }
    }
    return failed == 0 ? kOk : kAlarm;
}

// ---- witness ----------------------------------------------------------------

int cmd_witness(const std::string& path, const std::string& out_dir, const Options& opt) {
    const auto prob = load_problem(path);
    const Verdict v = check_universal(prob.ctx, prob.a, prob.b);
    if (v.status == Status::Universal) {
        if (opt.json) print_json({{"verdict", "Universal"}, {"message", "instance is universal; no counterexample exists"}});
        else std::cout << "instance is universal; no counterexample exists\n";
        return kIsUniversal;
    }
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir)) throw ParseError(out_dir + ": cannot create output directory");

    WitnessCertificate cert;
    try {
        cert = build_counterexample(prob.ctx, prob.a, prob.b, v);
    } catch (const ConstructionFailure& e) {
        if (opt.json)
            print_json({{"verdict", "NotUniversal"}, {"witnessMatching", to_json(*v.witness)}, {"constructionFailure", e.what()}});
        else
            std::cout << "witness matching: " << to_string(*v.witness) << "\nconstruction failed: " << e.what() << "\n";
        return kConstructionFailure;
    }
    const auto net_path = (fs::path(out_dir) / "network.json").string();
    const auto cert_path = (fs::path(out_dir) / "certificate.json").string();
    const Weighting w = unit_weights(cert.network);
    for (const auto& [file, doc] : {std::pair{net_path, to_json(cert.network, &w)}, std::pair{cert_path, to_json(cert)}}) {
        std::ofstream f(file);
        if (!(f << doc.dump(2) << "\n")) throw ParseError(file + ": cannot write");
    }
    if (opt.json) {
        print_json({{"verdict", "NotUniversal"},
                    {"witnessMatching", to_json(cert.matching)},
                    {"countA", cert.count_a},
                    {"countB", cert.count_b},
                    {"lhsValue", to_string(cert.lhs)},
                    {"network", net_path},
                    {"certificate", cert_path}});
    } else {
        std::cout << "witness matching: " << to_string(cert.matching) << "\n"
                  << "countA: " << cert.count_a << "\n"
                  << "countB: " << cert.count_b << "\n"
                  << "lhsValue: " << to_string(cert.lhs) << "\n"
                  << "network: " << net_path << " (" << cert.network.vertex_count() << " vertices)\n"
                  << "certificate: " << cert_path << "\n";
    }
    return kNotUniversal;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decide and certify quadratic inequalities on minors of totally nonnegative matrices"};
    app.require_subcommand(1);
    Options opt;

    std::string problem;
    bool with_witness = false;
    auto* check = app.add_subcommand("check", "decide universality and print the matching-count table");
    check->add_option("problem", problem, "problem file (JSON)")->required();
    check->add_flag("--witness", with_witness, "also build a counterexample when not universal");
    check->add_flag("--json", opt.json, "machine-readable output");

    InlineContext inl;
    bool count_only = false;
    auto* matchings = app.add_subcommand("matchings", "list the feasible matchings of a proper pair");
    matchings->add_option("problem", problem, "problem file (JSON); lists every family entry unless --C is given");
    matchings->add_option("--n", inl.n, "number of rows");
    matchings->add_option("--nprime", inl.n_prime, "number of columns");
    matchings->add_option("--X", inl.x, "row set X")->delimiter(',');
    matchings->add_option("--Y", inl.y, "row set Y")->delimiter(',');
    matchings->add_option("--XPrime", inl.x_prime, "column set X'")->delimiter(',');
    matchings->add_option("--YPrime", inl.y_prime, "column set Y'")->delimiter(',');
    std::string c_text, cp_text;
    auto* c_opt = matchings->add_option("--C", c_text, "C, a subset of Y, comma separated (may be empty)");
    auto* cp_opt = matchings->add_option("--CPrime", cp_text, "C', a subset of Y', comma separated (may be empty)");
    matchings->add_flag("--count", count_only, "print only the number of matchings");
    matchings->add_flag("--json", opt.json, "machine-readable output");

    int trials = 1000;
    std::uint64_t seed = 1;
    std::vector<int> size;
    auto* random = app.add_subcommand("random-test", "evaluate the inequality on random TNN matrices");
    random->add_option("problem", problem, "problem file (JSON)")->required();
    random->add_option("--trials", trials, "number of random matrices")->capture_default_str();
    random->add_option("--seed", seed, "base seed")->capture_default_str();
    random->add_option("--size", size, "matrix shape n,n' (defaults to the problem's)")->delimiter(',');
    random->add_flag("--json", opt.json, "machine-readable output");

    SelfTestOptions st;
    auto* verify = app.add_subcommand("verify-lindstrom", "run the randomised network self-test battery");
    verify->add_option("--max-vertices", st.max_vertices, "vertex bound for random networks")->capture_default_str();
    verify->add_option("--seed", st.seed, "base seed")->capture_default_str();
    verify->add_option("--trials", st.trials, "number of random networks")->capture_default_str();
    verify->add_flag("--self-check-negative", st.inject_fault, "corrupt one determinant; the run must fail");
    verify->add_flag("--json", opt.json, "machine-readable output");

    std::string out_dir;
    auto* witness = app.add_subcommand("witness", "write a counterexample network and certificate");
    witness->add_option("problem", problem, "problem file (JSON)")->required();
    witness->add_option("--out", out_dir, "output directory")->required();
    witness->add_flag("--json", opt.json, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*check) return cmd_check(problem, with_witness, opt);
        if (*matchings) {
            inl.has_pair = c_opt->count() > 0 || cp_opt->count() > 0;
            inl.c = parse_int_list(c_text, "--C");
            inl.c_prime = parse_int_list(cp_text, "--CPrime");
            return cmd_matchings(problem, inl, count_only, opt);
        }
        if (*random) return cmd_random_test(problem, trials, seed, size, opt);
        if (*verify) return cmd_verify_lindstrom(st, opt);
        if (*witness) return cmd_witness(problem, out_dir, opt);
    } catch (const StructureError& e) {
        std::cerr << "internal consistency failure: " << e.what() << "\n";
        return kAlarm;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
