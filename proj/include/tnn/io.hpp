#pragma once

// JSON formats: problem files, networks (with optional weights), verdicts and
// counterexample certificates.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tnn/core_model.hpp"
#include "tnn/network.hpp"
#include "tnn/witness.hpp"

namespace tnn {

using json = nlohmann::ordered_json;

struct ProblemFile {
    Context ctx;
    Family a;
    Family b;
};

namespace detail {

inline std::string line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(line_col(text, e.byte) + ": malformed JSON");
    }
}

inline const json& field(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) throw ParseError(path + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(path + "." + key + ": missing");
    return *it;
}

inline int get_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ParseError(path + ": expected an integer");
    return v.get<int>();
}

inline std::vector<int> get_ints(const json& v, const std::string& path) {
    if (!v.is_array()) throw ParseError(path + ": expected an array of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_int(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

inline Rational get_rational(const json& v, const std::string& path) {
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_string()) {
        try {
            return parse_rational(v.get<std::string>());
        } catch (const ParseError& e) {
            throw ParseError(path + ": " + e.what());
        }
    }
    throw ParseError(path + ": expected an integer or a \"p/q\" string");
}

inline json rational_json(const Rational& q) {
    if (q.get_den() == 1 && q.get_num().fits_slong_p()) return json(q.get_num().get_si());
    return json(to_string(q));
}

// Re-raises library validation errors with the field path in front.
template <class F>
auto located(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline Family parse_family(const json& v, const Context& ctx, const std::string& path) {
    if (!v.is_array()) throw ParseError(path + ": expected an array");
    Family fam;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        const auto c = get_ints(field(v[i], "C", p), p + ".C");
        const auto cp = get_ints(field(v[i], "CPrime", p), p + ".CPrime");
        std::uint64_t mult = 1;
        if (v[i].contains("multiplicity")) {
            const int k = get_int(v[i]["multiplicity"], p + ".multiplicity");
            if (k < 1) throw ParseError(p + ".multiplicity: must be a positive integer");
            mult = static_cast<std::uint64_t>(k);
        }
        fam.push_back({located(p, [&] { return make_proper_pair(ctx, c, cp); }), mult});
    }
    return fam;
}

} // namespace detail

inline ProblemFile parse_problem(const std::string& text) {
    const json doc = detail::parse_text(text);
    using detail::field;
    using detail::get_int;
    using detail::get_ints;
    const int n = get_int(field(doc, "n", "$"), "$.n");
    const int np = get_int(field(doc, "nPrime", "$"), "$.nPrime");
    auto x = get_ints(field(doc, "X", "$"), "$.X");
    auto y = get_ints(field(doc, "Y", "$"), "$.Y");
    auto xp = get_ints(field(doc, "XPrime", "$"), "$.XPrime");
    auto yp = get_ints(field(doc, "YPrime", "$"), "$.YPrime");
    Context ctx = detail::located("$", [&] { return make_context(n, np, x, y, xp, yp); });
    Family a = detail::parse_family(field(doc, "A", "$"), ctx, "$.A");
    Family b = detail::parse_family(field(doc, "B", "$"), ctx, "$.B");
    return {std::move(ctx), std::move(a), std::move(b)};
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ProblemFile load_problem(const std::string& path) {
    try {
        return parse_problem(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline json to_json(const ProblemFile& p) {
    auto fam = [](const Family& f) {
        json arr = json::array();
        for (const auto& e : f)
            arr.push_back({{"C", e.pair.c}, {"CPrime", e.pair.c_prime}, {"multiplicity", e.multiplicity}});
        return arr;
    };
    return {{"n", p.ctx.n()},       {"nPrime", p.ctx.n_prime()}, {"X", p.ctx.x()},  {"Y", p.ctx.y()},
            {"XPrime", p.ctx.x_prime()}, {"YPrime", p.ctx.y_prime()}, {"A", fam(p.a)}, {"B", fam(p.b)}};
}

// --- matchings --------------------------------------------------------------

inline GroundElement parse_element(const std::string& s) {
    if (s.empty()) throw ParseError("empty ground element");
    const bool primed = s.back() == '\'';
    const std::string digits = primed ? s.substr(0, s.size() - 1) : s;
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError("bad ground element \"" + s + "\"");
    const int idx = std::stoi(digits);
    return primed ? col(idx) : row(idx);
}

inline json to_json(const Matching& m) {
    json arr = json::array();
    for (const auto& c : m.couples) arr.push_back({to_string(c.first), to_string(c.second)});
    return arr;
}

inline Matching matching_from_json(const json& v) {
    if (!v.is_array()) throw ParseError("matching: expected an array of couples");
    std::vector<Couple> cs;
    for (const auto& c : v) {
        if (!c.is_array() || c.size() != 2 || !c[0].is_string() || !c[1].is_string())
            throw ParseError("matching: couples are pairs of strings");
        cs.emplace_back(parse_element(c[0].get<std::string>()), parse_element(c[1].get<std::string>()));
    }
    return Matching(std::move(cs));
}

// --- verdicts ---------------------------------------------------------------

inline json to_json(const Verdict& v) {
    json out = {{"status", to_string(v.status)}};
    out["witnessMatching"] = v.witness ? to_json(*v.witness) : json(nullptr);
    json counts = json::array();
    for (const auto& [m, c] : v.counts)
        counts.push_back({{"matching", to_json(m)}, {"countInA", c.in_a}, {"countInB", c.in_b}});
    out["counts"] = counts;
    return out;
}

inline Verdict verdict_from_json(const json& j) {
    Verdict v;
    const auto status = j.at("status").get<std::string>();
    if (status == "Universal") v.status = Status::Universal;
    else if (status == "NotUniversal") v.status = Status::NotUniversal;
    else throw ParseError("verdict: unknown status \"" + status + "\"");
    if (!j.at("witnessMatching").is_null()) v.witness = matching_from_json(j["witnessMatching"]);
    for (const auto& e : j.at("counts"))
        v.counts[matching_from_json(e.at("matching"))] = {e.at("countInA").get<std::uint64_t>(),
                                                          e.at("countInB").get<std::uint64_t>()};
    return v;
}

// --- networks ---------------------------------------------------------------

inline json to_json(const PlanarNetwork& g, const Weighting* w = nullptr) {
    json vs = json::array(), es = json::array(), ss = json::array(), ts = json::array();
    for (const auto& v : g.vertices)
        vs.push_back({{"id", v.id}, {"x", detail::rational_json(v.pos.x)}, {"y", detail::rational_json(v.pos.y)}});
    for (const auto& e : g.edges) es.push_back({{"tail", g.vertices[e.tail].id}, {"head", g.vertices[e.head].id}});
    for (int s : g.sources) ss.push_back(g.vertices[s].id);
    for (int t : g.sinks) ts.push_back(g.vertices[t].id);
    json out = {{"vertices", vs}, {"edges", es}, {"sources", ss}, {"sinks", ts}};
    if (w) {
        json ws = json::object();
        for (std::size_t v = 0; v < g.vertices.size(); ++v) ws[g.vertices[v].id] = detail::rational_json((*w)[v]);
        out["weights"] = ws;
    }
    return out;
}

struct NetworkFile {
    PlanarNetwork network;
    std::optional<Weighting> weights;
};

inline NetworkFile network_from_json(const json& j) {
    using detail::field;
    NetworkFile out;
    auto& g = out.network;
    std::map<std::string, int> ids;
    const auto& vs = field(j, "vertices", "$");
    if (!vs.is_array()) throw ParseError("$.vertices: expected an array");
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const std::string p = "$.vertices[" + std::to_string(i) + "]";
        const auto& idv = field(vs[i], "id", p);
        if (!idv.is_string()) throw ParseError(p + ".id: expected a string");
        const auto id = idv.get<std::string>();
        if (!ids.emplace(id, static_cast<int>(i)).second) throw ParseError(p + ".id: duplicate \"" + id + "\"");
        g.add_vertex(id, detail::get_rational(field(vs[i], "x", p), p + ".x"),
                     detail::get_rational(field(vs[i], "y", p), p + ".y"));
    }
    auto lookup = [&](const json& v, const std::string& p) {
        if (!v.is_string()) throw ParseError(p + ": expected a vertex id");
        auto it = ids.find(v.get<std::string>());
        if (it == ids.end()) throw ParseError(p + ": unknown vertex \"" + v.get<std::string>() + "\"");
        return it->second;
    };
    const auto& es = field(j, "edges", "$");
    if (!es.is_array()) throw ParseError("$.edges: expected an array");
    for (std::size_t i = 0; i < es.size(); ++i) {
        const std::string p = "$.edges[" + std::to_string(i) + "]";
        g.add_edge(lookup(field(es[i], "tail", p), p + ".tail"), lookup(field(es[i], "head", p), p + ".head"));
    }
    for (const char* key : {"sources", "sinks"}) {
        const auto& arr = field(j, key, "$");
        if (!arr.is_array()) throw ParseError(std::string("$.") + key + ": expected an array");
        auto& dst = std::string(key) == "sources" ? g.sources : g.sinks;
        for (std::size_t i = 0; i < arr.size(); ++i)
            dst.push_back(lookup(arr[i], std::string("$.") + key + "[" + std::to_string(i) + "]"));
    }
    if (j.contains("weights")) {
        Weighting w(g.vertices.size(), Rational(1));
        const auto& ws = j["weights"];
        if (!ws.is_object()) throw ParseError("$.weights: expected an object keyed by vertex id");
        for (auto it = ws.begin(); it != ws.end(); ++it) {
            const std::string p = "$.weights." + it.key();
            w[lookup(json(it.key()), p)] = detail::get_rational(it.value(), p);
        }
        out.weights = std::move(w);
    }
    return out;
}

// --- certificates -----------------------------------------------------------

inline json to_json(const Matrix& q) {
    json rows = json::array();
    for (int i = 0; i < q.rows(); ++i) {
        json r = json::array();
        for (int j = 0; j < q.cols(); ++j) r.push_back(to_string(q(i, j)));
        rows.push_back(r);
    }
    return rows;
}

inline Matrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("matrix: expected a nonempty array of rows");
    Matrix q(static_cast<int>(j.size()), static_cast<int>(j[0].size()));
    for (int i = 0; i < q.rows(); ++i) {
        if (static_cast<int>(j[i].size()) != q.cols()) throw ParseError("matrix: ragged rows");
        for (int k = 0; k < q.cols(); ++k)
            q(i, k) = detail::get_rational(j[i][k], "matrix[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
    return q;
}

inline json to_json(const WitnessCertificate& c) {
    return {{"matching", to_json(c.matching)},
            {"countA", c.count_a},
            {"countB", c.count_b},
            {"lhsValue", to_string(c.lhs)},
            {"positiveSum", to_string(c.positive_sum)},
            {"negativeSum", to_string(c.negative_sum)},
            {"matrix", to_json(c.matrix)},
            {"network", to_json(c.network)}};
}

inline WitnessCertificate certificate_from_json(const json& j) {
    WitnessCertificate c;
    c.matching = matching_from_json(j.at("matching"));
    c.count_a = j.at("countA").get<std::uint64_t>();
    c.count_b = j.at("countB").get<std::uint64_t>();
    c.lhs = detail::get_rational(j.at("lhsValue"), "lhsValue");
    c.positive_sum = detail::get_rational(j.at("positiveSum"), "positiveSum");
    c.negative_sum = detail::get_rational(j.at("negativeSum"), "negativeSum");
    c.matrix = matrix_from_json(j.at("matrix"));
    c.network = network_from_json(j.at("network")).network;
    return c;
}

} // namespace tnn
