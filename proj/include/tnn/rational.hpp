#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "tnn/errors.hpp"

namespace tnn {

// Exact arbitrary-precision rational, always kept in canonical form.
using Rational = mpq_class;

// Parses "p/q", "-p/q" or an integer string. Rejects zero denominators.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw ParseError("empty rational");
    const auto slash = s.find('/');
    auto valid_int = [](const std::string& part, bool allow_sign) {
        if (part.empty()) return false;
        std::size_t i = 0;
        if (allow_sign && (part[0] == '-' || part[0] == '+')) i = 1;
        if (i == part.size()) return false;
        for (; i < part.size(); ++i)
            if (part[i] < '0' || part[i] > '9') return false;
        return true;
    };
    if (slash == std::string::npos) {
        if (!valid_int(s, true)) throw ParseError("bad rational '" + s + "'");
    } else {
        if (!valid_int(s.substr(0, slash), true) || !valid_int(s.substr(slash + 1), false))
            throw ParseError("bad rational '" + s + "'");
    }
    if (s[0] == '+') s.erase(0, 1);
    mpq_class q;
    if (slash != std::string::npos) {
        mpz_class den(s.substr(s.find('/') + 1));
        if (den == 0) throw ParseError("zero denominator in '" + s + "'");
    }
    q.set_str(s, 10);
    q.canonicalize();
    return q;
}

// "p/q", or just "p" when the denominator is 1.
inline std::string to_string(const Rational& q) {
    return q.get_str(10);
}

} // namespace tnn
