#pragma once

#include <gmpxx.h>

#include <string>

#include "padiflow/errors.hpp"

namespace padiflow {

// Exact rational scalar. mpq_class keeps values canonical (reduced, positive
// denominator, zero as 0/1) as long as construction goes through the helpers
// below; raw two-argument construction is the only way to break that and is
// therefore wrapped by makeRational.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational makeRational(const Integer& num, const Integer& den) {
    if (den == 0) throw error(errc::invalid_argument, "rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational makeRational(long num, long den = 1) {
    return makeRational(Integer(num), Integer(den));
}

// Accepts "n" or "n/d" with optional sign; result is canonical.
inline Rational rationalFromString(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return makeRational(Integer(text), Integer(1));
        return makeRational(Integer(text.substr(0, slash)), Integer(text.substr(slash + 1)));
    } catch (const std::invalid_argument&) {
        throw error(errc::parse_error, "malformed rational '" + text + "'");
    }
}

// Canonical form: "n" when the denominator is 1, "n/d" otherwise.
inline std::string rationalToString(const Rational& q) {
    return q.get_str();
}

} // namespace padiflow
