#pragma once

#include <cstdlib>
#include <utility>

#include "padiflow/interval.hpp"
#include "padiflow/padic.hpp"

namespace padiflow {

// Exact logarithmic radius u*log(p) + v*log(2) for a fixed odd prime p.
// Since log(p) and log(2) are linearly independent over Q, equality of
// values is equality of coefficient pairs, and any nonzero combination can
// be sign-separated by a sufficiently tight rational enclosure. The prime
// travels with the value so that radii of different primes never get
// compared by accident.
struct LogValue {
    Rational coefLogP;
    Rational coefLog2;
    long p = 3;
};

inline LogValue makeLogValue(Rational coefLogP, Rational coefLog2, long p) {
    requireOddPrime(p, "makeLogValue");
    return LogValue{std::move(coefLogP), std::move(coefLog2), p};
}

inline LogValue logZero(long p) { return makeLogValue(Rational(0), Rational(0), p); }

inline void requireSamePrime(const LogValue& a, const LogValue& b, const char* who) {
    if (a.p != b.p)
        throw error(errc::invalid_argument, std::string(who) + ": mixed primes " +
                                                std::to_string(a.p) + " and " + std::to_string(b.p));
}

inline LogValue operator+(const LogValue& a, const LogValue& b) {
    requireSamePrime(a, b, "LogValue+");
    return LogValue{Rational(a.coefLogP + b.coefLogP), Rational(a.coefLog2 + b.coefLog2), a.p};
}

inline LogValue operator-(const LogValue& a, const LogValue& b) {
    requireSamePrime(a, b, "LogValue-");
    return LogValue{Rational(a.coefLogP - b.coefLogP), Rational(a.coefLog2 - b.coefLog2), a.p};
}

inline LogValue scale(const LogValue& a, const Rational& c) {
    return LogValue{Rational(c * a.coefLogP), Rational(c * a.coefLog2), a.p};
}

inline bool sameCoefficients(const LogValue& a, const LogValue& b) {
    return a.coefLogP == b.coefLogP && a.coefLog2 == b.coefLog2;
}

namespace detail {

// Enclosure of log(num/den) for num > den >= 1 with num/den < 2, via
// 2*atanh(z), z = (num-den)/(num+den) in [0, 1/3). The tail after J terms
// is bounded by 2 z^(2J+1) / ((2J+1)(1-z^2)).
inline RatInterval atanhLogEnclosure(const Integer& num, const Integer& den, const Rational& width) {
    const Rational z = makeRational(Integer(num - den), Integer(num + den));
    if (z == 0) return RatInterval::point(Rational(0));
    const Rational z2(z * z);
    const Rational tailFactor(2 / (1 - z2));
    Rational sum(0);
    Rational zpow(z);
    for (long j = 0;; ++j) {
        sum += 2 * zpow / (2 * j + 1);
        zpow *= z2;
        const Rational tail(tailFactor * zpow / (2 * j + 3));
        if (tail <= width) return RatInterval(sum, Rational(sum + tail));
    }
}

// log p = a*log 2 + log(p / 2^a) with 2^a <= p < 2^(a+1).
inline long log2Floor(long p) {
    long a = 0;
    while ((2L << a) <= p) ++a;
    return a;
}

} // namespace detail

inline RatInterval log2Enclosure(const Rational& width) {
    return detail::atanhLogEnclosure(Integer(2), Integer(1), width);
}

// Certified enclosure of log(n) for any integer n >= 1, via the same
// n = 2^a m splitting that keeps the series argument below 1/3.
inline RatInterval logIntegerEnclosure(long n, const Rational& width) {
    if (n < 1) throw error(errc::invalid_argument, "logIntegerEnclosure: n must be >= 1");
    if (width <= 0) throw error(errc::invalid_argument, "logIntegerEnclosure: width must be positive");
    if (n == 1) return RatInterval::point(Rational(0));
    const long a = detail::log2Floor(n);
    Integer po2(1);
    mpz_mul_2exp(po2.get_mpz_t(), po2.get_mpz_t(), static_cast<mp_bitcnt_t>(a));
    if (a == 0) return detail::atanhLogEnclosure(Integer(n), po2, width);
    const Rational half(width / 2);
    return scale(log2Enclosure(Rational(half / a)), Rational(a)) +
           detail::atanhLogEnclosure(Integer(n), po2, half);
}

// Certified enclosure of coefLogP*log(p) + coefLog2*log(2) with the
// requested width. Exact [0,0] when both coefficients vanish.
inline RatInterval logEnclosure(const LogValue& a, const Rational& width) {
    if (width <= 0) throw error(errc::invalid_argument, "logEnclosure: width must be positive");
    const long shift = detail::log2Floor(a.p);
    const Rational c2(a.coefLogP * shift + a.coefLog2);
    const Rational& cm = a.coefLogP;

    RatInterval out = RatInterval::point(Rational(0));
    const int parts = (c2 != 0 ? 1 : 0) + (cm != 0 ? 1 : 0);
    if (parts == 0) return out;
    const Rational budget(width / parts);
    if (c2 != 0) {
        const Rational w2(budget / abs(c2));
        out = out + scale(log2Enclosure(w2), c2);
    }
    if (cm != 0) {
        const Rational wm(budget / abs(cm));
        Integer po2(1);
        mpz_mul_2exp(po2.get_mpz_t(), po2.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
        out = out + scale(detail::atanhLogEnclosure(Integer(a.p), po2, wm), cm);
    }
    return out;
}

enum class Cmp { LT, EQ, GT };

// Initial width for adaptive sign separation; PADIFLOW_PRECISION (a rational
// string) overrides it. Refinement shrinks the width geometrically, so this
// only tunes how much work the easy comparisons do.
inline const Rational& initialEnclosureWidth() {
    static const Rational w = [] {
        if (const char* env = std::getenv("PADIFLOW_PRECISION")) {
            Rational r = rationalFromString(env);
            if (r <= 0) throw error(errc::parse_error, "PADIFLOW_PRECISION must be positive");
            return r;
        }
        return makeRational(1, 1024);
    }();
    return w;
}

// Certified three-way comparison. EQ exactly when the coefficient pairs
// coincide; otherwise the difference is a nonzero value, so some finite
// refinement of its enclosure excludes zero and settles the sign.
inline Cmp logvalCompare(const LogValue& a, const LogValue& b) {
    requireSamePrime(a, b, "logvalCompare");
    const LogValue d = a - b;
    if (d.coefLogP == 0 && d.coefLog2 == 0) return Cmp::EQ;
    Rational w = initialEnclosureWidth();
    for (int round = 0; round < 1024; ++round) {
        const RatInterval enc = logEnclosure(d, w);
        if (enc.strictlyPositive()) return Cmp::GT;
        if (enc.strictlyNegative()) return Cmp::LT;
        w /= 16;
    }
    throw error(errc::invalid_argument, "logvalCompare: failed to separate values");
}

inline bool logvalLE(const LogValue& a, const LogValue& b) { return logvalCompare(a, b) != Cmp::GT; }

inline bool isNonpositive(const LogValue& a) { return logvalLE(a, logZero(a.p)); }

// Three-way comparison of an exact LogValue against a fixed enclosure of
// some other quantity. Returns EQ only in the inconclusive case where the
// value's refined enclosure stays inside the target interval; callers that
// need a strict verdict must pass a target wide enough to separate.
inline Cmp compareToInterval(const LogValue& a, const RatInterval& target) {
    Rational w = initialEnclosureWidth();
    for (int round = 0; round < 1024; ++round) {
        const RatInterval enc = logEnclosure(a, w);
        if (enc.lo > target.hi) return Cmp::GT;
        if (enc.hi < target.lo) return Cmp::LT;
        if (enc.lo >= target.lo && enc.hi <= target.hi) return Cmp::EQ;
        w /= 16;
    }
    throw error(errc::invalid_argument, "compareToInterval: failed to separate");
}

} // namespace padiflow
