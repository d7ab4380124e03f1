#pragma once

#include <algorithm>

#include "padiflow/rational.hpp"

namespace padiflow {

// Closed interval with exact rational endpoints. All operations are exact,
// so enclosures stay rigorous without rounding-mode bookkeeping; the only
// deliberate widening is dyadicOutward, which caps endpoint bit growth.
struct RatInterval {
    Rational lo;
    Rational hi;

    RatInterval() : lo(0), hi(0) {}
    RatInterval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
        if (lo > hi) throw error(errc::invalid_argument, "interval with lo > hi");
    }

    static RatInterval point(const Rational& x) { return RatInterval(x, x); }

    Rational width() const { return Rational(hi - lo); }
    bool contains(const Rational& x) const { return lo <= x && x <= hi; }
    bool strictlyPositive() const { return lo > 0; }
    bool strictlyNegative() const { return hi < 0; }
};

inline RatInterval operator+(const RatInterval& a, const RatInterval& b) {
    return RatInterval(Rational(a.lo + b.lo), Rational(a.hi + b.hi));
}

inline RatInterval operator-(const RatInterval& a, const RatInterval& b) {
    return RatInterval(Rational(a.lo - b.hi), Rational(a.hi - b.lo));
}

inline RatInterval operator-(const RatInterval& a) {
    return RatInterval(Rational(-a.hi), Rational(-a.lo));
}

inline RatInterval scale(const RatInterval& a, const Rational& c) {
    if (c >= 0) return RatInterval(Rational(c * a.lo), Rational(c * a.hi));
    return RatInterval(Rational(c * a.hi), Rational(c * a.lo));
}

inline RatInterval operator*(const RatInterval& a, const RatInterval& b) {
    const Rational p1(a.lo * b.lo), p2(a.lo * b.hi), p3(a.hi * b.lo), p4(a.hi * b.hi);
    return RatInterval(std::min(std::min(p1, p2), std::min(p3, p4)),
                       std::max(std::max(p1, p2), std::max(p3, p4)));
}

inline RatInterval square(const RatInterval& a) {
    if (a.lo >= 0) return RatInterval(Rational(a.lo * a.lo), Rational(a.hi * a.hi));
    if (a.hi <= 0) return RatInterval(Rational(a.hi * a.hi), Rational(a.lo * a.lo));
    Rational m = std::max<Rational>(Rational(-a.lo), a.hi);
    return RatInterval(Rational(0), Rational(m * m));
}

// Outward rounding to denominator 2^bits. Summing thousands of exact terms
// would otherwise accumulate unbounded denominators via lcm growth.
inline RatInterval dyadicOutward(const RatInterval& a, unsigned bits = 96) {
    Integer den(1);
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), bits);
    Integer nlo, nhi;
    {
        Rational s(a.lo * den);
        mpz_fdiv_q(nlo.get_mpz_t(), s.get_num().get_mpz_t(), s.get_den().get_mpz_t());
    }
    {
        Rational s(a.hi * den);
        mpz_cdiv_q(nhi.get_mpz_t(), s.get_num().get_mpz_t(), s.get_den().get_mpz_t());
    }
    return RatInterval(makeRational(nlo, den), makeRational(nhi, den));
}

} // namespace padiflow
