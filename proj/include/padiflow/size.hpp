#pragma once

#include <set>
#include <vector>

#include "padiflow/errors.hpp"
#include "padiflow/interval.hpp"
#include "padiflow/logvalue.hpp"
#include "padiflow/padic.hpp"
#include "padiflow/rational.hpp"
#include "padiflow/series.hpp"

namespace padiflow {

// Rational extended with +infinity, for infima over empty/zero data.
struct ExtRational {
    bool infinite = false;
    Rational value;

    static ExtRational infinity() { return ExtRational{true, Rational(0)}; }
    static ExtRational finite(Rational v) { return ExtRational{false, std::move(v)}; }

    friend bool operator==(const ExtRational& a, const ExtRational& b) {
        if (a.infinite != b.infinite) return false;
        return a.infinite || a.value == b.value;
    }
};

// Growth data for a normalized graph series phi with phi(0) = 0.
// Exponents are coefficients of log p:
//   lambdaP       = inf_{m>=1, c_{m+1} != 0} vp(c_{m+1}) / m
//   lowerBoundLogP: log of a certified lower bound for the radius of the
//                   shifted series phi/X, i.e. min(0, lambdaP)
//   exact         : the bound is attained (vp(c_1) = 0)
//   rhoLowerLogP  : inf_{m>=1, c_m != 0} vp(c_m) / m, a radius lower bound
//                   for phi itself
struct SizeEstimate {
    ExtRational lambdaP;
    Rational lowerBoundLogP;
    bool exact = false;
    ExtRational rhoLowerLogP;
};

inline SizeEstimate lambdaExponent(const TruncSeries& phi, long p) {
    requireOddPrime(p, "lambdaExponent");
    if (phi[0] != 0)
        throw error(errc::hypothesis_violated, "lambdaExponent: series must vanish at 0");
    if (phi.order() >= 1 && phi[1] != 0) {
        const PadicVal v1 = vp(phi[1], p);
        if (!v1.infinite && v1.v < 0)
            throw error(errc::hypothesis_violated,
                        "lambdaExponent: linear coefficient must be p-integral");
    }

    SizeEstimate est;
    est.lambdaP = ExtRational::infinity();
    est.rhoLowerLogP = ExtRational::infinity();
    for (int m = 1; m <= phi.order(); ++m) {
        if (phi[m] == 0) continue;
        const PadicVal v = vp(phi[m], p);
        const Rational rho = makeRational(v.v, m);
        if (est.rhoLowerLogP.infinite || rho < est.rhoLowerLogP.value)
            est.rhoLowerLogP = ExtRational::finite(rho);
        if (m >= 2) {
            const Rational lam = makeRational(v.v, m - 1);
            if (est.lambdaP.infinite || lam < est.lambdaP.value)
                est.lambdaP = ExtRational::finite(lam);
        }
    }
    est.lowerBoundLogP = est.lambdaP.infinite ? Rational(0)
                                              : std::min(Rational(0), est.lambdaP.value);
    est.exact = phi.order() >= 1 && phi[1] != 0 && vp(phi[1], p) == PadicVal::finite(0);
    return est;
}

// psi = phi / X for a series with ord(phi) >= 2; the shift is what the
// blow-up does to a graph.
inline TruncSeries properTransform(const TruncSeries& phi) {
    if (phi.order() < 2 || phi[0] != 0 || phi[1] != 0)
        throw error(errc::invalid_argument,
                    "properTransform: series must have vanishing order >= 2");
    TruncSeries psi(phi.order() - 1);
    for (int m = 1; m <= phi.order(); ++m) psi.set(m - 1, phi[m]);
    return psi;
}

// Checked variant that also certifies the quadratic coefficient is
// p-integral, so psi'(0) lands in the valuation ring.
inline TruncSeries properTransform(const TruncSeries& phi, long p) {
    requireOddPrime(p, "properTransform");
    if (phi.order() >= 2 && phi[2] != 0) {
        const PadicVal v = vp(phi[2], p);
        if (!v.infinite && v.v < 0)
            throw error(errc::invalid_argument,
                        "properTransform: quadratic coefficient must be p-integral");
    }
    return properTransform(phi);
}

// Does f2 * f1 == phi(f1) through the common truncation order?  This is the
// functional identity a straightened graph must satisfy.
inline bool straighteningCheck(const TruncSeries& f1, const TruncSeries& f2,
                               const TruncSeries& phi) {
    if (f1[0] != 0)
        throw error(errc::invalid_argument, "straighteningCheck: f1 must vanish at 0");
    const int n = std::min(commonOrder(f1, f2), phi.order());
    const TruncSeries lhs = mulTrunc(f2.restrictTo(n), f1.restrictTo(n));
    const TruncSeries rhs = composeTrunc(phi.restrictTo(n), f1.restrictTo(n));
    return lhs == rhs;
}

struct BudgetResult {
    RatInterval partial;   // sum over retained primes p <= pMax
    RatInterval tail;      // certified bound for the sum over primes > pMax
    long pMax = 0;
    long primesUsed = 0;
};

namespace detail {

// Enclosure of factor * log(n)^2 with total width at most `width`.
inline RatInterval scaledLogSquared(long n, const Rational& factor, const Rational& width) {
    // log(n)^2 widens a log-enclosure of width w by at most (2*log n + w) * w;
    // 2*bits + 1 over-estimates that slope for w <= 1.
    const long bits = log2Floor(n) + 1;
    Rational w = width / (factor * Rational(2 * bits + 1));
    if (w > 1) w = 1;
    return scale(square(logIntegerEnclosure(n, w)), factor);
}

}  // namespace detail

// Certified interval arithmetic for the convergence budget
//   sum over admissible odd primes p of C * t * log(p)^2 / (p-1)^2,
// split at pMax into an exact partial sum and an integral-comparison tail
//   C * t * (log(pMax)^2 + 2 log(pMax) + 2) / pMax.
// Admissible: odd, p > max(s, t), not excluded.
inline BudgetResult aanalyticityBudget(long s, long t, const Rational& C, long pMax,
                                       const std::set<long>& excluded = {},
                                       const Rational& targetWidth = makeRational(1, 10000000)) {
    if (s < 1 || t < 1)
        throw error(errc::invalid_argument, "aanalyticityBudget: s and t must be positive");
    if (pMax < 3) throw error(errc::invalid_argument, "aanalyticityBudget: pMax must be >= 3");
    if (C <= 0) throw error(errc::invalid_argument, "aanalyticityBudget: C must be positive");
    if (targetWidth <= 0)
        throw error(errc::invalid_argument, "aanalyticityBudget: width must be positive");

    const long minP = std::max(s, t);
    std::vector<long> primes;
    for (long p : primesUpTo(pMax))
        if (p > 2 && p > minP && excluded.find(p) == excluded.end()) primes.push_back(p);

    BudgetResult res;
    res.pMax = pMax;
    res.primesUsed = static_cast<long>(primes.size());

    const Rational perTerm = targetWidth / Rational(2 * (static_cast<long>(primes.size()) + 1));
    RatInterval partial = RatInterval::point(Rational(0));
    for (long p : primes) {
        const Rational denom = Rational(p - 1) * Rational(p - 1);
        const Rational factor = C * Rational(t) / denom;
        partial = partial + detail::scaledLogSquared(p, factor, perTerm);
        // Dyadic compression keeps the running denominators bounded; the
        // outward rounding per step is far below the per-term budget.
        partial = dyadicOutward(partial, 160);
    }
    res.partial = partial;

    // Tail: integral_{P}^{inf} log(x)^2 / x^2 dx = (log(P)^2 + 2 log(P) + 2) / P.
    // Primes above pMax are odd, hence spaced at least 2 apart, which absorbs
    // the (p-1)^2 vs x^2 shift against the full integral over (pMax, inf).
    const Rational tailHalf = targetWidth / 2;
    const Rational tailFactor = C * Rational(t);
    const long bits = detail::log2Floor(pMax) + 1;
    Rational w = tailHalf * Rational(pMax) / (tailFactor * Rational(2 * bits + 3));
    if (w > 1) w = 1;
    const RatInterval lg = logIntegerEnclosure(pMax, w);
    RatInterval numer = square(lg) + scale(lg, Rational(2)) + RatInterval::point(Rational(2));
    RatInterval tail = scale(numer, tailFactor / Rational(pMax));
    if (tail.lo < 0) tail.lo = 0;
    res.tail = dyadicOutward(tail, 200);
    if (res.tail.lo < 0) res.tail.lo = 0;
    return res;
}

}  // namespace padiflow
