#pragma once

#include <numeric>

#include "padiflow/gauss.hpp"

namespace padiflow {

enum class LemmaClause { changeVar1, changeVar2, odeSpecial1, odeSpecial2 };

inline const char* lemmaClauseName(LemmaClause c) {
    switch (c) {
        case LemmaClause::changeVar1: return "change-of-variable-1";
        case LemmaClause::changeVar2: return "change-of-variable-2";
        case LemmaClause::odeSpecial1: return "special-ode-1";
        case LemmaClause::odeSpecial2: return "special-ode-2";
    }
    return "unknown";
}

// Pair of certified log-radii produced by one lemma, p-adic clause first,
// 2-adic clause second. Both lie at or below the input radius.
struct RadiusPair {
    LogValue r1;
    LemmaClause clause1;
    LogValue r2;
    LemmaClause clause2;
};

namespace detail {

inline void requireLemmaK(int k) {
    if (k < 1 || k > 30) throw error(errc::invalid_argument, "lemma index k out of range");
}

inline void requireVanishingOrder(const TruncSeries& f, long minOrd, const char* who) {
    if (!f.isZero() && f.ord() < minOrd)
        throw error(errc::invalid_argument,
                    std::string(who) + ": needs vanishing order >= " + std::to_string(minOrd) +
                        ", got " + std::to_string(f.ord()));
}

inline void requireNonpositiveRadius(const LogValue& logr, const char* who) {
    if (!isNonpositive(logr))
        throw error(errc::invalid_argument, std::string(who) + ": log-radius must be <= 0");
}

} // namespace detail

// Primitive of b/X under X d/dX: sum of (b_m/m) X^m over m >= 2^k.
inline TruncSeries bMap(const TruncSeries& b, int k) {
    detail::requireLemmaK(k);
    detail::requireVanishingOrder(b, 1L << k, "bMap");
    TruncSeries out(b.order());
    for (int m = 1; m <= b.order(); ++m) {
        if (b[m] == 0) continue;
        out.set(m, Rational(b[m] / m));
    }
    return out;
}

// Radii at which ||bMap(b, k)|| <= p^(-2/(p-1)) is certified whenever
// ||b||_r <= r/p and b vanishes to order >= 2^k:
//   r1 = logr - (2/(p(p-1))) log p, r2 = logr - ((k+1)/2^k) log 2.
inline RadiusPair bMapRadius(int k, long p, const LogValue& logr) {
    detail::requireLemmaK(k);
    requireOddPrime(p, "bMapRadius");
    if (logr.p != p) throw error(errc::invalid_argument, "bMapRadius: logr carries a different prime");
    detail::requireNonpositiveRadius(logr, "bMapRadius");
    LogValue r1 = logr;
    r1.coefLogP -= makeRational(2, p * (p - 1));
    LogValue r2 = logr;
    r2.coefLog2 -= makeRational(k + 1, 1L << k);
    return RadiusPair{r1, LemmaClause::changeVar1, r2, LemmaClause::changeVar2};
}

// Term-by-term solution A = sum a_m/(m + alpha) X^m, alpha = s/t, of the
// Euler equation X A' + alpha A = a. Unique since alpha > 0 keeps every
// divisor m + alpha nonzero.
inline TruncSeries resolvent(const TruncSeries& a, long s, long t, int k) {
    if (s < 1 || t < 1) throw error(errc::invalid_argument, "resolvent: s, t must be positive");
    if (std::gcd(s, t) != 1) throw error(errc::invalid_argument, "resolvent: s, t must be coprime");
    detail::requireLemmaK(k);
    detail::requireVanishingOrder(a, 1L << k, "resolvent");
    TruncSeries out(a.order());
    for (int m = 1; m <= a.order(); ++m) {
        if (a[m] == 0) continue;
        out.set(m, makeRational(Integer(a[m].get_num() * t), Integer(a[m].get_den() * (Integer(t) * m + s))));
    }
    return out;
}

// Radii at which ||resolvent(a, s, t, k)|| <= radius is certified whenever
// ||a||_r <= r/p and a vanishes to order >= 2^k:
//   r1 = logr - (t/(p-1)^2) log p        (always)
//   r2 = logr - (k t/2^(k-1)) log 2      (needs 2^k >= alpha + 2)
inline RadiusPair resolventRadius(int k, long p, long s, long t, const LogValue& logr) {
    detail::requireLemmaK(k);
    requireOddPrime(p, "resolventRadius");
    if (logr.p != p) throw error(errc::invalid_argument, "resolventRadius: logr carries a different prime");
    detail::requireNonpositiveRadius(logr, "resolventRadius");
    if (s < 1 || t < 1 || s > p - 1 || t > p - 1)
        throw error(errc::invalid_argument, "resolventRadius: s, t must lie in [1, p-1]");
    if (std::gcd(s, t) != 1) throw error(errc::invalid_argument, "resolventRadius: s, t must be coprime");
    if ((1L << k) * t < s + 2 * t)
        throw error(errc::precondition_violated,
                    "resolventRadius: 2-adic clause needs 2^k >= alpha + 2 (alpha = " + std::to_string(s) +
                        "/" + std::to_string(t) + ", k = " + std::to_string(k) + ")");
    LogValue r1 = logr;
    r1.coefLogP -= makeRational(t, (p - 1) * (p - 1));
    LogValue r2 = logr;
    r2.coefLog2 -= makeRational(k * t, 1L << (k - 1));
    return RadiusPair{r1, LemmaClause::odeSpecial1, r2, LemmaClause::odeSpecial2};
}

// Formal exponential of a series with B(0) = 0, by the coefficient
// recursion m E_m = sum_{i=1}^{m} i B_i E_{m-i} (that is, E' = B' E).
inline TruncSeries expTrunc(const TruncSeries& B) {
    if (B[0] != 0) throw error(errc::invalid_argument, "expTrunc: series must vanish at 0");
    TruncSeries e(B.order());
    e.set(0, Rational(1));
    for (int m = 1; m <= B.order(); ++m) {
        Rational acc(0);
        for (int i = 1; i <= m; ++i) {
            if (B[i] == 0 || e[m - i] == 0) continue;
            acc += i * B[i] * e[m - i];
        }
        e.set(m, Rational(acc / m));
    }
    return e;
}

// Shared hypothesis check for the regular-singular problem class:
// a(0) = a'(0) = 0, b(0) = 0, log r <= 0, ||a||_r <= r/p, ||b||_r <= r/p and
// ||c_m||_r <= 1/p for every family term, all exact on the truncations.
inline void checkOdeHypotheses(const TruncSeries& a, const TruncSeries& b, const SeriesFamily& c,
                               long p, const LogValue& logr) {
    requireOddPrime(p, "checkOdeHypotheses");
    if (logr.p != p) throw error(errc::invalid_argument, "checkOdeHypotheses: logr carries a different prime");
    detail::requireNonpositiveRadius(logr, "checkOdeHypotheses");
    if (a[0] != 0 || (a.order() >= 1 && a[1] != 0))
        throw error(errc::hypothesis_violated, "inhomogeneous term must vanish to order 2");
    if (b[0] != 0) throw error(errc::hypothesis_violated, "linear term must vanish at 0");

    const LogValue minusLogP = makeLogValue(Rational(-1), Rational(0), p);
    const LogValue rOverP = logr + minusLogP;
    if (auto m = normViolationIndex(a, rOverP, logr, p))
        throw error(errc::hypothesis_violated, "||a||_r <= r/p fails at coefficient " + std::to_string(*m));
    if (auto m = normViolationIndex(b, rOverP, logr, p))
        throw error(errc::hypothesis_violated, "||b||_r <= r/p fails at coefficient " + std::to_string(*m));
    for (const FamilyTerm& t : c.terms()) {
        if (t.m < 2) throw error(errc::hypothesis_violated, "family index " + std::to_string(t.m) + " below 2");
        if (auto m = normViolationIndex(t.series, minusLogP, logr, p))
            throw error(errc::hypothesis_violated, "||c_" + std::to_string(t.m) + "||_r <= 1/p fails at coefficient " +
                                                       std::to_string(*m));
    }
}

// Result of stripping the linear term by the gauge y = z exp(B):
// a0 = a exp(-B), c0_m = c_m exp((m-1)B), with exp(+-B) of norm exactly 1
// certified at logr1 = logr - (3/(p(p-1))) log p.
struct GaugeResult {
    TruncSeries a0;
    SeriesFamily c0;
    TruncSeries B;
    LogValue logr1;
};

inline GaugeResult gaugeStrip(const TruncSeries& a, const TruncSeries& b, const SeriesFamily& c,
                              long p, const LogValue& logr) {
    checkOdeHypotheses(a, b, c, p, logr);
    if (b.order() >= 1 && b[1] != 0)
        throw error(errc::precondition_violated,
                    "gaugeStrip: linear coefficient of b must vanish (order >= 2 required)");

    const TruncSeries B = bMap(b, 1);
    const TruncSeries expPlus = expTrunc(B);
    const TruncSeries expMinus = expTrunc(neg(B));
    const TruncSeries a0 = mulTrunc(a, expMinus);

    std::vector<FamilyTerm> terms;
    TruncSeries pw = TruncSeries::monomial(0, Rational(1), c.order());
    int have = 1; // pw tracks expPlus^(m-1)
    for (const FamilyTerm& t : c.terms()) {
        while (have < t.m) {
            pw = mulTrunc(pw, expPlus.restrictTo(c.order()));
            ++have;
        }
        terms.push_back(FamilyTerm{t.m, mulTrunc(t.series, pw)});
    }

    LogValue logr1 = logr;
    logr1.coefLogP -= makeRational(3, p * (p - 1));
    return GaugeResult{a0, SeriesFamily(std::move(terms), c.order()), B, logr1};
}

} // namespace padiflow
