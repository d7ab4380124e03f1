#pragma once

#include <stdexcept>
#include <vector>

#include "padiflow/regsing.hpp"

namespace padiflow {

// One instance of the regular-singular problem class
//   X y' + (s/t) y = a(X) + b(X) y + sum_{m>=2} c_m(X) y^m
// over Q with an odd prime p and a log-radius log r <= 0. Construction
// checks the full hypothesis set exactly on the truncations.
struct OdeProblem {
    TruncSeries a;
    TruncSeries b;
    SeriesFamily c;
    long s;
    long t;
    long p;
    LogValue logr;

    OdeProblem(TruncSeries a_, TruncSeries b_, SeriesFamily c_, long s_, long t_, long p_, LogValue logr_)
        : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), s(s_), t(t_), p(p_), logr(std::move(logr_)) {
        requireOddPrime(p, "OdeProblem");
        if (s < 1 || t < 1 || s > p - 1 || t > p - 1)
            throw error(errc::invalid_argument, "OdeProblem: s, t must lie in [1, p-1]");
        if (std::gcd(s, t) != 1) throw error(errc::invalid_argument, "OdeProblem: s, t must be coprime");
        checkOdeHypotheses(a, b, c, p, logr);
    }

    int maxOrder() const {
        int n = std::min(a.order(), b.order());
        if (!c.empty()) n = std::min(n, c.order());
        return n;
    }
};

namespace detail {

inline void requireSolvableOrder(const OdeProblem& prob, int n) {
    if (n < 0) throw error(errc::invalid_argument, "truncation order must be >= 0");
    if (n > prob.maxOrder())
        throw error(errc::invalid_argument, "truncation order " + std::to_string(n) +
                                                " exceeds problem data order " + std::to_string(prob.maxOrder()));
}

} // namespace detail

// Plain coefficient recursion (m + alpha) y_m = [X^m](a + b y + sum c_j y^j),
// solving from below with incrementally maintained powers of y. Serves as
// the independent reference for the Newton route.
inline TruncSeries solveDirect(const OdeProblem& prob, int n) {
    detail::requireSolvableOrder(prob, n);
    const TruncSeries a = prob.a.restrictTo(n);
    const TruncSeries b = prob.b.restrictTo(n);

    std::vector<std::vector<Rational>> pw; // pw[j] holds coefficients of y^(j+1)
    int jmax = 0;
    for (const FamilyTerm& term : prob.c.terms())
        if (2 * term.m <= n) jmax = std::max(jmax, term.m);
    pw.assign(static_cast<size_t>(std::max(jmax, 1)), std::vector<Rational>(static_cast<size_t>(n) + 1, Rational(0)));
    std::vector<Rational>& y = pw[0];

    for (int m = 2; m <= n; ++m) {
        for (int j = 2; j <= jmax; ++j) {
            // [X^m] y^j from y^(j-1); only y-indices <= m-2 are touched
            Rational acc(0);
            const std::vector<Rational>& prev = pw[static_cast<size_t>(j) - 2];
            for (int i = 2 * (j - 1); i <= m - 2; ++i) {
                if (prev[static_cast<size_t>(i)] == 0 || y[static_cast<size_t>(m - i)] == 0) continue;
                acc += prev[static_cast<size_t>(i)] * y[static_cast<size_t>(m - i)];
            }
            pw[static_cast<size_t>(j) - 1][static_cast<size_t>(m)] = acc;
        }
        Rational rhs = a[m];
        for (int i = 1; i <= m - 2; ++i) {
            if (b[i] == 0 || y[static_cast<size_t>(m - i)] == 0) continue;
            rhs += b[i] * y[static_cast<size_t>(m - i)];
        }
        for (const FamilyTerm& term : prob.c.terms()) {
            if (term.m > jmax) break;
            const std::vector<Rational>& pj = pw[static_cast<size_t>(term.m) - 1];
            for (int i = 0; i + 2 * term.m <= m; ++i) {
                const Rational& ci = term.series[i];
                if (ci == 0 || pj[static_cast<size_t>(m - i)] == 0) continue;
                rhs += ci * pj[static_cast<size_t>(m - i)];
            }
        }
        if (rhs != 0) y[static_cast<size_t>(m)] = makeRational(Integer(rhs.get_num() * prob.t),
                                                               Integer(rhs.get_den() * (Integer(prob.t) * m + prob.s)));
    }

    TruncSeries out(n);
    for (int m = 0; m <= n; ++m) out.set(m, y[static_cast<size_t>(m)]);
    return out;
}

// X y' + alpha y - a - b y - c(X, y) on the common truncation; identically
// zero exactly when y solves the equation there.
inline TruncSeries odeResidual(const OdeProblem& prob, const TruncSeries& y) {
    TruncSeries lhs = add(xTimesDerivative(y), scale(y, makeRational(prob.s, prob.t)));
    TruncSeries rhs = add(prob.a.restrictTo(std::min(y.order(), prob.a.order())),
                          mulTrunc(prob.b, y));
    if (!prob.c.empty()) rhs = add(rhs, substituteFamily(prob.c, y));
    return sub(lhs, rhs);
}

// Smallest positive k with (k+1)/2^k <= 1/p^2, the step index where the
// radius ledger switches from p-adic to 2-adic decrements.
inline int findK1(long p) {
    requireOddPrime(p, "findK1");
    const Integer p2 = Integer(p) * p;
    for (int k = 1; k <= 62; ++k) {
        Integer lhs = p2 * (k + 1);
        Integer rhs(1);
        mpz_mul_2exp(rhs.get_mpz_t(), rhs.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
        if (lhs <= rhs) return k;
    }
    throw error(errc::invalid_argument, "findK1: prime out of supported range");
}

enum class Regime { preK1, postK1 };

inline const char* regimeName(Regime r) { return r == Regime::preK1 ? "preK1" : "postK1"; }

struct LedgerEntry {
    int k;
    LogValue logr;
    Regime regime;
};

// Radius bookkeeping of the Newton iteration. certifiedR is the exact
// last ledger radius; closedFormR is a rational enclosure of the closed-form
// bound log r - 14 t (log p)^2/(p-1)^2, which contains (log p)^2 and is
// therefore not itself a LogValue.
struct RadiusLedger {
    int k1 = 0;
    LogValue initialLogR;
    LogValue gaugeLogR;
    LogValue certifiedR;
    std::vector<LedgerEntry> entries;
    RatInterval closedFormR;
};

// Enclosure of 14 t (log p)^2 / (p-1)^2 with the requested width.
inline RatInterval closedFormDecrementEnclosure(long t, long p, const Rational& width) {
    const Rational factor = makeRational(Integer(14) * t, Integer(p - 1) * (p - 1));
    // 2L+1 with L > log p controls the width of the squared enclosure
    const long bits = detail::log2Floor(p) + 1;
    Rational w(width / (factor * (2 * bits + 1)));
    if (w > 1) w = 1;
    const RatInterval logp = logEnclosure(makeLogValue(Rational(1), Rational(0), p), w);
    return scale(square(logp), factor);
}

inline LogValue ledgerTotalDecrement(const RadiusLedger& ledger) {
    return ledger.initialLogR - ledger.certifiedR;
}

// Certified comparison: total ledger decrement <= 14 t (log p)^2/(p-1)^2.
// Both sides are refined together until they separate.
inline bool ledgerWithinClosedFormBound(const RadiusLedger& ledger, long t) {
    const LogValue total = ledgerTotalDecrement(ledger);
    const long p = total.p;
    Rational w = initialEnclosureWidth();
    for (int round = 0; round < 1024; ++round) {
        const RatInterval lhs = logEnclosure(total, w);
        const RatInterval rhs = closedFormDecrementEnclosure(t, p, w);
        if (lhs.hi <= rhs.lo) return true;
        if (lhs.lo > rhs.hi) return false;
        w /= 16;
    }
    throw error(errc::invalid_argument, "ledgerWithinClosedFormBound: failed to separate");
}

struct NewtonResult {
    TruncSeries y;
    RadiusLedger ledger;
    std::vector<TruncSeries> corrections; // z_0, z_1, ... before the closing gauge
    TruncSeries gaugeB;
};

inline bool checkSelfBounded(const TruncSeries& y, const LogValue& logR, long p) {
    return normBoundedBy(y, logR, logR, p);
}

// Quadratically convergent scheme: strip b by the gauge y = z exp(B), start
// from the resolvent of a0, then correct with linearized solves. Correction
// z_k vanishes to order 2^(k+1), so the loop stops once that passes the
// truncation order. The ledger records the certified radius after each step:
//   r_0 = gauge radius - (t/(p-1)^2) log p
//   r_k = r_{k-1} - (2t/(p-1)^2) log p          for 1 <= k < k1
//   r_k = r_{k-1} - ((k+1)t/2^(k-1)) log 2      for k >= k1
inline NewtonResult solveNewton(const OdeProblem& prob, int n) {
    detail::requireSolvableOrder(prob, n);
    const long p = prob.p, s = prob.s, t = prob.t;

    const GaugeResult gauge = gaugeStrip(prob.a.restrictTo(n), prob.b.restrictTo(n),
                                         SeriesFamily(prob.c.terms(), n), p, prob.logr);
    const SeriesFamily& c0 = gauge.c0;

    RadiusLedger ledger;
    ledger.k1 = findK1(p);
    if ((Integer(1) << ledger.k1) < Integer(p) * p + 1)
        throw std::logic_error("solveNewton: k1 threshold inconsistent");
    ledger.initialLogR = prob.logr;
    ledger.gaugeLogR = gauge.logr1;
    ledger.closedFormR = logEnclosure(prob.logr, makeRational(1, Integer(1) << 40)) -
                    closedFormDecrementEnclosure(t, p, makeRational(1, Integer(1) << 40));

    const Rational preStep = makeRational(2 * t, (p - 1) * (p - 1));
    LogValue r = gauge.logr1;
    r.coefLogP -= makeRational(t, (p - 1) * (p - 1));
    ledger.entries.push_back(LedgerEntry{0, r, Regime::preK1});

    TruncSeries z0 = resolvent(gauge.a0, s, t, 1);
    TruncSeries y = z0;
    std::vector<TruncSeries> corrections{z0};

    // c0(y_{k-1}) and its X2-partial at y_{k-1}, sharing one power ladder
    const auto evalFamily = [&](const TruncSeries& yk) {
        TruncSeries cEval(n), dEval(n);
        TruncSeries pwr = TruncSeries::monomial(0, Rational(1), n);
        int have = 0;
        const int yOrd = yk.ord();
        for (const FamilyTerm& term : c0.terms()) {
            if (static_cast<long>(term.m - 1) * yOrd > n) break;
            while (have < term.m - 1) {
                pwr = mulTrunc(pwr, yk);
                ++have;
            }
            dEval = add(dEval, scale(mulTrunc(term.series, pwr), Rational(term.m)));
            if (static_cast<long>(term.m) * yOrd <= n) {
                pwr = mulTrunc(pwr, yk);
                ++have;
                cEval = add(cEval, mulTrunc(term.series, pwr));
            }
        }
        return std::pair<TruncSeries, TruncSeries>(cEval, dEval);
    };

    TruncSeries prevC(n), prevD(n), zPrev = z0;
    for (int k = 1; !c0.empty() && (1L << (k + 1)) <= n; ++k) {
        auto [cEval, dEval] = evalFamily(y);
        TruncSeries ak = (k == 1) ? cEval : sub(sub(cEval, prevC), mulTrunc(zPrev, prevD));
        if (ak.isZero()) break; // iteration has stabilized on this truncation
        if (ak.ord() < (1L << (k + 1)))
            throw std::logic_error("solveNewton: correction term lost its vanishing order");

        const TruncSeries Bk = bMap(dEval, 1);
        const TruncSeries expMinus = expTrunc(neg(Bk));
        const TruncSeries expPlus = expTrunc(Bk);
        const TruncSeries wk = resolvent(mulTrunc(expMinus, ak), s, t, std::min(k + 1, 30));
        const TruncSeries zk = mulTrunc(wk, expPlus);

        if (k < ledger.k1) {
            r.coefLogP -= preStep;
            ledger.entries.push_back(LedgerEntry{k, r, Regime::preK1});
        } else {
            r.coefLog2 -= makeRational(Integer(k + 1) * t, Integer(1) << (k - 1));
            ledger.entries.push_back(LedgerEntry{k, r, Regime::postK1});
        }

        y = add(y, zk);
        corrections.push_back(zk);
        prevC = cEval;
        prevD = dEval;
        zPrev = zk;
    }

    ledger.certifiedR = ledger.entries.back().logr;
    TruncSeries yFull = mulTrunc(y, expTrunc(gauge.B.restrictTo(n)));
    return NewtonResult{std::move(yFull), std::move(ledger), std::move(corrections), gauge.B};
}

} // namespace padiflow
