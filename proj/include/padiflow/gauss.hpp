#pragma once

#include <optional>

#include "padiflow/logvalue.hpp"
#include "padiflow/series.hpp"

namespace padiflow {

// log of the Gauss norm sup_m |a_m|_p r^m, or minus infinity for the zero
// truncation. Everything is exact: |a_m|_p = p^(-vp(a_m)) turns each term
// into the LogValue (-vp(a_m) + m u) log p + (m v) log 2 for log r =
// u log p + v log 2.
struct NormBound {
    std::optional<LogValue> value; // empty means minus infinity

    bool minusInfinity() const { return !value.has_value(); }
};

inline LogValue gaussTermLog(const Rational& coeff, int m, const LogValue& logr) {
    const PadicVal v = vp(coeff, logr.p);
    // callers skip zero coefficients
    return LogValue{Rational(-v.v + m * logr.coefLogP), Rational(m * logr.coefLog2), logr.p};
}

inline NormBound gaussNormLog(const TruncSeries& f, const LogValue& logr, long p) {
    if (logr.p != p) throw error(errc::invalid_argument, "gaussNormLog: logr carries a different prime");
    NormBound best;
    for (int m = 0; m <= f.order(); ++m) {
        if (f[m] == 0) continue;
        LogValue term = gaussTermLog(f[m], m, logr);
        if (!best.value || logvalCompare(term, *best.value) == Cmp::GT) best.value = term;
    }
    return best;
}

// Index of the first coefficient whose term exceeds the bound, if any.
inline std::optional<int> normViolationIndex(const TruncSeries& f, const LogValue& bound,
                                             const LogValue& logr, long p) {
    if (logr.p != p || bound.p != p)
        throw error(errc::invalid_argument, "normViolationIndex: mixed primes");
    for (int m = 0; m <= f.order(); ++m) {
        if (f[m] == 0) continue;
        if (logvalCompare(gaussTermLog(f[m], m, logr), bound) == Cmp::GT) return m;
    }
    return std::nullopt;
}

// Whether sup_m |f_m| r^m <= exp(bound) on the truncation; the zero series
// (norm minus infinity) is below everything.
inline bool normBoundedBy(const TruncSeries& f, const LogValue& bound, const LogValue& logr, long p) {
    return !normViolationIndex(f, bound, logr, p).has_value();
}

inline Cmp compareNormBounds(const NormBound& a, const NormBound& b) {
    if (a.minusInfinity() && b.minusInfinity()) return Cmp::EQ;
    if (a.minusInfinity()) return Cmp::LT;
    if (b.minusInfinity()) return Cmp::GT;
    return logvalCompare(*a.value, *b.value);
}

} // namespace padiflow
