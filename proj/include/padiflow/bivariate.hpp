#pragma once

#include <string>
#include <vector>

#include "padiflow/errors.hpp"
#include "padiflow/rational.hpp"
#include "padiflow/series.hpp"

namespace padiflow {

// Dense bivariate polynomial over Q with an explicit total-degree bound.
// Invariant: c_[idx(i,j)] == 0 whenever i + j > bound_.
class BivarPoly {
  public:
    explicit BivarPoly(int bound) : bound_(bound) {
        if (bound < 0) throw error(errc::invalid_argument, "BivarPoly: negative degree bound");
        c_.assign(static_cast<size_t>(bound + 1) * (bound + 1), Rational(0));
    }

    static BivarPoly monomial(int bound, int i, int j, const Rational& v) {
        BivarPoly f(bound);
        f.set(i, j, v);
        return f;
    }

    int bound() const { return bound_; }

    Rational coeff(int i, int j) const {
        if (i < 0 || j < 0 || i > bound_ || j > bound_ || i + j > bound_) return Rational(0);
        return c_[idx(i, j)];
    }

    void set(int i, int j, const Rational& v) {
        if (i < 0 || j < 0 || i + j > bound_)
            throw error(errc::invalid_argument,
                        "BivarPoly: exponent (" + std::to_string(i) + "," + std::to_string(j) +
                            ") outside degree bound " + std::to_string(bound_));
        c_[idx(i, j)] = v;
    }

    // Actual total degree; -1 for the zero polynomial.
    int totalDegree() const {
        int d = -1;
        for (int i = 0; i <= bound_; ++i)
            for (int j = 0; i + j <= bound_; ++j)
                if (c_[idx(i, j)] != 0 && i + j > d) d = i + j;
        return d;
    }

    bool isZero() const { return totalDegree() < 0; }

    friend bool operator==(const BivarPoly& a, const BivarPoly& b) {
        const int m = std::max(a.bound_, b.bound_);
        for (int i = 0; i <= m; ++i)
            for (int j = 0; i + j <= m; ++j)
                if (a.coeff(i, j) != b.coeff(i, j)) return false;
        return true;
    }
    friend bool operator!=(const BivarPoly& a, const BivarPoly& b) { return !(a == b); }

  private:
    size_t idx(int i, int j) const {
        return static_cast<size_t>(i) * (bound_ + 1) + j;
    }

    int bound_;
    std::vector<Rational> c_;
};

inline BivarPoly embed(const BivarPoly& f, int bound) {
    if (bound < f.bound()) {
        if (f.totalDegree() > bound)
            throw error(errc::invalid_argument, "embed: polynomial exceeds requested bound");
    }
    BivarPoly g(bound);
    for (int i = 0; i <= f.bound(); ++i)
        for (int j = 0; i + j <= f.bound(); ++j)
            if (f.coeff(i, j) != 0) g.set(i, j, f.coeff(i, j));
    return g;
}

inline BivarPoly add(const BivarPoly& a, const BivarPoly& b) {
    BivarPoly r(std::max(a.bound(), b.bound()));
    for (int i = 0; i <= r.bound(); ++i)
        for (int j = 0; i + j <= r.bound(); ++j) {
            const Rational v = a.coeff(i, j) + b.coeff(i, j);
            if (v != 0) r.set(i, j, v);
        }
    return r;
}

inline BivarPoly neg(const BivarPoly& a) {
    BivarPoly r(a.bound());
    for (int i = 0; i <= a.bound(); ++i)
        for (int j = 0; i + j <= a.bound(); ++j)
            if (a.coeff(i, j) != 0) r.set(i, j, -a.coeff(i, j));
    return r;
}

inline BivarPoly sub(const BivarPoly& a, const BivarPoly& b) { return add(a, neg(b)); }

inline BivarPoly scale(const BivarPoly& a, const Rational& s) {
    BivarPoly r(a.bound());
    if (s == 0) return r;
    for (int i = 0; i <= a.bound(); ++i)
        for (int j = 0; i + j <= a.bound(); ++j)
            if (a.coeff(i, j) != 0) r.set(i, j, a.coeff(i, j) * s);
    return r;
}

inline BivarPoly mul(const BivarPoly& a, const BivarPoly& b) {
    BivarPoly r(a.bound() + b.bound());
    for (int i = 0; i <= a.bound(); ++i)
        for (int j = 0; i + j <= a.bound(); ++j) {
            if (a.coeff(i, j) == 0) continue;
            for (int k = 0; k <= b.bound(); ++k)
                for (int l = 0; k + l <= b.bound(); ++l) {
                    if (b.coeff(k, l) == 0) continue;
                    r.set(i + k, j + l, r.coeff(i + k, j + l) + a.coeff(i, j) * b.coeff(k, l));
                }
        }
    return r;
}

// var: 1 for x1, 2 for x2.
inline BivarPoly partialDerivative(const BivarPoly& f, int var) {
    if (var != 1 && var != 2)
        throw error(errc::invalid_argument, "partialDerivative: var must be 1 or 2");
    BivarPoly r(f.bound());
    for (int i = 0; i <= f.bound(); ++i)
        for (int j = 0; i + j <= f.bound(); ++j) {
            if (f.coeff(i, j) == 0) continue;
            if (var == 1 && i > 0) r.set(i - 1, j, Rational(i) * f.coeff(i, j));
            if (var == 2 && j > 0) r.set(i, j - 1, Rational(j) * f.coeff(i, j));
        }
    return r;
}

inline BivarPoly swapVars(const BivarPoly& f) {
    BivarPoly r(f.bound());
    for (int i = 0; i <= f.bound(); ++i)
        for (int j = 0; i + j <= f.bound(); ++j)
            if (f.coeff(i, j) != 0) r.set(j, i, f.coeff(i, j));
    return r;
}

inline BivarPoly mulByVar(const BivarPoly& f, int var) {
    if (var != 1 && var != 2)
        throw error(errc::invalid_argument, "mulByVar: var must be 1 or 2");
    BivarPoly r(f.bound() + 1);
    for (int i = 0; i <= f.bound(); ++i)
        for (int j = 0; i + j <= f.bound(); ++j)
            if (f.coeff(i, j) != 0) r.set(i + (var == 1), j + (var == 2), f.coeff(i, j));
    return r;
}

// Exact division by x1 or x2; throws if the polynomial has a coefficient
// with zero exponent in that variable.
inline BivarPoly divideByVar(const BivarPoly& f, int var) {
    if (var != 1 && var != 2)
        throw error(errc::invalid_argument, "divideByVar: var must be 1 or 2");
    BivarPoly r(f.bound() == 0 ? 0 : f.bound() - 1);
    for (int i = 0; i <= f.bound(); ++i)
        for (int j = 0; i + j <= f.bound(); ++j) {
            if (f.coeff(i, j) == 0) continue;
            const int e = (var == 1) ? i : j;
            if (e == 0)
                throw error(errc::invalid_argument,
                            "divideByVar: division is not exact at exponent (" +
                                std::to_string(i) + "," + std::to_string(j) + ")");
            r.set(i - (var == 1), j - (var == 2), f.coeff(i, j));
        }
    return r;
}

// Substitution x1 = a11*u + a12*v, x2 = a21*u + a22*v.
inline BivarPoly composeLinear(const BivarPoly& f, const Rational& a11, const Rational& a12,
                               const Rational& a21, const Rational& a22) {
    BivarPoly r(f.bound());
    BivarPoly l1(1), l2(1);
    l1.set(1, 0, a11);
    l1.set(0, 1, a12);
    l2.set(1, 0, a21);
    l2.set(0, 1, a22);
    for (int i = 0; i <= f.bound(); ++i) {
        // pw1 = l1^i, built once per row.
        BivarPoly pw1(0);
        pw1.set(0, 0, Rational(1));
        for (int k = 0; k < i; ++k) pw1 = mul(pw1, l1);
        BivarPoly pw2(0);
        pw2.set(0, 0, Rational(1));
        for (int j = 0; i + j <= f.bound(); ++j) {
            if (f.coeff(i, j) != 0) r = add(r, scale(mul(pw1, pw2), f.coeff(i, j)));
            if (i + j < f.bound()) pw2 = mul(pw2, l2);
        }
    }
    return embed(r, f.bound());
}

// Monomial substitutions used by the quadratic blow-up charts:
// chart 1: x1 = y1*y2, x2 = y2, so (i,j) -> (i, i+j);
// chart 2: x1 = y1,    x2 = y1*y2, so (i,j) -> (i+j, j).
inline BivarPoly blowupSubstitute(const BivarPoly& f, int chart) {
    if (chart != 1 && chart != 2)
        throw error(errc::invalid_argument, "blowupSubstitute: chart must be 1 or 2");
    BivarPoly r(2 * f.bound());
    for (int i = 0; i <= f.bound(); ++i)
        for (int j = 0; i + j <= f.bound(); ++j) {
            if (f.coeff(i, j) == 0) continue;
            if (chart == 1)
                r.set(i, i + j, f.coeff(i, j));
            else
                r.set(i + j, j, f.coeff(i, j));
        }
    return r;
}

// Coefficient of x2^j as a univariate polynomial in x1, padded to `order`.
inline TruncSeries coeffSeriesInX2(const BivarPoly& f, int j, int order) {
    TruncSeries a(order);
    for (int i = 0; i <= f.bound() && i <= order; ++i)
        if (i + j <= f.bound()) a.set(i, f.coeff(i, j));
    return a;
}

// f(T, phi(T)) truncated to the order of phi.
inline TruncSeries evalAlongGraph(const BivarPoly& f, const TruncSeries& phi) {
    const int n = phi.order();
    TruncSeries r(n);
    TruncSeries pw = TruncSeries::monomial(0, Rational(1), n);
    for (int j = 0; j <= f.bound(); ++j) {
        const TruncSeries aj = coeffSeriesInX2(f, j, n);
        if (!aj.isZero()) r = add(r, mulTrunc(aj, pw));
        if (j < f.bound()) pw = mulTrunc(pw, phi);
    }
    return r;
}

}  // namespace padiflow
