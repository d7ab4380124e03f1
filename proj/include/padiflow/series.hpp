#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "padiflow/rational.hpp"

namespace padiflow {

// Dense truncated power series over Q: coefficients for exponents 0..order
// are stored, everything above is unknown. Mixed-order arithmetic truncates
// to the smaller order, so results never pretend to know more than both
// operands do.
class TruncSeries {
  public:
    explicit TruncSeries(int order) : order_(order), c_(static_cast<size_t>(order) + 1, Rational(0)) {
        if (order < 0) throw error(errc::invalid_argument, "TruncSeries: negative order");
    }

    static TruncSeries monomial(int exponent, const Rational& coeff, int order) {
        TruncSeries s(order);
        if (exponent < 0) throw error(errc::invalid_argument, "monomial: negative exponent");
        if (exponent <= order) s.c_[static_cast<size_t>(exponent)] = coeff;
        return s;
    }

    int order() const { return order_; }

    const Rational& operator[](int m) const {
        if (m < 0 || m > order_) throw error(errc::invalid_argument, "TruncSeries: index out of range");
        return c_[static_cast<size_t>(m)];
    }

    void set(int m, const Rational& v) {
        if (m < 0 || m > order_) throw error(errc::invalid_argument, "TruncSeries: index out of range");
        c_[static_cast<size_t>(m)] = v;
    }

    // Vanishing order on the truncation; order()+1 means identically zero
    // as far as this truncation can tell.
    int ord() const {
        for (int m = 0; m <= order_; ++m)
            if (c_[static_cast<size_t>(m)] != 0) return m;
        return order_ + 1;
    }

    bool isZero() const { return ord() == order_ + 1; }

    TruncSeries restrictTo(int order) const {
        if (order > order_) throw error(errc::invalid_argument, "restrictTo: cannot extend a truncation");
        TruncSeries s(order);
        std::copy(c_.begin(), c_.begin() + order + 1, s.c_.begin());
        return s;
    }

    bool operator==(const TruncSeries& o) const { return order_ == o.order_ && c_ == o.c_; }

  private:
    int order_;
    std::vector<Rational> c_;
};

inline int commonOrder(const TruncSeries& a, const TruncSeries& b) {
    return std::min(a.order(), b.order());
}

inline TruncSeries add(const TruncSeries& a, const TruncSeries& b) {
    const int n = commonOrder(a, b);
    TruncSeries r(n);
    for (int m = 0; m <= n; ++m) r.set(m, Rational(a[m] + b[m]));
    return r;
}

inline TruncSeries sub(const TruncSeries& a, const TruncSeries& b) {
    const int n = commonOrder(a, b);
    TruncSeries r(n);
    for (int m = 0; m <= n; ++m) r.set(m, Rational(a[m] - b[m]));
    return r;
}

inline TruncSeries neg(const TruncSeries& a) {
    TruncSeries r(a.order());
    for (int m = 0; m <= a.order(); ++m) r.set(m, Rational(-a[m]));
    return r;
}

inline TruncSeries scale(const TruncSeries& a, const Rational& c) {
    TruncSeries r(a.order());
    if (c == 0) return r;
    for (int m = 0; m <= a.order(); ++m) r.set(m, Rational(c * a[m]));
    return r;
}

inline TruncSeries mulTrunc(const TruncSeries& a, const TruncSeries& b) {
    const int n = commonOrder(a, b);
    TruncSeries r(n);
    for (int i = 0; i <= n; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j + i <= n; ++j) {
            if (b[j] == 0) continue;
            r.set(i + j, Rational(r[i + j] + a[i] * b[j]));
        }
    }
    return r;
}

// f(g(X)) on the common truncation; needs g(0) = 0 so that each coefficient
// of the result is a finite computation.
inline TruncSeries composeTrunc(const TruncSeries& f, const TruncSeries& g) {
    if (g.order() >= 0 && g[0] != 0)
        throw error(errc::invalid_argument, "composeTrunc: inner series must vanish at 0");
    const int n = commonOrder(f, g);
    TruncSeries r(n);
    for (int m = n; m >= 0; --m) {
        r = mulTrunc(r, g.restrictTo(n));
        r.set(0, Rational(r[0] + f[m]));
    }
    return r;
}

// X * d/dX, the Euler operator; same truncation order as the input.
inline TruncSeries xTimesDerivative(const TruncSeries& f) {
    TruncSeries r(f.order());
    for (int m = 1; m <= f.order(); ++m) r.set(m, Rational(f[m] * m));
    return r;
}

// d/dX; the top coefficient is genuinely unknown, so the order drops by one.
inline TruncSeries derivative(const TruncSeries& f) {
    if (f.order() == 0) throw error(errc::invalid_argument, "derivative: order 0 truncation");
    TruncSeries r(f.order() - 1);
    for (int m = 1; m <= f.order(); ++m) r.set(m - 1, Rational(f[m] * m));
    return r;
}

struct FamilyTerm {
    int m;
    TruncSeries series;
};

// Finite family c(X1, X2) = sum_m c_m(X1) X2^m with distinct indices m >= 1.
// Problem data uses m >= 2; index 1 appears in derivative families only.
class SeriesFamily {
  public:
    explicit SeriesFamily(int order) : order_(order) {
        if (order < 0) throw error(errc::invalid_argument, "SeriesFamily: negative order");
    }

    SeriesFamily(std::vector<FamilyTerm> terms, int order) : order_(order) {
        for (const FamilyTerm& t : terms) order_ = std::min(order_, t.series.order());
        if (order_ < 0) throw error(errc::invalid_argument, "SeriesFamily: negative order");
        std::sort(terms.begin(), terms.end(), [](const FamilyTerm& a, const FamilyTerm& b) { return a.m < b.m; });
        for (size_t i = 0; i < terms.size(); ++i) {
            if (terms[i].m < 1) throw error(errc::invalid_argument, "SeriesFamily: index must be >= 1");
            if (i > 0 && terms[i].m == terms[i - 1].m)
                throw error(errc::invalid_argument, "SeriesFamily: duplicate index " + std::to_string(terms[i].m));
            terms_.push_back(FamilyTerm{terms[i].m, terms[i].series.restrictTo(order_)});
        }
    }

    int order() const { return order_; }
    const std::vector<FamilyTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    int maxIndex() const { return terms_.empty() ? 0 : terms_.back().m; }

  private:
    int order_;
    std::vector<FamilyTerm> terms_;
};

// c(X, y(X)) = sum_m c_m(X) y(X)^m for y(0) = 0, on the common truncation.
inline TruncSeries substituteFamily(const SeriesFamily& c, const TruncSeries& y) {
    if (y.order() >= 0 && y[0] != 0)
        throw error(errc::invalid_argument, "substituteFamily: series must vanish at 0");
    const int n = std::min(c.order(), y.order());
    const TruncSeries yr = y.restrictTo(n);
    TruncSeries acc(n);
    TruncSeries pw = TruncSeries::monomial(0, Rational(1), n);
    int have = 0;
    const int yOrd = yr.ord();
    for (const FamilyTerm& t : c.terms()) {
        if (static_cast<long>(t.m) * yOrd > n) break; // y^m vanishes on this truncation
        while (have < t.m) {
            pw = mulTrunc(pw, yr);
            ++have;
        }
        acc = add(acc, mulTrunc(t.series.restrictTo(n), pw));
    }
    return acc;
}

// Formal partial derivative in the X2 slot: term (m, c_m) becomes
// (m-1, m*c_m). Input indices must be >= 2 so the output stays a family.
inline SeriesFamily familyPartial(const SeriesFamily& c) {
    std::vector<FamilyTerm> out;
    for (const FamilyTerm& t : c.terms()) {
        if (t.m < 2) throw error(errc::invalid_argument, "familyPartial: index must be >= 2");
        out.push_back(FamilyTerm{t.m - 1, scale(t.series, Rational(t.m))});
    }
    return SeriesFamily(std::move(out), c.order());
}

} // namespace padiflow
