#pragma once

#include <string>
#include <vector>

#include "padiflow/errors.hpp"
#include "padiflow/foliation.hpp"
#include "padiflow/padic.hpp"
#include "padiflow/rational.hpp"

namespace padiflow {

namespace detail {

inline unsigned long long powModU64(unsigned long long b, unsigned long long e,
                                    unsigned long long m) {
    unsigned long long r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = r * b % m;
        b = b * b % m;
        e >>= 1;
    }
    return r;
}

}  // namespace detail

// Dense bivariate polynomial over F_p, p odd prime below 2^31 so that
// products of reduced coefficients fit in 64 bits.
class ModPoly {
  public:
    ModPoly(long p, int bound) : p_(p), bound_(bound) {
        if (bound < 0) throw error(errc::invalid_argument, "ModPoly: negative degree bound");
        c_.assign(static_cast<size_t>(bound + 1) * (bound + 1), 0);
    }

    long p() const { return p_; }
    int bound() const { return bound_; }

    unsigned long long coeff(int i, int j) const {
        if (i < 0 || j < 0 || i > bound_ || j > bound_ || i + j > bound_) return 0;
        return c_[idx(i, j)];
    }

    void set(int i, int j, unsigned long long v) {
        if (i < 0 || j < 0 || i + j > bound_)
            throw error(errc::invalid_argument, "ModPoly: exponent outside degree bound");
        c_[idx(i, j)] = v % static_cast<unsigned long long>(p_);
    }

    bool isZero() const {
        for (const auto& v : c_)
            if (v) return false;
        return true;
    }

    int totalDegree() const {
        int d = -1;
        for (int i = 0; i <= bound_; ++i)
            for (int j = 0; i + j <= bound_; ++j)
                if (c_[idx(i, j)] && i + j > d) d = i + j;
        return d;
    }

    friend bool operator==(const ModPoly& a, const ModPoly& b) {
        if (a.p_ != b.p_) return false;
        const int m = std::max(a.bound_, b.bound_);
        for (int i = 0; i <= m; ++i)
            for (int j = 0; i + j <= m; ++j)
                if (a.coeff(i, j) != b.coeff(i, j)) return false;
        return true;
    }
    friend bool operator!=(const ModPoly& a, const ModPoly& b) { return !(a == b); }

  private:
    size_t idx(int i, int j) const { return static_cast<size_t>(i) * (bound_ + 1) + j; }

    long p_;
    int bound_;
    std::vector<unsigned long long> c_;
};

inline ModPoly mulMod(const ModPoly& a, const ModPoly& b) {
    if (a.p() != b.p()) throw error(errc::invalid_argument, "mulMod: mixed moduli");
    const auto p = static_cast<unsigned long long>(a.p());
    ModPoly r(a.p(), a.bound() + b.bound());
    for (int i = 0; i <= a.bound(); ++i)
        for (int j = 0; i + j <= a.bound(); ++j) {
            const unsigned long long av = a.coeff(i, j);
            if (!av) continue;
            for (int k = 0; k <= b.bound(); ++k)
                for (int l = 0; k + l <= b.bound(); ++l) {
                    const unsigned long long bv = b.coeff(k, l);
                    if (!bv) continue;
                    r.set(i + k, j + l, (r.coeff(i + k, j + l) + av * bv % p) % p);
                }
        }
    return r;
}

inline ModPoly subMod(const ModPoly& a, const ModPoly& b) {
    if (a.p() != b.p()) throw error(errc::invalid_argument, "subMod: mixed moduli");
    const auto p = static_cast<unsigned long long>(a.p());
    ModPoly r(a.p(), std::max(a.bound(), b.bound()));
    for (int i = 0; i <= r.bound(); ++i)
        for (int j = 0; i + j <= r.bound(); ++j) {
            const unsigned long long v = (a.coeff(i, j) + p - b.coeff(i, j)) % p;
            if (v) r.set(i, j, v);
        }
    return r;
}

// A vector field over F_p, together with the degree horizon needed to hold
// every iterate D^k(x_i) for k <= p.
struct ModPField {
    ModPoly P;
    ModPoly Q;
    long p;
    int maxDegree;
    long degreeBudget;
};

// Smallest grid bound that contains D^p applied to a coordinate: each
// application of D adds at most maxDegree - 1 to the total degree, starting
// from degree 1.
inline long requiredDegreeBudget(long p, int maxDegree) {
    return p * (static_cast<long>(maxDegree) - 1) + 1;
}

inline ModPField reduceModP(const VectorField& V, long p) {
    requireOddPrime(p, "reduceModP");
    if (p >= (1L << 31))
        throw error(errc::invalid_argument, "reduceModP: prime too large for 64-bit products");
    const int maxDeg = fieldMaxDegree(V);
    const auto up = static_cast<unsigned long long>(p);

    auto reduceOne = [&](const BivarPoly& f, const char* name) {
        ModPoly r(p, maxDeg);
        for (int i = 0; i <= f.bound(); ++i)
            for (int j = 0; i + j <= f.bound(); ++j) {
                const Rational c = f.coeff(i, j);
                if (c == 0) continue;
                Integer num = c.get_num(), den = c.get_den();
                const unsigned long long dm =
                    mpz_fdiv_ui(den.get_mpz_t(), static_cast<unsigned long>(p));
                if (dm == 0)
                    throw error(errc::bad_reduction,
                                std::string("reduceModP: coefficient (") + std::to_string(i) +
                                    "," + std::to_string(j) + ") of " + name +
                                    " has denominator divisible by " + std::to_string(p));
                const unsigned long long nm =
                    mpz_fdiv_ui(num.get_mpz_t(), static_cast<unsigned long>(p));
                r.set(i, j, nm * detail::powModU64(dm, up - 2, up) % up);
            }
        return r;
    };

    ModPField F{reduceOne(V.P, "P"), reduceOne(V.Q, "Q"), p, maxDeg,
                requiredDegreeBudget(p, maxDeg)};
    return F;
}

namespace detail {

// D(f) = Pbar * df/dx1 + Qbar * df/dx2 on a fixed grid of bound `cap`.
inline ModPoly applyDerivation(const ModPField& F, const ModPoly& f, int cap) {
    const auto p = static_cast<unsigned long long>(F.p);
    ModPoly r(F.p, cap);
    auto accumulate = [&](const ModPoly& g, const ModPoly& df) {
        for (int i = 0; i <= g.bound(); ++i)
            for (int j = 0; i + j <= g.bound(); ++j) {
                const unsigned long long gv = g.coeff(i, j);
                if (!gv) continue;
                for (int k = 0; k <= df.bound(); ++k)
                    for (int l = 0; k + l <= df.bound(); ++l) {
                        const unsigned long long dv = df.coeff(k, l);
                        if (!dv) continue;
                        if (i + k + j + l > cap)
                            throw error(errc::insufficient_budget,
                                        "applyDerivation: degree horizon " + std::to_string(cap) +
                                            " exceeded");
                        r.set(i + k, j + l, (r.coeff(i + k, j + l) + gv * dv % p) % p);
                    }
            }
    };
    // Partial derivatives of f, kept on the same grid.
    ModPoly d1(F.p, f.bound()), d2(F.p, f.bound());
    for (int i = 0; i <= f.bound(); ++i)
        for (int j = 0; i + j <= f.bound(); ++j) {
            const unsigned long long v = f.coeff(i, j);
            if (!v) continue;
            if (i > 0) d1.set(i - 1, j, v * (static_cast<unsigned long long>(i) % p) % p);
            if (j > 0) d2.set(i, j - 1, v * (static_cast<unsigned long long>(j) % p) % p);
        }
    accumulate(F.P, d1);
    accumulate(F.Q, d2);
    return r;
}

}  // namespace detail

struct PthPowerResult {
    ModPoly g1;    // D^p(x1)
    ModPoly g2;    // D^p(x2)
    long horizon;  // grid bound the iterates were computed on
};

inline PthPowerResult pthPowerOnCoords(const ModPField& F) {
    const long need = requiredDegreeBudget(F.p, F.maxDegree);
    if (F.degreeBudget < need)
        throw error(errc::insufficient_budget,
                    "pthPowerOnCoords: degree budget " + std::to_string(F.degreeBudget) +
                        " below required " + std::to_string(need));
    const int cap = static_cast<int>(F.degreeBudget);
    auto iterate = [&](int var) {
        ModPoly g(F.p, cap);
        g.set(var == 1 ? 1 : 0, var == 1 ? 0 : 1, 1);
        for (long k = 0; k < F.p; ++k) g = detail::applyDerivation(F, g, cap);
        return g;
    };
    return PthPowerResult{iterate(1), iterate(2), F.degreeBudget};
}

// In characteristic p the p-th power of a derivation is again a derivation;
// D is p-closed when D^p lies in the module generated by D, i.e. when
// D^p(x1) * Qbar - D^p(x2) * Pbar vanishes identically.
inline ModPoly pClosedObstruction(const ModPField& F) {
    const PthPowerResult g = pthPowerOnCoords(F);
    return subMod(mulMod(g.g1, F.Q), mulMod(g.g2, F.P));
}

inline bool pClosedTest(const ModPField& F) { return pClosedObstruction(F).isZero(); }

}  // namespace padiflow
