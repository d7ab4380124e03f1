#pragma once

#include <string>
#include <vector>

#include "padiflow/bivariate.hpp"
#include "padiflow/errors.hpp"
#include "padiflow/rational.hpp"
#include "padiflow/series.hpp"

namespace padiflow {

// Planar polynomial vector field D = P d/dx1 + Q d/dx2.
struct VectorField {
    BivarPoly P;
    BivarPoly Q;
};

inline VectorField makeVectorField(BivarPoly P, BivarPoly Q) {
    const int m = std::max(P.bound(), Q.bound());
    return VectorField{embed(P, m), embed(Q, m)};
}

inline int fieldMaxDegree(const VectorField& V) {
    return std::max({V.P.totalDegree(), V.Q.totalDegree(), 1});
}

inline VectorField swapFieldVars(const VectorField& V) {
    return VectorField{swapVars(V.Q), swapVars(V.P)};
}

enum class SingKind {
    regular,               // the field does not vanish at the origin
    nondegenerateReduced,  // two nonzero eigenvalues with negative rational ratio
    degenerateReduced,     // exactly one zero eigenvalue
    nonReduced,            // nilpotent/zero linear part, or positive rational ratio
    irrationalRatio,       // eigenvalue ratio not rational (includes complex pairs)
};

inline const char* singKindName(SingKind k) {
    switch (k) {
        case SingKind::regular: return "regular";
        case SingKind::nondegenerateReduced: return "nondegenerate-reduced";
        case SingKind::degenerateReduced: return "degenerate-reduced";
        case SingKind::nonReduced: return "non-reduced";
        case SingKind::irrationalRatio: return "irrational-ratio";
    }
    return "unknown";
}

struct SingularityClass {
    SingKind kind;
    bool hasAlpha = false;
    Rational alpha;  // eigenvalue ratio, negative; see classifySingularity
    long s = 0, t = 0;  // alpha = -s/t in lowest terms when hasAlpha
};

namespace detail {

inline bool rationalSqrt(const Rational& x, Rational& out) {
    if (x < 0) return false;
    Rational c(x);
    c.canonicalize();
    const Integer num = c.get_num(), den = c.get_den();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
        return false;
    Integer rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    out = makeRational(rn, rd);
    return true;
}

}  // namespace detail

// Classify the origin.  For a nondegenerate reduced singularity the ratio
// alpha is M22/M11 when the linear part is diagonal, and otherwise the
// eigenvalue ratio normalized to |alpha| <= 1.
inline SingularityClass classifySingularity(const VectorField& V) {
    if (V.P.isZero() && V.Q.isZero())
        throw error(errc::invalid_argument, "classifySingularity: zero vector field");
    SingularityClass out{};
    if (V.P.coeff(0, 0) != 0 || V.Q.coeff(0, 0) != 0) {
        out.kind = SingKind::regular;
        return out;
    }
    const Rational m11 = V.P.coeff(1, 0), m12 = V.P.coeff(0, 1);
    const Rational m21 = V.Q.coeff(1, 0), m22 = V.Q.coeff(0, 1);
    const Rational tr = m11 + m22;
    const Rational det = m11 * m22 - m12 * m21;
    const Rational disc = tr * tr - det * 4;

    Rational sq;
    if (!detail::rationalSqrt(disc, sq)) {
        out.kind = SingKind::irrationalRatio;
        return out;
    }
    const Rational l1 = (tr + sq) / 2;
    const Rational l2 = (tr - sq) / 2;
    if (l1 == 0 && l2 == 0) {
        out.kind = SingKind::nonReduced;
        return out;
    }
    if (l1 == 0 || l2 == 0) {
        out.kind = SingKind::degenerateReduced;
        return out;
    }
    // Both eigenvalues nonzero and rational.
    Rational ratio;
    if (m12 == 0 && m21 == 0) {
        ratio = m22 / m11;
    } else {
        ratio = l2 / l1;
        Rational inv = l1 / l2;
        if (abs(inv) < abs(ratio)) ratio = inv;
    }
    if (ratio > 0) {
        out.kind = SingKind::nonReduced;
        return out;
    }
    out.kind = SingKind::nondegenerateReduced;
    out.hasAlpha = true;
    Rational a(ratio);
    a.canonicalize();
    out.alpha = a;
    Integer num = a.get_num();
    out.s = mpz_get_si(Integer(-num).get_mpz_t());
    out.t = mpz_get_si(a.get_den().get_mpz_t());
    return out;
}

namespace detail {

inline void requireDiagonalNondegenerate(const VectorField& V, const char* who) {
    const SingularityClass cls = classifySingularity(V);
    if (cls.kind != SingKind::nondegenerateReduced)
        throw error(errc::hypothesis_violated,
                    std::string(who) + ": singularity is " + singKindName(cls.kind) +
                        ", need nondegenerate-reduced");
    if (V.P.coeff(0, 1) != 0 || V.Q.coeff(1, 0) != 0)
        throw error(errc::precondition_violated,
                    std::string(who) + ": linear part must be diagonal (change basis first)");
}

// Graph x2 = phi(x1) invariant under P d/dx1 + Q d/dx2, with diagonal linear
// part diag(mu1, mu2) of negative rational ratio.  Coefficient recursion:
//   a_m (mu2 - m*mu1) = -[T^m](Q(T,phi) - phi' * P(T,phi)) |_{a_m = 0},
// where the right side only involves a_1..a_{m-1}.
inline TruncSeries separatrixGraphDiagonal(const VectorField& V, int n) {
    const Rational mu1 = V.P.coeff(1, 0), mu2 = V.Q.coeff(0, 1);
    const int jmaxP = V.P.bound(), jmaxQ = V.Q.bound();
    const int jmax = std::max(jmaxP, jmaxQ);

    std::vector<TruncSeries> AP, AQ;
    for (int j = 0; j <= jmax; ++j) {
        AP.push_back(coeffSeriesInX2(V.P, j, n));
        AQ.push_back(coeffSeriesInX2(V.Q, j, n));
    }

    // pw[j] = phi^j, filled degree by degree; pw[1] aliases the unknowns.
    std::vector<std::vector<Rational>> pw(static_cast<size_t>(jmax) + 1,
                                          std::vector<Rational>(static_cast<size_t>(n) + 1,
                                                                Rational(0)));
    if (jmax >= 0) pw[0][0] = 1;
    std::vector<Rational> gP(static_cast<size_t>(n) + 1, Rational(0));
    std::vector<Rational> gQ(static_cast<size_t>(n) + 1, Rational(0));
    gP[0] = AP[0][0];  // zero: the origin is singular
    gQ[0] = AQ[0][0];

    for (int m = 1; m <= n; ++m) {
        // Powers of phi at degree m for j >= 2; these never involve a_m
        // because phi has no constant term.
        for (int j = 2; j <= jmax; ++j) {
            Rational acc(0);
            for (int i = j - 1; i <= m - 1; ++i)
                if (pw[j - 1][i] != 0 && pw[1][m - i] != 0) acc += pw[j - 1][i] * pw[1][m - i];
            pw[j][m] = acc;
        }
        // g = P(T,phi), Q(T,phi) at degree m with a_m = 0.  The x2-linear
        // coefficient of P at T^0 is zero (diagonal linear part), so gP[m]
        // is already final; gQ[m] is patched below with mu2 * a_m.
        Rational gpm(0), gqm(0);
        for (int j = 0; j <= jmax; ++j) {
            const TruncSeries& ap = AP[j];
            const TruncSeries& aq = AQ[j];
            for (int i = 0; i <= std::min(m, jmax); ++i) {
                const Rational& pj = pw[j][m - i];
                if (pj == 0) continue;
                if (ap[i] != 0) gpm += ap[i] * pj;
                if (aq[i] != 0) gqm += aq[i] * pj;
            }
        }
        // conv = [T^m](phi' * gP) with a_m = 0; the omitted l = 1 term is
        // m * a_m * gP[1] = m * a_m * mu1.
        Rational conv(0);
        for (int l = 1; l <= m; ++l) {
            const Rational am1 = pw[1][m - l + 1];
            if (am1 != 0 && gP[l] != 0) conv += Rational(m - l + 1) * am1 * gP[l];
        }
        const Rational am = (conv - gqm) / (mu2 - Rational(m) * mu1);
        pw[1][m] = am;
        gP[m] = gpm;
        gQ[m] = gqm + mu2 * am;
    }

    TruncSeries phi(n);
    for (int m = 1; m <= n; ++m) phi.set(m, pw[1][m]);
    return phi;
}

}  // namespace detail

// Separatrix as a graph: which == 2 solves x2 = phi(x1); which == 1 solves
// x1 = phi(x2).  Requires a nondegenerate reduced singularity with diagonal
// linear part.
inline TruncSeries separatrixSeries(const VectorField& V, int which, int n) {
    if (which != 1 && which != 2)
        throw error(errc::invalid_argument, "separatrixSeries: which must be 1 or 2");
    if (n < 1) throw error(errc::invalid_argument, "separatrixSeries: order must be >= 1");
    detail::requireDiagonalNondegenerate(V, "separatrixSeries");
    if (which == 1) return detail::separatrixGraphDiagonal(swapFieldVars(V), n);
    return detail::separatrixGraphDiagonal(V, n);
}

// Exact invariance defect of a candidate graph.  For which == 2 this is
// Q(T,phi) - phi'(T) * P(T,phi) through the full order of phi, which is
// well defined because P(T,phi) has no constant term at a singular origin.
inline TruncSeries invarianceDefect(const VectorField& V, const TruncSeries& phi, int which) {
    if (which != 1 && which != 2)
        throw error(errc::invalid_argument, "invarianceDefect: which must be 1 or 2");
    if (phi[0] != 0)
        throw error(errc::invalid_argument, "invarianceDefect: graph must pass through origin");
    const VectorField W = (which == 1) ? swapFieldVars(V) : V;
    const BivarPoly& P = W.P;
    const BivarPoly& Q = W.Q;
    if (P.coeff(0, 0) != 0 || Q.coeff(0, 0) != 0)
        throw error(errc::invalid_argument, "invarianceDefect: origin must be singular");
    const int n = phi.order();
    const TruncSeries gP = evalAlongGraph(P, phi);
    const TruncSeries gQ = evalAlongGraph(Q, phi);
    TruncSeries defect(n);
    for (int m = 0; m <= n; ++m) {
        Rational conv(0);
        for (int l = 1; l <= m; ++l)
            if (phi[m - l + 1] != 0 && gP[l] != 0)
                conv += Rational(m - l + 1) * phi[m - l + 1] * gP[l];
        defect.set(m, gQ[m] - conv);
    }
    return defect;
}

// One quadratic blow-up chart.  Chart 1 uses x1 = y1*y2, x2 = y2 and returns
//   P' = (P(y1*y2, y2) - y1 * Q(y1*y2, y2)) / y2,   Q' = Q(y1*y2, y2);
// chart 2 is symmetric.  The origin must be singular for the division to be
// exact.
inline VectorField blowupChart(const VectorField& V, int chart) {
    if (chart != 1 && chart != 2)
        throw error(errc::invalid_argument, "blowupChart: chart must be 1 or 2");
    if (V.P.coeff(0, 0) != 0 || V.Q.coeff(0, 0) != 0)
        throw error(errc::invalid_argument, "blowupChart: origin must be singular");
    const BivarPoly Ps = blowupSubstitute(V.P, chart);
    const BivarPoly Qs = blowupSubstitute(V.Q, chart);
    if (chart == 1) {
        BivarPoly newP = divideByVar(sub(Ps, mulByVar(Qs, 1)), 2);
        return makeVectorField(std::move(newP), Qs);
    }
    BivarPoly newQ = divideByVar(sub(Qs, mulByVar(Ps, 2)), 1);
    return makeVectorField(Ps, std::move(newQ));
}

// Change of basis x = M u with M = [[m11, m12], [m21, m22]]; the components
// transform by M^{-1} composed with substitution.
inline VectorField linearChangeOfBasis(const VectorField& V, const Rational& m11,
                                       const Rational& m12, const Rational& m21,
                                       const Rational& m22) {
    const Rational det = m11 * m22 - m12 * m21;
    if (det == 0)
        throw error(errc::invalid_argument, "linearChangeOfBasis: matrix is singular");
    const BivarPoly Pc = composeLinear(V.P, m11, m12, m21, m22);
    const BivarPoly Qc = composeLinear(V.Q, m11, m12, m21, m22);
    BivarPoly newP = scale(sub(scale(Pc, m22), scale(Qc, m12)), 1 / det);
    BivarPoly newQ = scale(add(scale(Pc, -m21), scale(Qc, m11)), 1 / det);
    return makeVectorField(std::move(newP), std::move(newQ));
}

struct DiagonalizedField {
    VectorField field;
    Rational basis[4];  // column eigenvectors [v1 | v2], x = M u
};

// Convenience: bring a linear part with distinct rational eigenvalues to
// diagonal form.
inline DiagonalizedField diagonalizeLinearPart(const VectorField& V) {
    const Rational m11 = V.P.coeff(1, 0), m12 = V.P.coeff(0, 1);
    const Rational m21 = V.Q.coeff(1, 0), m22 = V.Q.coeff(0, 1);
    const Rational tr = m11 + m22;
    const Rational disc = tr * tr - (m11 * m22 - m12 * m21) * 4;
    Rational sq;
    if (!detail::rationalSqrt(disc, sq) || sq == 0)
        throw error(errc::hypothesis_violated,
                    "diagonalizeLinearPart: need distinct rational eigenvalues");
    const Rational l1 = (tr + sq) / 2;
    const Rational l2 = (tr - sq) / 2;
    auto eigenvector = [&](const Rational& l, Rational& vx, Rational& vy) {
        if (m12 != 0) {
            vx = m12;
            vy = l - m11;
        } else if (m21 != 0) {
            vx = l - m22;
            vy = m21;
        } else {
            vx = (m11 == l) ? Rational(1) : Rational(0);
            vy = (m11 == l) ? Rational(0) : Rational(1);
        }
    };
    DiagonalizedField out{VectorField{BivarPoly(0), BivarPoly(0)}, {}};
    Rational v1x, v1y, v2x, v2y;
    eigenvector(l1, v1x, v1y);
    eigenvector(l2, v2x, v2y);
    out.basis[0] = v1x;
    out.basis[1] = v2x;
    out.basis[2] = v1y;
    out.basis[3] = v2y;
    out.field = linearChangeOfBasis(V, v1x, v2x, v1y, v2y);
    return out;
}

}  // namespace padiflow
