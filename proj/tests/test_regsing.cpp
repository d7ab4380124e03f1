#include <catch2/catch_amalgamated.hpp>

#include <functional>
#include <random>

#include "padiflow/regsing.hpp"

using namespace padiflow;

namespace {
bool throwsWith(errc code, const std::function<void()>& f) {
    try {
        f();
    } catch (const error& e) {
        return e.code() == code;
    }
    return false;
}

// Series with ||f||_1 <= 1/p and vanishing order >= lo: every coefficient
// carries at least one factor of p and a p-free denominator.
TruncSeries randomAdmissible(std::mt19937& rng, int order, int lo, long p) {
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 9);
    TruncSeries f(order);
    for (int m = lo; m <= order; ++m) {
        int d = den(rng);
        while (d % p == 0) d = den(rng);
        f.set(m, Rational(makeRational(num(rng), d) * p));
    }
    if (f.isZero() && lo <= order) f.set(lo, Rational(p));
    return f;
}
}  // namespace

TEST_CASE("bMap divides coefficients by their exponent", "[regsing]") {
    TruncSeries b(4);
    b.set(2, Rational(5));
    b.set(4, Rational(1));
    const TruncSeries B = bMap(b, 1);
    CHECK(B[2] == makeRational(5, 2));
    CHECK(B[4] == makeRational(1, 4));
    CHECK(B[1] == 0);
    CHECK(B[3] == 0);

    TruncSeries b2(4);
    b2.set(3, Rational(1));
    b2.set(4, Rational(3));
    const TruncSeries B2 = bMap(b2, 1);
    CHECK(B2[3] == makeRational(1, 3));  // valuation drops at m = 3 when p = 3
    CHECK(B2[4] == makeRational(3, 4));

    CHECK(bMap(TruncSeries(5), 2).isZero());

    // vanishing order below 2^k
    const TruncSeries low = TruncSeries::monomial(2, Rational(1), 6);
    CHECK(throwsWith(errc::invalid_argument, [&] { bMap(low, 2); }));
    CHECK(throwsWith(errc::invalid_argument, [&] { bMap(low, 0); }));
}

TEST_CASE("bMap satisfies x B' = b exactly", "[regsing]") {
    std::mt19937 rng(11);
    for (int it = 0; it < 30; ++it) {
        const TruncSeries b = randomAdmissible(rng, 20, 4, 3);
        const TruncSeries B = bMap(b, 2);
        CHECK(xTimesDerivative(B) == b);
    }
}

TEST_CASE("bMapRadius pins both lemma radii", "[regsing]") {
    const RadiusPair pr3 = bMapRadius(1, 3, logZero(3));
    CHECK(pr3.r1.coefLogP == makeRational(-1, 3));
    CHECK(pr3.r1.coefLog2 == 0);
    CHECK(pr3.r2.coefLogP == 0);
    CHECK(pr3.r2.coefLog2 == -1);
    CHECK(pr3.clause1 == LemmaClause::changeVar1);
    CHECK(pr3.clause2 == LemmaClause::changeVar2);

    const RadiusPair pr5 = bMapRadius(3, 5, logZero(5));
    CHECK(pr5.r2.coefLog2 == makeRational(-1, 2));

    const LogValue seven = makeLogValue(Rational(-1), Rational(0), 7);
    const RadiusPair pr7 = bMapRadius(1, 7, seven);
    CHECK(pr7.r1.coefLogP == makeRational(-22, 21));  // -(1 + 1/21)

    CHECK(throwsWith(errc::invalid_argument,
                     [] { bMapRadius(1, 3, makeLogValue(Rational(1), Rational(0), 3)); }));
    CHECK(throwsWith(errc::invalid_argument, [] { bMapRadius(1, 9, logZero(9)); }));
}

TEST_CASE("resolvent solves the Euler equation coefficientwise", "[regsing]") {
    const TruncSeries a = TruncSeries::monomial(4, Rational(1), 5);
    const TruncSeries A = resolvent(a, 1, 2, 2);
    CHECK(A[4] == makeRational(2, 9));  // 1/(4 + 1/2)

    TruncSeries a2(4);
    a2.set(2, Rational(1));
    a2.set(3, Rational(1));
    const TruncSeries A2 = resolvent(a2, 1, 1, 1);
    CHECK(A2[2] == makeRational(1, 3));
    CHECK(A2[3] == makeRational(1, 4));

    CHECK(resolvent(TruncSeries(6), 1, 1, 1).isZero());
    CHECK(throwsWith(errc::invalid_argument, [&] { resolvent(a, 2, 4, 2); }));   // gcd 2
    CHECK(throwsWith(errc::invalid_argument, [&] { resolvent(a, 0, 1, 2); }));   // range
    CHECK(throwsWith(errc::invalid_argument, [&] { resolvent(a2, 1, 1, 2); }));  // ord 2 < 4

    std::mt19937 rng(12);
    for (int it = 0; it < 30; ++it) {
        const long s = 1 + it % 4;
        const long t = 1 + (it / 4) % 3;
        if (std::gcd(s, t) != 1) continue;
        const TruncSeries ar = randomAdmissible(rng, 18, 2, 5);
        const TruncSeries Ar = resolvent(ar, s, t, 1);
        const TruncSeries lhs = add(xTimesDerivative(Ar), scale(Ar, makeRational(s, t)));
        CHECK(lhs == ar);
    }
}

TEST_CASE("resolventRadius pins radii and guards the 2-adic clause", "[regsing]") {
    const RadiusPair pr = resolventRadius(2, 5, 1, 2, logZero(5));
    CHECK(pr.r1.coefLogP == makeRational(-1, 8));  // t/(p-1)^2 = 2/16
    CHECK(pr.r1.coefLog2 == 0);
    CHECK(pr.r2.coefLogP == 0);
    CHECK(pr.r2.coefLog2 == -2);  // k t / 2^(k-1) = 4/2
    CHECK(pr.clause1 == LemmaClause::odeSpecial1);
    CHECK(pr.clause2 == LemmaClause::odeSpecial2);

    // alpha = 2 with k = 1: 2^k < alpha + 2
    CHECK(throwsWith(errc::precondition_violated,
                     [] { resolventRadius(1, 3, 2, 1, logZero(3)); }));
    CHECK(throwsWith(errc::invalid_argument, [] { resolventRadius(1, 3, 3, 1, logZero(3)); }));
    CHECK(throwsWith(errc::invalid_argument, [] { resolventRadius(1, 5, 2, 4, logZero(5)); }));
}

TEST_CASE("lemma clause names", "[regsing]") {
    CHECK(std::string(lemmaClauseName(LemmaClause::changeVar1)) == "change-of-variable-1");
    CHECK(std::string(lemmaClauseName(LemmaClause::odeSpecial2)) == "special-ode-2");
}

TEST_CASE("expTrunc matches the direct expansion", "[regsing]") {
    const TruncSeries e1 = expTrunc(TruncSeries::monomial(1, Rational(1), 3));
    CHECK(e1[0] == 1);
    CHECK(e1[1] == 1);
    CHECK(e1[2] == makeRational(1, 2));
    CHECK(e1[3] == makeRational(1, 6));

    const TruncSeries e0 = expTrunc(TruncSeries(4));
    CHECK(e0[0] == 1);
    CHECK(e0.ord() == 0);

    const TruncSeries e3 = expTrunc(TruncSeries::monomial(1, Rational(3), 4));
    CHECK(e3[1] == 3);
    CHECK(e3[2] == makeRational(9, 2));
    CHECK(e3[3] == makeRational(9, 2));
    CHECK(e3[4] == makeRational(27, 8));

    TruncSeries c(2);
    c.set(0, Rational(1));
    CHECK(throwsWith(errc::invalid_argument, [&] { expTrunc(c); }));
}

TEST_CASE("expTrunc(B) expTrunc(-B) = 1 and solves x y' = b y", "[regsing]") {
    std::mt19937 rng(13);
    const TruncSeries one = TruncSeries::monomial(0, Rational(1), 16);
    for (int it = 0; it < 20; ++it) {
        const TruncSeries b = randomAdmissible(rng, 16, 2, 3);
        const TruncSeries B = bMap(b, 1);
        const TruncSeries ep = expTrunc(B);
        const TruncSeries em = expTrunc(neg(B));
        CHECK(mulTrunc(ep, em) == one);
        CHECK(xTimesDerivative(ep) == mulTrunc(b, ep));
    }
}

TEST_CASE("lemma norm bounds hold on random admissible inputs", "[regsing]") {
    std::mt19937 rng(14);
    for (const long p : {3L, 5L, 7L, 11L}) {
        const LogValue bBound = makeLogValue(makeRational(-2, p - 1), Rational(0), p);
        for (const int k : {1, 2, 3}) {
            for (int it = 0; it < 25; ++it) {
                const TruncSeries b = randomAdmissible(rng, 24, 1 << k, p);
                const TruncSeries B = bMap(b, k);
                const RadiusPair pr = bMapRadius(k, p, logZero(p));
                CHECK(normBoundedBy(B, bBound, pr.r1, p));
                CHECK(normBoundedBy(B, bBound, pr.r2, p));

                const long s = 1 + static_cast<long>(it) % (p - 1);
                const long t = 1 + static_cast<long>(it / 3) % (p - 1);
                if (std::gcd(s, t) != 1) continue;
                const TruncSeries a = randomAdmissible(rng, 24, 1 << k, p);
                const TruncSeries A = resolvent(a, s, t, k);
                if ((1L << k) * t < s + 2 * t) continue;
                const RadiusPair ar = resolventRadius(k, p, s, t, logZero(p));
                CHECK(normBoundedBy(A, ar.r1, ar.r1, p));
                CHECK(normBoundedBy(A, ar.r2, ar.r2, p));
            }
        }
    }
}

TEST_CASE("gaugeStrip removes the linear term", "[regsing]") {
    const long p = 3;
    const LogValue unit = logZero(p);
    const TruncSeries a = TruncSeries::monomial(2, Rational(3), 6);
    const TruncSeries b = TruncSeries::monomial(2, Rational(3), 6);
    const GaugeResult g = gaugeStrip(a, b, SeriesFamily(6), p, unit);

    CHECK(g.B[2] == makeRational(3, 2));
    CHECK(g.a0[2] == 3);
    CHECK(g.a0[4] == makeRational(-9, 2));
    CHECK(g.a0[6] == makeRational(27, 8));
    CHECK(g.a0[3] == 0);
    CHECK(g.c0.empty());
    CHECK(g.logr1.coefLogP == makeRational(-1, 2));  // 3/(p(p-1)) = 1/2 at p=3
    CHECK(g.logr1.coefLog2 == 0);

    // trivial gauge when b = 0
    const GaugeResult g0 = gaugeStrip(a, TruncSeries(6), SeriesFamily(6), p, unit);
    CHECK(g0.B.isZero());
    CHECK(g0.a0 == a);
}

TEST_CASE("gaugeStrip transforms the family and certifies its bounds", "[regsing]") {
    const long p = 3;
    const LogValue unit = logZero(p);
    const TruncSeries a = TruncSeries::monomial(2, Rational(3), 8);
    const TruncSeries b = TruncSeries::monomial(2, Rational(3), 8);
    TruncSeries c2(8), c3(8);
    c2.set(0, Rational(3));
    c3.set(1, Rational(6));
    const SeriesFamily c({FamilyTerm{2, c2}, FamilyTerm{3, c3}}, 8);
    const GaugeResult g = gaugeStrip(a, b, c, p, unit);

    // c0_m = c_m * exp((m-1)B)
    const TruncSeries ep = expTrunc(g.B);
    REQUIRE(g.c0.terms().size() == 2);
    CHECK(g.c0.terms()[0].series == mulTrunc(c2, ep));
    CHECK(g.c0.terms()[1].series == mulTrunc(c3, mulTrunc(ep, ep)));

    // certified output bounds at the shrunk radius
    const LogValue minusLogP = makeLogValue(Rational(-1), Rational(0), p);
    CHECK(normBoundedBy(g.a0, g.logr1 + minusLogP, g.logr1, p));
    for (const FamilyTerm& t : g.c0.terms()) CHECK(normBoundedBy(t.series, minusLogP, g.logr1, p));
}

TEST_CASE("gaugeStrip rejects bad inputs with the offending coefficient", "[regsing]") {
    const long p = 3;
    const LogValue unit = logZero(p);
    const SeriesFamily none(6);
    const TruncSeries a = TruncSeries::monomial(2, Rational(3), 6);

    // nonzero linear coefficient of b is a structural gap, not a hypothesis failure
    const TruncSeries bLin = TruncSeries::monomial(1, Rational(3), 6);
    CHECK(throwsWith(errc::precondition_violated, [&] { gaugeStrip(a, bLin, none, p, unit); }));

    // norm hypothesis failures
    const TruncSeries aBad = TruncSeries::monomial(2, Rational(1), 6);
    CHECK(throwsWith(errc::hypothesis_violated, [&] { gaugeStrip(aBad, TruncSeries(6), none, p, unit); }));
    try {
        gaugeStrip(aBad, TruncSeries(6), none, p, unit);
    } catch (const error& e) {
        CHECK(std::string(e.what()).find("coefficient 2") != std::string::npos);
    }

    const TruncSeries aLin = TruncSeries::monomial(1, Rational(3), 6);
    CHECK(throwsWith(errc::hypothesis_violated, [&] { gaugeStrip(aLin, TruncSeries(6), none, p, unit); }));

    TruncSeries cBad(6);
    cBad.set(0, Rational(1));
    CHECK(throwsWith(errc::hypothesis_violated, [&] {
        gaugeStrip(a, TruncSeries(6), SeriesFamily({FamilyTerm{2, cBad}}, 6), p, unit);
    }));

    // positive radius
    CHECK(throwsWith(errc::invalid_argument, [&] {
        gaugeStrip(a, TruncSeries(6), none, p, makeLogValue(Rational(1), Rational(0), p));
    }));
}
