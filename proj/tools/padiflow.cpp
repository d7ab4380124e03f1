// padiflow: exact-arithmetic CLI for plane vector-field singularities,
// p-adic ODE solving with certified radius ledgers, p-closure scans, and
// convergence-budget enclosures.  Reports are deterministic JSON; --human
// switches to a plain tabular rendering.

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "padiflow/charp.hpp"
#include "padiflow/json_io.hpp"

namespace {

using padiflow::Json;

Json loadProblemFile(const std::string& path, const char* expectedKind) {
    std::ifstream in(path);
    if (!in)
        throw padiflow::error(padiflow::errc::parse_error, "cannot open input file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    Json j = padiflow::parseJsonText(buf.str());
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw padiflow::error(padiflow::errc::parse_error,
                              "problem file must be an object with a \"kind\" field");
    const std::string kind = j["kind"].get<std::string>();
    if (kind != expectedKind)
        throw padiflow::error(padiflow::errc::parse_error,
                              "problem file kind \"" + kind + "\" does not match subcommand (need \"" +
                                  expectedKind + "\")");
    return j;
}

int resolveOrder(long flagOrder, const Json& file) {
    if (flagOrder > 0) return static_cast<int>(flagOrder);
    if (file.contains("order") && file["order"].is_number_integer()) {
        const long n = file["order"].get<long>();
        if (n > 0 && n <= 1000000) return static_cast<int>(n);
    }
    throw padiflow::error(padiflow::errc::parse_error,
                          "no truncation order: pass --order or put \"order\" in the file");
}

std::string logValueText(const padiflow::LogValue& lv) {
    return padiflow::rationalToString(lv.coefLogP) + "*log(" + std::to_string(lv.p) + ") + " +
           padiflow::rationalToString(lv.coefLog2) + "*log(2)";
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

int cmdSolve(const std::string& input, long flagOrder, bool human) {
    const Json file = loadProblemFile(input, "ode");
    const int order = resolveOrder(flagOrder, file);
    padiflow::OdeProblem prob = padiflow::odeProblemFromJson(file);

    const padiflow::TruncSeries direct = padiflow::solveDirect(prob, order);
    const padiflow::NewtonResult newton = padiflow::solveNewton(prob, order);
    const bool agree = direct == newton.y;
    const bool selfBounded =
        padiflow::checkSelfBounded(newton.y, newton.ledger.certifiedR, prob.p);
    const bool withinClosedForm = padiflow::ledgerWithinClosedFormBound(newton.ledger, prob.t);

    Json report;
    report["kind"] = "solve-report";
    report["p"] = prob.p;
    report["s"] = prob.s;
    report["t"] = prob.t;
    report["order"] = order;
    report["solversAgree"] = agree;
    report["y"] = padiflow::toJson(newton.y);
    report["ledger"] = padiflow::toJson(newton.ledger);
    report["selfBounded"] = selfBounded;
    report["withinClosedFormR"] = withinClosedForm;

    if (human) {
        std::cout << "ode solve: p=" << prob.p << " alpha=" << prob.s << "/" << prob.t
                  << " order=" << order << "\n";
        std::cout << "solvers agree:        " << (agree ? "yes" : "NO") << "\n";
        std::cout << "self-bounded:         " << (selfBounded ? "yes" : "NO") << "\n";
        std::cout << "within closed bound:  " << (withinClosedForm ? "yes" : "NO") << "\n";
        std::cout << "certified logR:       " << logValueText(newton.ledger.certifiedR) << "\n";
        std::cout << "ledger entries:\n";
        for (const auto& e : newton.ledger.entries)
            std::cout << "  k=" << e.k << " [" << padiflow::regimeName(e.regime)
                      << "] logr = " << logValueText(e.logr) << "\n";
        std::cout << "leading coefficients:\n";
        int shown = 0;
        for (int m = 0; m <= newton.y.order() && shown < 8; ++m)
            if (newton.y[m] != 0) {
                std::cout << "  X^" << m << ": " << padiflow::rationalToString(newton.y[m])
                          << "\n";
                ++shown;
            }
    } else {
        emit(report);
    }
    return (agree && selfBounded) ? 0 : 1;
}

int cmdSeparatrix(const std::string& input, long flagOrder, bool human) {
    const Json file = loadProblemFile(input, "field");
    const int order = resolveOrder(flagOrder, file);
    const padiflow::VectorField V = padiflow::fieldFromJson(file, "field");

    const padiflow::SingularityClass cls = padiflow::classifySingularity(V);
    Json report;
    report["kind"] = "separatrix-report";
    report["class"] = padiflow::singKindName(cls.kind);
    if (cls.hasAlpha) {
        report["alpha"] = padiflow::rationalToString(cls.alpha);
        report["s"] = cls.s;
        report["t"] = cls.t;
    }

    const padiflow::TruncSeries phi1 = padiflow::separatrixSeries(V, 1, order);
    const padiflow::TruncSeries phi2 = padiflow::separatrixSeries(V, 2, order);
    const padiflow::TruncSeries d1 = padiflow::invarianceDefect(V, phi1, 1);
    const padiflow::TruncSeries d2 = padiflow::invarianceDefect(V, phi2, 2);
    report["phi1"] = padiflow::toJson(phi1);
    report["phi2"] = padiflow::toJson(phi2);
    report["defect1Zero"] = d1.isZero();
    report["defect2Zero"] = d2.isZero();
    report["defect1Order"] = d1.ord();
    report["defect2Order"] = d2.ord();

    if (human) {
        std::cout << "singularity class: " << padiflow::singKindName(cls.kind) << "\n";
        if (cls.hasAlpha)
            std::cout << "alpha = " << padiflow::rationalToString(cls.alpha) << " (s=" << cls.s
                      << ", t=" << cls.t << ")\n";
        auto show = [](const char* name, const padiflow::TruncSeries& f) {
            std::cout << name << ":";
            bool any = false;
            for (int m = 0; m <= f.order(); ++m)
                if (f[m] != 0) {
                    std::cout << " T^" << m << ": " << padiflow::rationalToString(f[m]);
                    any = true;
                }
            if (!any) std::cout << " 0";
            std::cout << "\n";
        };
        show("phi1", phi1);
        show("phi2", phi2);
        std::cout << "defect orders: " << d1.ord() << ", " << d2.ord()
                  << " (beyond truncation means identically zero)\n";
    } else {
        emit(report);
    }
    return 0;
}

int cmdSize(const std::string& input, long flagPrime, bool human) {
    const Json file = loadProblemFile(input, "series");
    if (!file.contains("series"))
        throw padiflow::error(padiflow::errc::parse_error,
                              "series problem file needs a \"series\" field");
    long p = flagPrime;
    if (p <= 0) {
        if (!file.contains("prime") || !file["prime"].is_number_integer())
            throw padiflow::error(padiflow::errc::parse_error,
                                  "no prime: pass --prime or put \"prime\" in the file");
        p = file["prime"].get<long>();
    }
    const padiflow::TruncSeries phi = padiflow::seriesFromJson(file["series"], "series");
    const padiflow::SizeEstimate est = padiflow::lambdaExponent(phi, p);

    Json report;
    report["kind"] = "size-report";
    report["p"] = p;
    report["estimate"] = padiflow::toJson(est);
    if (human) {
        std::cout << "size estimate at p=" << p << "\n";
        std::cout << "lambda exponent:   "
                  << (est.lambdaP.infinite ? std::string("inf")
                                           : padiflow::rationalToString(est.lambdaP.value))
                  << "\n";
        std::cout << "log_p lower bound: " << padiflow::rationalToString(est.lowerBoundLogP)
                  << (est.exact ? " (exact)" : "") << "\n";
        std::cout << "log_p radius bound: "
                  << (est.rhoLowerLogP.infinite
                          ? std::string("inf")
                          : padiflow::rationalToString(est.rhoLowerLogP.value))
                  << "\n";
    } else {
        emit(report);
    }
    return 0;
}

int cmdPClosed(const std::string& input, long flagPrime, std::vector<long> range, bool human) {
    const Json file = loadProblemFile(input, "field");
    const padiflow::VectorField V = padiflow::fieldFromJson(file, "field");

    long lo = 0, hi = 0;
    if (!range.empty()) {
        lo = range[0];
        hi = range[1];
    } else if (flagPrime > 0) {
        lo = hi = flagPrime;
    } else if (file.contains("primeRange") && file["primeRange"].is_array() &&
               file["primeRange"].size() == 2) {
        lo = file["primeRange"][0].get<long>();
        hi = file["primeRange"][1].get<long>();
    } else if (file.contains("prime") && file["prime"].is_number_integer()) {
        lo = hi = file["prime"].get<long>();
    } else {
        throw padiflow::error(padiflow::errc::parse_error,
                              "no prime: pass --prime/--prime-range or put one in the file");
    }
    if (lo < 3 || hi < lo)
        throw padiflow::error(padiflow::errc::parse_error, "bad prime range");

    Json results = Json::array();
    for (long p : padiflow::primesUpTo(hi)) {
        if (p < lo || p == 2) continue;
        Json row;
        row["p"] = p;
        try {
            const padiflow::ModPField F = padiflow::reduceModP(V, p);
            row["status"] = padiflow::pClosedTest(F) ? "closed" : "not-closed";
        } catch (const padiflow::error& e) {
            if (e.code() != padiflow::errc::bad_reduction) throw;
            row["status"] = "bad-reduction";
        }
        results.push_back(std::move(row));
    }
    Json report;
    report["kind"] = "pclosed-report";
    report["results"] = std::move(results);
    if (human) {
        for (const auto& row : report["results"])
            std::cout << "p=" << row["p"].get<long>() << ": "
                      << row["status"].get<std::string>() << "\n";
    } else {
        emit(report);
    }
    return 0;
}

int cmdBudget(long s, long t, const std::string& cStr, long pmax, std::vector<long> excluded,
              const std::string& widthStr, bool human) {
    const padiflow::Rational C = padiflow::rationalFromString(cStr);
    const padiflow::Rational width = padiflow::rationalFromString(widthStr);
    const std::set<long> excl(excluded.begin(), excluded.end());
    const padiflow::BudgetResult res = padiflow::aanalyticityBudget(s, t, C, pmax, excl, width);
    Json report = padiflow::toJson(res);
    report["primesUsed"] = res.primesUsed;
    if (human) {
        std::cout << "budget sum over odd primes p <= " << pmax << " (s=" << s << ", t=" << t
                  << ", C=" << cStr << ")\n";
        std::cout << "partial in [" << padiflow::rationalToString(res.partial.lo) << ", "
                  << padiflow::rationalToString(res.partial.hi) << "]\n";
        std::cout << "tail    in [" << padiflow::rationalToString(res.tail.lo) << ", "
                  << padiflow::rationalToString(res.tail.hi) << "]\n";
        std::cout << "primes used: " << res.primesUsed << "\n";
    } else {
        emit(report);
    }
    return 0;
}

int cmdSelftest(bool human) {
    using namespace padiflow;
    std::vector<std::pair<std::string, bool>> checks;
    auto check = [&](const std::string& name, bool ok) { checks.emplace_back(name, ok); };

    {
        check("k1 table", findK1(3) == 6 && findK1(5) == 8 && findK1(11) == 11);
    }
    {
        BivarPoly P(2), Q(2);
        P.set(1, 0, Rational(1));
        Q.set(0, 1, Rational(-1));
        Q.set(2, 0, Rational(1));
        const VectorField V = makeVectorField(P, Q);
        const TruncSeries phi = separatrixSeries(V, 2, 8);
        TruncSeries expect(8);
        expect.set(2, makeRational(1, 3));
        check("flagship separatrix", phi == expect);
        check("flagship defect", invarianceDefect(V, phi, 2).isZero());
        check("flagship not 3-closed", !pClosedTest(reduceModP(V, 3)));
        check("flagship 5-closed", pClosedTest(reduceModP(V, 5)));
    }
    {
        TruncSeries a(16);
        a.set(2, Rational(3));
        OdeProblem prob(a, TruncSeries(16), SeriesFamily(16), 1, 1, 3,
                        makeLogValue(Rational(0), Rational(0), 3));
        const TruncSeries direct = solveDirect(prob, 16);
        const NewtonResult nw = solveNewton(prob, 16);
        check("ode oracle agreement", direct == nw.y);
        check("ode self-bounded", checkSelfBounded(nw.y, nw.ledger.certifiedR, 3));
    }
    {
        const BudgetResult b = aanalyticityBudget(1, 1, Rational(14), 100);
        check("budget interval sane", b.partial.lo <= b.partial.hi && b.tail.lo <= b.tail.hi &&
                                          b.partial.lo > 0);
    }

    bool all = true;
    Json rows = Json::array();
    for (const auto& [name, ok] : checks) {
        all = all && ok;
        Json row;
        row["name"] = name;
        row["ok"] = ok;
        rows.push_back(std::move(row));
        if (human) std::cout << (ok ? "ok   " : "FAIL ") << name << "\n";
    }
    if (!human) {
        Json report;
        report["kind"] = "selftest-report";
        report["checks"] = std::move(rows);
        report["ok"] = all;
        emit(report);
    }
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "padiflow: exact separatrix series, p-adic ODE radius ledgers, p-closure scans,\n"
        "and certified convergence-budget enclosures.\n"
        "Environment: PADIFLOW_PRECISION overrides the initial enclosure width for\n"
        "log-value comparisons (positive rational string, default 1/1024)."};
    app.require_subcommand(1);

    std::string input, cStr = "14", widthStr = "1/10000000";
    long order = 0, prime = 0, s = 1, t = 1, pmax = 0;
    std::vector<long> primeRange, excluded;
    bool human = false;

    auto* solve = app.add_subcommand("solve", "solve an ODE problem by both solvers");
    solve->add_option("--input", input, "problem file (kind \"ode\")")->required();
    solve->add_option("--order", order, "truncation order");
    solve->add_flag("--human", human, "tabular output");

    auto* sep = app.add_subcommand("separatrix", "separatrix series of a vector field");
    sep->add_option("--input", input, "problem file (kind \"field\")")->required();
    sep->add_option("--order", order, "truncation order");
    sep->add_flag("--human", human, "tabular output");

    auto* size = app.add_subcommand("size", "size/growth estimate of a graph series");
    size->add_option("--input", input, "problem file (kind \"series\")")->required();
    size->add_option("--prime", prime, "prime p");
    size->add_flag("--human", human, "tabular output");

    auto* pclosed = app.add_subcommand("pclosed", "p-closure scan of a vector field");
    pclosed->add_option("--input", input, "problem file (kind \"field\")")->required();
    pclosed->add_option("--prime", prime, "single prime");
    pclosed->add_option("--prime-range", primeRange, "inclusive range lo hi")->expected(2);
    pclosed->add_flag("--human", human, "tabular output");

    auto* budget = app.add_subcommand("budget", "convergence budget over odd primes");
    budget->add_option("--pmax", pmax, "split point of the prime sum")->required();
    budget->add_option("--s", s, "numerator bound (primes <= max(s,t) are skipped)");
    budget->add_option("--t", t, "denominator weight");
    budget->add_option("--C", cStr, "constant factor (rational string)");
    budget->add_option("--exclude", excluded, "primes to exclude");
    budget->add_option("--width", widthStr, "target enclosure width (rational string)");
    budget->add_flag("--human", human, "tabular output");

    auto* selftest = app.add_subcommand("selftest", "run built-in consistency checks");
    selftest->add_flag("--human", human, "tabular output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*solve) return cmdSolve(input, order, human);
        if (*sep) return cmdSeparatrix(input, order, human);
        if (*size) return cmdSize(input, prime, human);
        if (*pclosed) return cmdPClosed(input, prime, primeRange, human);
        if (*budget) return cmdBudget(s, t, cStr, pmax, excluded, widthStr, human);
        if (*selftest) return cmdSelftest(human);
    } catch (const padiflow::error& e) {
        std::cerr << "error (" << padiflow::errc_name(e.code()) << "): " << e.what() << "\n";
        return e.code() == padiflow::errc::parse_error ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
