#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "padiflow/bivariate.hpp"
#include "padiflow/errors.hpp"
#include "padiflow/foliation.hpp"
#include "padiflow/gauss.hpp"
#include "padiflow/interval.hpp"
#include "padiflow/logvalue.hpp"
#include "padiflow/ode.hpp"
#include "padiflow/rational.hpp"
#include "padiflow/series.hpp"
#include "padiflow/size.hpp"

namespace padiflow {

// All reports use ordered JSON so identical inputs give byte-identical bytes.
using Json = nlohmann::ordered_json;

inline Json toJson(const Rational& q) { return rationalToString(q); }

inline Rational rationalFromJson(const Json& j, const char* what) {
    if (j.is_string()) return rationalFromString(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    throw error(errc::parse_error, std::string(what) + ": expected a rational string");
}

inline Json toJson(const RatInterval& iv) {
    return Json::array({rationalToString(iv.lo), rationalToString(iv.hi)});
}

inline Json toJson(const LogValue& lv) {
    Json j;
    j["logp"] = rationalToString(lv.coefLogP);
    j["log2"] = rationalToString(lv.coefLog2);
    j["p"] = lv.p;
    return j;
}

inline LogValue logValueFromJson(const Json& j, const char* what) {
    if (!j.is_object() || !j.contains("logp") || !j.contains("log2") || !j.contains("p"))
        throw error(errc::parse_error,
                    std::string(what) + ": expected {\"logp\", \"log2\", \"p\"}");
    if (!j["p"].is_number_integer())
        throw error(errc::parse_error, std::string(what) + ": \"p\" must be an integer");
    return makeLogValue(rationalFromJson(j["logp"], what), rationalFromJson(j["log2"], what),
                        j["p"].get<long>());
}

inline Json toJson(const NormBound& nb) {
    if (nb.minusInfinity()) return "-inf";
    return toJson(*nb.value);
}

inline Json toJson(const TruncSeries& f) {
    Json coeffs = Json::array();
    for (int m = 0; m <= f.order(); ++m)
        if (f[m] != 0) coeffs.push_back(Json::array({m, rationalToString(f[m])}));
    Json j;
    j["coeffs"] = std::move(coeffs);
    j["order"] = f.order();
    return j;
}

inline TruncSeries seriesFromJson(const Json& j, const char* what) {
    if (!j.is_object() || !j.contains("order") || !j.contains("coeffs"))
        throw error(errc::parse_error,
                    std::string(what) + ": expected {\"coeffs\": [[m, q]...], \"order\": N}");
    if (!j["order"].is_number_integer() || j["order"].get<long>() < 0)
        throw error(errc::parse_error, std::string(what) + ": \"order\" must be a nonnegative integer");
    const long order = j["order"].get<long>();
    if (order > 1000000)
        throw error(errc::parse_error, std::string(what) + ": \"order\" is unreasonably large");
    TruncSeries f(static_cast<int>(order));
    if (!j["coeffs"].is_array())
        throw error(errc::parse_error, std::string(what) + ": \"coeffs\" must be an array");
    for (const auto& pair : j["coeffs"]) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer())
            throw error(errc::parse_error,
                        std::string(what) + ": coefficient entries must be [exponent, rational]");
        const long m = pair[0].get<long>();
        if (m < 0 || m > order)
            throw error(errc::parse_error, std::string(what) + ": exponent " + std::to_string(m) +
                                               " outside 0.." + std::to_string(order));
        f.set(static_cast<int>(m), rationalFromJson(pair[1], what));
    }
    return f;
}

inline Json toJson(const SeriesFamily& fam) {
    Json j = Json::array();
    for (const auto& term : fam.terms()) {
        Json e;
        e["m"] = term.m;
        e["series"] = toJson(term.series);
        j.push_back(std::move(e));
    }
    return j;
}

inline SeriesFamily familyFromJson(const Json& j, int order, const char* what) {
    if (!j.is_array())
        throw error(errc::parse_error, std::string(what) + ": expected a list of {\"m\", \"series\"}");
    std::vector<FamilyTerm> terms;
    for (const auto& e : j) {
        if (!e.is_object() || !e.contains("m") || !e.contains("series") ||
            !e["m"].is_number_integer())
            throw error(errc::parse_error,
                        std::string(what) + ": family entries must be {\"m\": int, \"series\": ...}");
        terms.push_back(FamilyTerm{static_cast<int>(e["m"].get<long>()),
                                   seriesFromJson(e["series"], what)});
    }
    return SeriesFamily(std::move(terms), order);
}

inline Json toJson(const BivarPoly& f) {
    Json j = Json::array();
    for (int i = 0; i <= f.bound(); ++i)
        for (int jj = 0; i + jj <= f.bound(); ++jj)
            if (f.coeff(i, jj) != 0)
                j.push_back(Json::array({Json::array({i, jj}), rationalToString(f.coeff(i, jj))}));
    return j;
}

inline BivarPoly polyFromJson(const Json& j, const char* what) {
    if (!j.is_array())
        throw error(errc::parse_error, std::string(what) + ": expected [[[i,j], q]...]");
    int bound = 0;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_array() || e[0].size() != 2 ||
            !e[0][0].is_number_integer() || !e[0][1].is_number_integer())
            throw error(errc::parse_error,
                        std::string(what) + ": monomial entries must be [[i,j], rational]");
        const long i = e[0][0].get<long>(), jj = e[0][1].get<long>();
        if (i < 0 || jj < 0 || i + jj > 512)
            throw error(errc::parse_error, std::string(what) + ": exponents out of range");
        bound = std::max(bound, static_cast<int>(i + jj));
    }
    BivarPoly f(bound);
    for (const auto& e : j)
        f.set(static_cast<int>(e[0][0].get<long>()), static_cast<int>(e[0][1].get<long>()),
              rationalFromJson(e[1], what));
    return f;
}

inline Json toJson(const VectorField& V) {
    Json j;
    j["P"] = toJson(V.P);
    j["Q"] = toJson(V.Q);
    return j;
}

inline VectorField fieldFromJson(const Json& j, const char* what) {
    if (!j.is_object() || !j.contains("P") || !j.contains("Q"))
        throw error(errc::parse_error, std::string(what) + ": expected {\"P\": ..., \"Q\": ...}");
    return makeVectorField(polyFromJson(j["P"], what), polyFromJson(j["Q"], what));
}

inline Json toJson(const RadiusLedger& ledger) {
    Json j;
    j["k1"] = ledger.k1;
    j["initialLogR"] = toJson(ledger.initialLogR);
    j["gaugeLogR"] = toJson(ledger.gaugeLogR);
    Json entries = Json::array();
    for (const auto& e : ledger.entries) {
        Json je;
        je["k"] = e.k;
        je["regime"] = regimeName(e.regime);
        je["logr"] = toJson(e.logr);
        entries.push_back(std::move(je));
    }
    j["entries"] = std::move(entries);
    j["certifiedR"] = toJson(ledger.certifiedR);
    j["closedFormR"] = toJson(ledger.closedFormR);
    return j;
}

inline Json toJson(const ExtRational& x) {
    if (x.infinite) return "inf";
    return rationalToString(x.value);
}

inline Json toJson(const SizeEstimate& est) {
    Json j;
    j["lambdaP"] = toJson(est.lambdaP);
    j["lowerBoundLogP"] = rationalToString(est.lowerBoundLogP);
    j["exact"] = est.exact;
    j["rhoLowerLogP"] = toJson(est.rhoLowerLogP);
    return j;
}

inline Json toJson(const BudgetResult& b) {
    Json j;
    j["partial"] = toJson(b.partial);
    j["tail"] = toJson(b.tail);
    j["pMax"] = b.pMax;
    return j;
}

// Problem files: {"kind": "ode" | "field" | "series", payload..., run params}.
struct ProblemFile {
    std::string kind;
    Json payload;
};

inline Json parseJsonText(const std::string& text) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) throw error(errc::parse_error, "input is not valid JSON");
    return j;
}

inline OdeProblem odeProblemFromJson(const Json& j) {
    for (const char* key : {"a", "b", "s", "t", "p", "logr"})
        if (!j.contains(key))
            throw error(errc::parse_error,
                        std::string("ode problem: missing field \"") + key + "\"");
    if (!j["s"].is_number_integer() || !j["t"].is_number_integer() || !j["p"].is_number_integer())
        throw error(errc::parse_error, "ode problem: \"s\", \"t\", \"p\" must be integers");
    TruncSeries a = seriesFromJson(j["a"], "ode problem field \"a\"");
    TruncSeries b = seriesFromJson(j["b"], "ode problem field \"b\"");
    const int order = commonOrder(a, b);
    SeriesFamily c = j.contains("c") ? familyFromJson(j["c"], order, "ode problem field \"c\"")
                                     : SeriesFamily(order);
    const long p = j["p"].get<long>();
    // "logr" may be a full LogValue object or a rational shorthand u, meaning
    // u * log p.
    LogValue logr = j["logr"].is_object()
                        ? logValueFromJson(j["logr"], "ode problem field \"logr\"")
                        : makeLogValue(rationalFromJson(j["logr"], "ode problem field \"logr\""),
                                       Rational(0), p);
    return OdeProblem(std::move(a), std::move(b), std::move(c), j["s"].get<long>(),
                      j["t"].get<long>(), p, std::move(logr));
}

}  // namespace padiflow
