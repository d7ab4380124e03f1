#pragma once

#include <vector>

#include "padiflow/rational.hpp"

namespace padiflow {

// Deterministic trial division; every prime handled here is far below the
// range where this gets slow.
inline bool isPrime(long n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    if (n % 3 == 0) return n == 3;
    for (long d = 5; d * d <= n; d += 6) {
        if (n % d == 0 || n % (d + 2) == 0) return false;
    }
    return true;
}

inline std::vector<long> primesUpTo(long n) {
    std::vector<long> out;
    if (n < 2) return out;
    std::vector<bool> composite(static_cast<size_t>(n) + 1, false);
    for (long i = 2; i <= n; ++i) {
        if (composite[static_cast<size_t>(i)]) continue;
        out.push_back(i);
        for (long j = i * i; j <= n; j += i) composite[static_cast<size_t>(j)] = true;
    }
    return out;
}

inline void requireOddPrime(long p, const char* who) {
    if (p < 3 || !isPrime(p) || p % 2 == 0)
        throw error(errc::invalid_argument, std::string(who) + ": p must be an odd prime");
}

// p-adic valuation of a rational: an integer, or +infinity for 0.
struct PadicVal {
    bool infinite = false;
    long v = 0;

    static PadicVal infinity() { return PadicVal{true, 0}; }
    static PadicVal finite(long v) { return PadicVal{false, v}; }

    bool operator==(const PadicVal& o) const {
        return infinite == o.infinite && (infinite || v == o.v);
    }
};

inline PadicVal vp(const Rational& x, long p) {
    if (p < 2 || !isPrime(p)) throw error(errc::invalid_argument, "vp: p must be prime");
    if (x == 0) return PadicVal::infinity();
    Integer prime(p), tmp;
    const long vnum = static_cast<long>(mpz_remove(tmp.get_mpz_t(), x.get_num().get_mpz_t(), prime.get_mpz_t()));
    const long vden = static_cast<long>(mpz_remove(tmp.get_mpz_t(), x.get_den().get_mpz_t(), prime.get_mpz_t()));
    return PadicVal::finite(vnum - vden);
}

} // namespace padiflow
