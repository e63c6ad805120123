#pragma once

#include <cstdlib>
#include <numeric>
#include <string>

#include "annulab/errors.hpp"

namespace annulab {

// Irreducible fraction p/q with q >= 1.
struct Rational {
    long long p = 0;
    long long q = 1;

    double value() const { return static_cast<double>(p) / static_cast<double>(q); }
    std::string str() const { return std::to_string(p) + "/" + std::to_string(q); }
};

inline Rational make_rational(long long p, long long q) {
    if (q == 0) throw DomainError("make_rational: zero denominator");
    if (q < 0) { p = -p; q = -q; }
    long long g = std::gcd(p < 0 ? -p : p, q);
    if (g > 1) { p /= g; q /= g; }
    return {p, q};
}

inline bool operator==(const Rational& a, const Rational& b) {
    return a.p == b.p && a.q == b.q;
}
inline bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

// Exact order by value (cross multiplication in 128-bit).
inline bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.p) * b.q < static_cast<__int128>(b.p) * a.q;
}

inline Rational parse_rational(const std::string& s) {
    auto integer = [&s](const std::string& part) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(part, &used);
        } catch (const std::exception&) {
            throw UsageError("cannot parse rational '" + s + "'");
        }
        if (used != part.size()) throw UsageError("cannot parse rational '" + s + "'");
        return v;
    };
    auto slash = s.find('/');
    if (slash == std::string::npos) return make_rational(integer(s), 1);
    return make_rational(integer(s.substr(0, slash)), integer(s.substr(slash + 1)));
}

} // namespace annulab
