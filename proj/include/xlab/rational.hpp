#pragma once

#include <gmpxx.h>

#include <string>
#include <type_traits>

namespace xlab {

using Rational = mpq_class;
using BigInt = mpz_class;

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, Rational>;

/// Parses "p/q", "p" or a plain decimal integer into a canonical rational.
Rational parse_rational(const std::string& text);

/// "p/q" (or "p" when q == 1).
std::string to_string(const Rational& r);

/// Round-trip decimal with 17 significant digits.
std::string format_double(double x);

inline double to_double(double x) { return x; }
inline double to_double(const Rational& r) { return r.get_d(); }

template <class T>
T from_int(long v) {
    return T(v);
}

template <class T>
T ratio(long num, long den) {
    if constexpr (is_exact_v<T>) {
        Rational r(num, den);
        r.canonicalize();
        return r;
    } else {
        return static_cast<double>(num) / static_cast<double>(den);
    }
}

} // namespace xlab
