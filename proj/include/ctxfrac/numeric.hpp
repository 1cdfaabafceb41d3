#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <sstream>
#include <string>

namespace ctxfrac {

/// Exact arbitrary-precision rational, the scalar of the exact backend.
/// Expression templates are off so it behaves like a plain value type in
/// generic code shared with `double`.
using Rational =
    boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                  boost::multiprecision::et_off>;

namespace num {

template <typename T>
struct traits;

template <>
struct traits<double> {
    static constexpr bool exact = false;
    /// Validation tolerance for hand-entered tables.
    static double default_eps() { return 1e-9; }
    /// Pivot/feasibility tolerance inside the simplex.
    static double lp_eps() { return 1e-9; }
};

template <>
struct traits<Rational> {
    static constexpr bool exact = true;
    static Rational default_eps() { return Rational(0); }
    static Rational lp_eps() { return Rational(0); }
};

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

template <typename T>
T abs(const T& x) {
    return x < T(0) ? T(-x) : x;
}

inline std::string to_string(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

inline std::string to_string(const Rational& x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

/// Parses "p/q" or "p" (arbitrary-size integers) into an exact rational.
inline Rational parse_rational(const std::string& text) {
    return Rational(text);
}

}  // namespace num
}  // namespace ctxfrac
