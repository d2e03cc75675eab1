#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace colocal {

using Rational = mpq_class;

/// Arithmetic policy for the two supported scalar fields.
///
/// Exact mode (Rational) compares with equality. Float mode (double) treats
/// values within the process-wide tolerance as equal; the tolerance defaults
/// to 1e-9 and is changed with set_float_tolerance().
template <class T>
struct scalar_traits;

double float_tolerance() noexcept;
void set_float_tolerance(double tol);

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static constexpr const char* name = "exact";

    static bool is_zero(const Rational& x) { return sgn(x) == 0; }
    static bool is_positive(const Rational& x) { return sgn(x) > 0; }
    static Rational parse(std::string_view text);
    static std::string format(const Rational& x) { return x.get_str(); }
    static double to_double(const Rational& x) { return x.get_d(); }
    static Rational from_rational(const Rational& x) { return x; }
};

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static constexpr const char* name = "float";

    static bool is_zero(double x);
    static bool is_positive(double x) { return x > float_tolerance(); }
    static double parse(std::string_view text);
    static std::string format(double x);
    static double to_double(double x) { return x; }
    static double from_rational(const Rational& x) { return x.get_d(); }
};

template <class T>
bool is_zero(const T& x) {
    return scalar_traits<T>::is_zero(x);
}

template <class T>
bool approx_equal(const T& a, const T& b) {
    return scalar_traits<T>::is_zero(T(a - b));
}

/// Parses "p/q", an integer, or a finite decimal ("0.25", "-1e-3") into an
/// exact rational. Throws colocal::Error(InvalidInput) on malformed text.
Rational parse_rational(std::string_view text);

}  // namespace colocal
