#include <colocal/error.hpp>
#include <colocal/scalar.hpp>

#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>

namespace colocal {
namespace {

std::atomic<double> g_tolerance{1e-9};

Rational pow10(long exponent) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    return exponent < 0 ? Rational(mpz_class(1), p) : Rational(p);
}

[[noreturn]] void bad_number(std::string_view text) {
    throw Error(Errc::InvalidInput, "not a number: \"" + std::string(text) + "\"");
}

Rational parse_decimal(std::string_view text) {
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
    std::string digits;
    long exponent = 0;
    bool seen_digit = false;
    bool seen_point = false;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            seen_digit = true;
            if (seen_point) --exponent;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!seen_digit) bad_number(text);
    if (i < text.size()) {
        if (text[i] != 'e' && text[i] != 'E') bad_number(text);
        long e = 0;
        const auto tail = text.substr(i + 1);
        const char* first = tail.data();
        if (!tail.empty() && tail.front() == '+') ++first;
        const auto [ptr, ec] = std::from_chars(first, tail.data() + tail.size(), e);
        if (ec != std::errc{} || ptr != tail.data() + tail.size()) bad_number(text);
        exponent += e;
    }
    Rational value(mpz_class(digits, 10));
    value *= pow10(exponent);
    value.canonicalize();
    return negative ? Rational(-value) : value;
}

}  // namespace

double float_tolerance() noexcept { return g_tolerance.load(std::memory_order_relaxed); }

void set_float_tolerance(double tol) {
    if (!(tol > 0.0) || !std::isfinite(tol))
        throw Error(Errc::InvalidInput, "tolerance must be positive and finite");
    g_tolerance.store(tol, std::memory_order_relaxed);
}

Rational parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) bad_number(text);
    const auto slash = text.find('/');
    if (slash != std::string_view::npos) {
        const auto num = text.substr(0, slash);
        const auto den = text.substr(slash + 1);
        const auto is_int = [](std::string_view s) {
            if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
            if (s.empty()) return false;
            for (char c : s)
                if (!std::isdigit(static_cast<unsigned char>(c))) return false;
            return true;
        };
        if (!is_int(num) || !is_int(den)) bad_number(text);
        mpz_class p(std::string(num.front() == '+' ? num.substr(1) : num), 10);
        mpz_class q(std::string(den.front() == '+' ? den.substr(1) : den), 10);
        if (q == 0) throw Error(Errc::InvalidInput, "zero denominator in \"" + std::string(text) + "\"");
        Rational r(p, q);
        r.canonicalize();
        return r;
    }
    return parse_decimal(text);
}

Rational scalar_traits<Rational>::parse(std::string_view text) { return parse_rational(text); }

bool scalar_traits<double>::is_zero(double x) { return std::abs(x) <= float_tolerance(); }

double scalar_traits<double>::parse(std::string_view text) { return parse_rational(text).get_d(); }

std::string scalar_traits<double>::format(double x) {
    // Shortest representation that round-trips.
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return ec == std::errc{} ? std::string(buf, ptr) : std::to_string(x);
}

}  // namespace colocal
