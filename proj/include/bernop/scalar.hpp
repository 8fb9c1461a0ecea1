#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <sstream>
#include <string>
#include <type_traits>

#include "errors.hpp"

namespace bernop {

/// Exact rational scalar used by the rational backend.
using Rational = boost::multiprecision::cpp_rational;

template <class T>
inline constexpr bool is_exact_v = false;

template <>
inline constexpr bool is_exact_v<Rational> = true;

inline double to_double(double x) { return x; }

inline double to_double(const Rational& x) { return x.template convert_to<double>(); }

/// Renders a rational as "num/den" ("num" when the denominator is 1).
inline std::string to_string(const Rational& x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

/// Parses "num/den", "num", or a plain decimal like "-0.125" exactly.
inline Rational parse_rational(const std::string& text) {
    std::string s = text;
    // strip surrounding whitespace
    auto first = s.find_first_not_of(" \t");
    auto last = s.find_last_not_of(" \t");
    if (first == std::string::npos)
        throw ParseError("parse_rational: empty string");
    s = s.substr(first, last - first + 1);

    if (s.find('/') != std::string::npos) {
        try {
            return Rational(s);
        } catch (const std::exception&) {
            throw ParseError("parse_rational: bad fraction '" + text + "'");
        }
    }

    bool negative = false;
    std::size_t pos = 0;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        negative = (s[pos] == '-');
        ++pos;
    }
    std::string digits;
    std::size_t frac_digits = 0;
    bool seen_dot = false, seen_digit = false;
    for (; pos < s.size(); ++pos) {
        char c = s[pos];
        if (c == '.') {
            if (seen_dot)
                throw ParseError("parse_rational: bad number '" + text + "'");
            seen_dot = true;
        } else if (c >= '0' && c <= '9') {
            digits.push_back(c);
            seen_digit = true;
            if (seen_dot)
                ++frac_digits;
        } else {
            throw ParseError("parse_rational: bad number '" + text + "'");
        }
    }
    if (!seen_digit)
        throw ParseError("parse_rational: bad number '" + text + "'");

    // cpp_int treats a leading zero as an octal prefix; trim to decimal.
    digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
    boost::multiprecision::cpp_int num(digits);
    boost::multiprecision::cpp_int den = 1;
    for (std::size_t i = 0; i < frac_digits; ++i)
        den *= 10;
    Rational r(num, den);
    return negative ? -r : r;
}

/// scalar_from_string<T>: uniform conversion used by parsers and JSON loaders.
template <class T>
T scalar_from_string(const std::string& s);

template <>
inline double scalar_from_string<double>(const std::string& s) {
    try {
        std::size_t used = 0;
        if (s.find('/') != std::string::npos)
            return to_double(parse_rational(s));
        double v = std::stod(s, &used);
        if (used != s.size())
            throw ParseError("scalar_from_string: trailing characters in '" + s + "'");
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("scalar_from_string: bad number '" + s + "'");
    }
}

template <>
inline Rational scalar_from_string<Rational>(const std::string& s) {
    return parse_rational(s);
}

inline double abs_value(double x) { return x < 0 ? -x : x; }
inline Rational abs_value(const Rational& x) { return x < 0 ? Rational(-x) : x; }

} // namespace bernop
