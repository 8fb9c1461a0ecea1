#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "errors.hpp"
#include "interval.hpp"
#include "scalar.hpp"

namespace bernop {

/// Named test functions for convergence studies, parameterized by the working
/// interval. Accepted names:
///   identity        x
///   e<j>            x^j (e0, e1, e2, ...)
///   abs[:c]         |x - c|, c defaults to the midpoint
///   hat[:c]         piecewise linear, 0 at the endpoints and 1 at c
///   sqrt            sqrt(x - a)
///   const:<v>       the constant v
/// Centers and values may be decimals or fractions.
inline std::function<double(double)> builtin_function(const std::string& name,
                                                      const Interval<double>& iv) {
    std::string head = name, arg;
    if (auto colon = name.find(':'); colon != std::string::npos) {
        head = name.substr(0, colon);
        arg = name.substr(colon + 1);
    }
    auto center = [&](double fallback) {
        return arg.empty() ? fallback : to_double(parse_rational(arg));
    };

    if (head == "identity" && arg.empty())
        return [](double x) { return x; };
    if (head.size() > 1 && head[0] == 'e' &&
        head.find_first_not_of("0123456789", 1) == std::string::npos && arg.empty()) {
        int j = std::stoi(head.substr(1));
        return [j](double x) {
            double r = 1.0;
            for (int i = 0; i < j; ++i)
                r *= x;
            return r;
        };
    }
    if (head == "abs") {
        double c = center(0.5 * (iv.a + iv.b));
        return [c](double x) { return std::fabs(x - c); };
    }
    if (head == "hat") {
        double c = center(0.5 * (iv.a + iv.b));
        if (!(iv.a < c && c < iv.b))
            throw ParseError("builtin_function: hat center must be inside the interval");
        double a = iv.a, b = iv.b;
        return [a, b, c](double x) { return x <= c ? (x - a) / (c - a) : (b - x) / (b - c); };
    }
    if (head == "sqrt" && arg.empty()) {
        double a = iv.a;
        return [a](double x) { return std::sqrt(std::max(0.0, x - a)); };
    }
    if (head == "const" && !arg.empty()) {
        double v = to_double(parse_rational(arg));
        return [v](double) { return v; };
    }
    throw ParseError("builtin_function: unknown function '" + name + "'");
}

} // namespace bernop
