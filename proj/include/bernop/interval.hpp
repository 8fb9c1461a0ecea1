#pragma once

#include <stdexcept>

#include "scalar.hpp"

namespace bernop {

/// Closed interval [a, b] with a < b.
template <class T>
struct Interval {
    T a;
    T b;

    Interval(T a_, T b_) : a(std::move(a_)), b(std::move(b_)) {
        if (!(a < b))
            throw std::invalid_argument("Interval: requires a < b");
    }

    T length() const { return b - a; }

    bool contains(const T& x) const { return a <= x && x <= b; }
};

inline Interval<double> to_double(const Interval<Rational>& iv) {
    return Interval<double>(to_double(iv.a), to_double(iv.b));
}

inline const Interval<double>& to_double(const Interval<double>& iv) { return iv; }

} // namespace bernop
