#pragma once

#include <random>
#include <vector>

#include "bernop/polynomial.hpp"

namespace testsup {

// mt19937_64 bit stream mapped to [0,1); identical on every platform, unlike
// the standard distributions.
inline double u01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return lo + (hi - lo) * u01(g);
}

/// Random polynomial about `base` with coefficients in [-1,1].
inline bernop::Polynomial<double> random_poly(std::mt19937_64& g, int degree, double base = 0.0) {
    std::vector<double> c(static_cast<std::size_t>(degree) + 1);
    for (auto& v : c)
        v = uniform(g, -1.0, 1.0);
    if (c.back() == 0.0)
        c.back() = 0.5;
    return bernop::Polynomial<double>(base, std::move(c));
}

/// Strictly increasing polynomial: integral of q(x)^2 + c with c > 0, so the
/// derivative is positive on all of [a,b].
inline bernop::Polynomial<double> random_increasing_poly(std::mt19937_64& g, int half_degree,
                                                         double a, double c) {
    bernop::Polynomial<double> q = random_poly(g, half_degree, a);
    bernop::Polynomial<double> d = q * q + bernop::Polynomial<double>::constant(c, a);
    // integrate termwise about a
    std::vector<double> ic(d.coeffs().size() + 1, 0.0);
    for (std::size_t l = 0; l < d.coeffs().size(); ++l)
        ic[l + 1] = d.coeffs()[l] / static_cast<double>(l + 1);
    return bernop::Polynomial<double>(a, std::move(ic));
}

} // namespace testsup
