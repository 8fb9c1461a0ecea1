#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "errors.hpp"
#include "interval.hpp"
#include "polynomial.hpp"
#include "scalar.hpp"

namespace bernop {

/// A function written in the Bernstein basis of dimension n+1 on [a,b]:
/// x -> sum_k coords[k] * p_{n,k}(x).
template <class T>
struct BernsteinForm {
    int n;
    Interval<T> iv;
    std::vector<T> coords;

    BernsteinForm(int n_, Interval<T> iv_, std::vector<T> coords_)
        : n(n_), iv(std::move(iv_)), coords(std::move(coords_)) {
        if (n < 0)
            throw std::invalid_argument("BernsteinForm: n must be >= 0");
        if (coords.size() != static_cast<std::size_t>(n) + 1)
            throw std::invalid_argument("BernsteinForm: coords must have n+1 entries");
    }
};

inline BernsteinForm<double> to_double(const BernsteinForm<Rational>& f) {
    std::vector<double> c(f.coords.size());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = to_double(f.coords[i]);
    return BernsteinForm<double>(f.n, to_double(f.iv), std::move(c));
}

inline const BernsteinForm<double>& to_double(const BernsteinForm<double>& f) { return f; }

namespace detail {

// Binomial coefficients overflow double at C(1030, 515); beyond that basis_eval
// works in log space.
inline constexpr int kLogSpaceThreshold = 1029;

inline double basis_eval_product(int n, int k, double u, double v) {
    double r = 1.0;
    int vleft = n - k;
    for (int i = 1; i <= k; ++i) {
        r *= u * (static_cast<double>(n - k + i) / static_cast<double>(i));
        while (r > 1.0 && vleft > 0) {
            r *= v;
            --vleft;
        }
    }
    while (vleft > 0) {
        r *= v;
        --vleft;
    }
    return r;
}

inline double basis_eval_log(int n, int k, double u, double v) {
    double lg = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    lg += k * std::log(u) + (n - k) * std::log(v);
    return lg < -745.0 ? 0.0 : std::exp(lg);
}

} // namespace detail

/// p_{n,k}(x) = C(n,k)(x-a)^k(b-x)^{n-k}/(b-a)^n.
template <class T>
T basis_eval(int n, int k, const T& x, const Interval<T>& iv) {
    if (n < 0)
        throw std::invalid_argument("basis_eval: n must be >= 0");
    if (k < 0 || k > n)
        throw IndexOutOfRangeError("basis_eval: k outside [0, n]");
    if (x == iv.a)
        return k == 0 ? T(1) : T(0);
    if (x == iv.b)
        return k == n ? T(1) : T(0);
    T len = iv.b - iv.a;
    T u = (x - iv.a) / len;
    T v = (iv.b - x) / len;
    if constexpr (is_exact_v<T>) {
        T c(1);
        for (int i = 1; i <= k; ++i)
            c *= T(n - k + i) / T(i);
        T uk(1), vnk(1);
        for (int i = 0; i < k; ++i)
            uk *= u;
        for (int i = 0; i < n - k; ++i)
            vnk *= v;
        return c * uk * vnk;
    } else {
        if (n <= detail::kLogSpaceThreshold)
            return detail::basis_eval_product(n, k, u, v);
        return detail::basis_eval_log(n, k, u, v);
    }
}

/// All n+1 basis values at one point in O(n): anchored at the modal index and
/// swept outward by the exact neighbour ratio p_{n,k+1}/p_{n,k} = ((n-k)/(k+1))(u/v).
template <class T>
std::vector<T> basis_row(int n, const T& x, const Interval<T>& iv) {
    if (n < 0)
        throw std::invalid_argument("basis_row: n must be >= 0");
    std::vector<T> row(static_cast<std::size_t>(n) + 1, T(0));
    if (x == iv.a) {
        row[0] = T(1);
        return row;
    }
    if (x == iv.b) {
        row[static_cast<std::size_t>(n)] = T(1);
        return row;
    }
    T len = iv.b - iv.a;
    T u = (x - iv.a) / len;
    T v = (iv.b - x) / len;
    if constexpr (is_exact_v<T>) {
        T p(1);
        for (int i = 0; i < n; ++i)
            p *= v;
        row[0] = p;
        T ratio = u / v;
        for (int k = 0; k < n; ++k)
            row[k + 1] = row[k] * ratio * T(n - k) / T(k + 1);
        return row;
    } else {
        double ud = u, vd = v;
        int kstar = static_cast<int>(std::llround(n * ud));
        kstar = std::max(0, std::min(n, kstar));
        row[kstar] = detail::basis_eval_log(n, kstar, ud, vd);
        double up = ud / vd, down = vd / ud;
        for (int k = kstar; k < n; ++k)
            row[k + 1] = row[k] * up * (static_cast<double>(n - k) / static_cast<double>(k + 1));
        for (int k = kstar; k > 0; --k)
            row[k - 1] = row[k] * down * (static_cast<double>(k) / static_cast<double>(n - k + 1));
        return row;
    }
}

/// de Casteljau evaluation of a Bernstein form (stable convex combinations).
template <class T>
T form_eval(const BernsteinForm<T>& f, const T& x) {
    T len = f.iv.b - f.iv.a;
    T u = (x - f.iv.a) / len;
    T v = (f.iv.b - x) / len;
    std::vector<T> tri = f.coords;
    for (int r = 1; r <= f.n; ++r)
        for (int j = 0; j <= f.n - r; ++j)
            tri[j] = v * tri[j] + u * tri[j + 1];
    return tri[0];
}

/// Bernstein coordinates of a polynomial: for p(x) = sum_l c_l (x-a)^l,
/// coords_k = sum_{l<=min(k,m)} c_l * prod_{i<l} (k-i)/(n-i) * (b-a)^l.
/// The factorial ratio is built incrementally; factorials are never formed.
template <class T>
BernsteinForm<T> monomial_to_bernstein(const Polynomial<T>& p, int n, const Interval<T>& iv) {
    Polynomial<T> q = (p.base() == iv.a) ? p : p.rebase(iv.a);
    const int m = q.degree();
    if (n < m)
        throw DegreeTooHighError("monomial_to_bernstein: n smaller than polynomial degree");
    const T len = iv.b - iv.a;
    const auto& c = q.coeffs();
    std::vector<T> coords(static_cast<std::size_t>(n) + 1, T(0));
    for (int k = 0; k <= n; ++k) {
        int lim = std::min(k, m);
        T acc(0), ratio(1), pw(1);
        for (int l = 0; l <= lim; ++l) {
            acc += c[static_cast<std::size_t>(l)] * ratio * pw;
            if (l < lim) {
                ratio *= T(k - l) / T(n - l);
                pw *= len;
            }
        }
        coords[static_cast<std::size_t>(k)] = acc;
    }
    return BernsteinForm<T>(n, iv, std::move(coords));
}

/// Coordinates of the derivative: w_{k} = (n/(b-a)) (gamma_{k+1} - gamma_k),
/// an (n-1)-form representing d/dx of the function represented by f.
template <class T>
BernsteinForm<T> derivative_coordinates(const BernsteinForm<T>& f) {
    if (f.n < 1)
        throw std::invalid_argument("derivative_coordinates: requires n >= 1");
    T scale = T(f.n) / (f.iv.b - f.iv.a);
    std::vector<T> w(static_cast<std::size_t>(f.n));
    for (int k = 0; k < f.n; ++k)
        w[static_cast<std::size_t>(k)] =
            scale * (f.coords[static_cast<std::size_t>(k) + 1] - f.coords[static_cast<std::size_t>(k)]);
    return BernsteinForm<T>(f.n - 1, f.iv, std::move(w));
}

/// Same function one degree up: each new coordinate is the convex combination
/// (k/(n+1)) coords_{k-1} + (1 - k/(n+1)) coords_k.
template <class T>
BernsteinForm<T> degree_elevate(const BernsteinForm<T>& f) {
    const int m = f.n + 1;
    std::vector<T> out(static_cast<std::size_t>(m) + 1);
    out[0] = f.coords[0];
    out[static_cast<std::size_t>(m)] = f.coords[static_cast<std::size_t>(f.n)];
    for (int k = 1; k <= f.n; ++k)
        out[static_cast<std::size_t>(k)] =
            (T(k) / T(m)) * f.coords[static_cast<std::size_t>(k) - 1] +
            (T(m - k) / T(m)) * f.coords[static_cast<std::size_t>(k)];
    return BernsteinForm<T>(m, f.iv, std::move(out));
}

} // namespace bernop
