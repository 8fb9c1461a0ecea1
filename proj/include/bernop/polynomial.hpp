#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "interval.hpp"
#include "scalar.hpp"

namespace bernop {

namespace detail {

/// Relative magnitude below which a trailing coefficient is treated as zero.
inline constexpr double kTrimRelTol = 1e-12;

template <class T>
double max_abs(const std::vector<T>& c) {
    double m = 0.0;
    for (const auto& v : c)
        m = std::max(m, std::fabs(to_double(v)));
    return m;
}

template <class T>
bool is_zero_coeff(const T& c, double ref) {
    if constexpr (is_exact_v<T>)
        return c == 0;
    else
        return std::fabs(to_double(c)) <= kTrimRelTol * ref;
}

template <class T>
void trim_coeffs(std::vector<T>& c) {
    if (c.empty()) {
        c.assign(1, T(0));
        return;
    }
    double ref = max_abs(c);
    while (c.size() > 1 && is_zero_coeff(c.back(), ref))
        c.pop_back();
    if (c.size() == 1 && is_zero_coeff(c.front(), ref))
        c.front() = T(0);
}

} // namespace detail

/// Real polynomial stored as coefficients about a chosen base point:
/// p(x) = sum_l coeffs[l] * (x - base)^l. The zero polynomial is {0} with degree 0.
template <class T>
class Polynomial {
public:
    Polynomial() : base_(T(0)), coeffs_{T(0)} {}

    Polynomial(T base, std::vector<T> coeffs) : base_(std::move(base)), coeffs_(std::move(coeffs)) {
        detail::trim_coeffs(coeffs_);
    }

    static Polynomial identity(const T& base) { return Polynomial(base, {base, T(1)}); }

    static Polynomial constant(const T& value, const T& base = T(0)) {
        return Polynomial(base, {value});
    }

    const T& base() const { return base_; }
    const std::vector<T>& coeffs() const { return coeffs_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == T(0); }

    /// Coefficient of (x - base)^l; zero beyond the stored degree.
    T coeff(int l) const {
        if (l < 0 || l >= static_cast<int>(coeffs_.size()))
            return T(0);
        return coeffs_[static_cast<std::size_t>(l)];
    }

    /// Horner evaluation in the shifted variable u = x - base.
    T evaluate(const T& x) const {
        T u = x - base_;
        T r = coeffs_.back();
        for (std::size_t i = coeffs_.size() - 1; i-- > 0;)
            r = r * u + coeffs_[i];
        return r;
    }

    Polynomial derivative() const {
        if (coeffs_.size() == 1)
            return Polynomial(base_, {T(0)});
        std::vector<T> d(coeffs_.size() - 1);
        for (std::size_t l = 1; l < coeffs_.size(); ++l)
            d[l - 1] = T(static_cast<long long>(l)) * coeffs_[l];
        return Polynomial(base_, std::move(d));
    }

    /// Taylor shift: same function re-expanded about new_base (in-place synthetic division).
    Polynomial rebase(const T& new_base) const {
        if (new_base == base_)
            return *this;
        T d = new_base - base_;
        std::vector<T> c = coeffs_;
        std::size_t m = c.size() - 1;
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t i = m - 1; i + 1 > j; --i)
                c[i] += d * c[i + 1];
        return Polynomial(new_base, std::move(c));
    }

    bool operator==(const Polynomial& o) const { return base_ == o.base_ && coeffs_ == o.coeffs_; }

    Polynomial operator-() const {
        std::vector<T> c = coeffs_;
        for (auto& v : c)
            v = -v;
        return Polynomial(base_, std::move(c));
    }

    friend Polynomial operator+(const Polynomial& p, const Polynomial& q) {
        Polynomial qr = q.rebase(p.base_);
        std::vector<T> c(std::max(p.coeffs_.size(), qr.coeffs_.size()), T(0));
        for (std::size_t i = 0; i < p.coeffs_.size(); ++i)
            c[i] += p.coeffs_[i];
        for (std::size_t i = 0; i < qr.coeffs_.size(); ++i)
            c[i] += qr.coeffs_[i];
        return Polynomial(p.base_, std::move(c));
    }

    friend Polynomial operator-(const Polynomial& p, const Polynomial& q) { return p + (-q); }

    friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
        Polynomial qr = q.rebase(p.base_);
        std::vector<T> c(p.coeffs_.size() + qr.coeffs_.size() - 1, T(0));
        for (std::size_t i = 0; i < p.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < qr.coeffs_.size(); ++j)
                c[i + j] += p.coeffs_[i] * qr.coeffs_[j];
        return Polynomial(p.base_, std::move(c));
    }

    friend Polynomial operator*(const T& s, const Polynomial& p) {
        std::vector<T> c = p.coeffs_;
        for (auto& v : c)
            v = s * v;
        return Polynomial(p.base_, std::move(c));
    }

private:
    T base_;
    std::vector<T> coeffs_;
};

inline Polynomial<double> to_double(const Polynomial<Rational>& p) {
    std::vector<double> c(p.coeffs().size());
    for (std::size_t i = 0; i < c.size(); ++i)
        c[i] = to_double(p.coeffs()[i]);
    return Polynomial<double>(to_double(p.base()), std::move(c));
}

inline const Polynomial<double>& to_double(const Polynomial<double>& p) { return p; }

namespace detail {

// Raw coefficient vectors (ascending powers, shared base) used by gcd machinery.
// A vector is "zero" when empty or all entries below tolerance.

template <class T>
int raw_degree(const std::vector<T>& c, double ztol) {
    for (std::size_t i = c.size(); i-- > 0;) {
        if constexpr (is_exact_v<T>) {
            if (c[i] != 0)
                return static_cast<int>(i);
        } else {
            if (std::fabs(to_double(c[i])) > ztol)
                return static_cast<int>(i);
        }
    }
    return -1;
}

template <class T>
void raw_normalize(std::vector<T>& c, double ztol) {
    int d = raw_degree(c, ztol);
    if (d < 0) {
        c.clear();
        return;
    }
    c.resize(static_cast<std::size_t>(d) + 1);
    if constexpr (is_exact_v<T>) {
        T lead = c.back();
        for (auto& v : c)
            v /= lead;
    } else {
        double m = max_abs(c);
        for (auto& v : c)
            v = v / T(m);
    }
}

/// Remainder of a by b (b nonzero, trimmed), standard descending long division.
template <class T>
std::vector<T> raw_mod(std::vector<T> a, const std::vector<T>& b) {
    if (a.size() < b.size())
        return a;
    const T lead = b.back();
    for (std::size_t k = a.size(); k >= b.size(); --k) {
        std::size_t i = k - 1;
        T f = a[i] / lead;
        std::size_t off = i + 1 - b.size();
        for (std::size_t j = 0; j + 1 < b.size(); ++j)
            a[off + j] -= f * b[j];
        a[i] = T(0);
    }
    a.resize(b.size() - 1);
    if (a.empty())
        a.assign(1, T(0));
    return a;
}

/// Quotient of a by b (used where the division is exact up to noise).
template <class T>
std::vector<T> raw_div(std::vector<T> a, const std::vector<T>& b) {
    if (a.size() < b.size())
        return {T(0)};
    std::vector<T> q(a.size() - b.size() + 1, T(0));
    const T lead = b.back();
    for (std::size_t k = a.size(); k >= b.size(); --k) {
        std::size_t i = k - 1;
        T f = a[i] / lead;
        std::size_t off = i + 1 - b.size();
        q[off] = f;
        for (std::size_t j = 0; j + 1 < b.size(); ++j)
            a[off + j] -= f * b[j];
        a[i] = T(0);
    }
    return q;
}

template <class T>
std::vector<T> raw_sub(std::vector<T> a, const std::vector<T>& b) {
    if (a.size() < b.size())
        a.resize(b.size(), T(0));
    for (std::size_t i = 0; i < b.size(); ++i)
        a[i] -= b[i];
    return a;
}

template <class T>
std::vector<T> raw_derivative(const std::vector<T>& c) {
    if (c.size() <= 1)
        return {T(0)};
    std::vector<T> d(c.size() - 1);
    for (std::size_t l = 1; l < c.size(); ++l)
        d[l - 1] = T(static_cast<long long>(l)) * c[l];
    return d;
}

/// GCD with coefficient tolerance; exact in rational arithmetic. Result is
/// normalized (monic for rationals, unit max-norm for doubles) and only its
/// root structure is meaningful.
template <class T>
std::vector<T> raw_gcd(std::vector<T> a, std::vector<T> b, double tol) {
    raw_normalize(a, tol);
    raw_normalize(b, tol);
    if (a.empty())
        return b;
    if (b.empty())
        return a;
    if (a.size() < b.size())
        std::swap(a, b);
    while (true) {
        std::vector<T> r = raw_mod(a, b);
        if (raw_degree(r, tol) < 0)
            return b;
        raw_normalize(r, tol);
        a = std::move(b);
        b = std::move(r);
        if (b.size() == 1) // nonzero constant: coprime
            return {T(1)};
    }
}

} // namespace detail

/// Square-free decomposition (Yun): returns factors u_i with multiplicities i such
/// that p = const * prod u_i^i over the distinct-multiplicity parts. Coefficient
/// tolerance applies in floating point; rational arithmetic is exact.
template <class T>
std::vector<std::pair<Polynomial<T>, int>> square_free_factors(const Polynomial<T>& p,
                                                               double tol = 1e-10) {
    std::vector<std::pair<Polynomial<T>, int>> out;
    std::vector<T> f = p.coeffs();
    detail::raw_normalize(f, tol);
    if (f.size() <= 1)
        return out; // constants have no factors

    const int max_mult = static_cast<int>(f.size());
    std::vector<T> fp = detail::raw_derivative(f);
    std::vector<T> g = detail::raw_gcd(f, fp, tol);
    if (detail::raw_degree(g, tol) < 1) {
        out.emplace_back(Polynomial<T>(p.base(), f), 1);
        return out;
    }

    // Yun: c_1 = f/g, d_1 = f'/g - c_1'; then a_i = gcd(c_i, d_i),
    // c_{i+1} = c_i/a_i, d_{i+1} = d_i/a_i - c_{i+1}'.
    std::vector<T> c = detail::raw_div(f, g);
    std::vector<T> d = detail::raw_sub(detail::raw_div(fp, g), detail::raw_derivative(c));
    for (int i = 1; i <= max_mult && detail::raw_degree(c, tol) > 0; ++i) {
        bool d_zero = detail::raw_degree(d, tol) < 0;
        std::vector<T> ai = d_zero ? c : detail::raw_gcd(c, d, tol);
        if (detail::raw_degree(ai, tol) > 0) {
            std::vector<T> factor = ai;
            detail::raw_normalize(factor, tol);
            out.emplace_back(Polynomial<T>(p.base(), factor), i);
            c = detail::raw_div(c, ai);
            d = d_zero ? std::vector<T>{T(0)} : detail::raw_div(d, ai);
        }
        d = detail::raw_sub(d, detail::raw_derivative(c));
    }
    return out;
}

/// Result of certify_monotone: where p' is positive and where it vanishes.
struct InteriorZero {
    double location;
    int multiplicity;
};

struct MonotonicityCertificate {
    bool strictly_increasing_on_closed = false; // p' > 0 on all of [a,b]
    bool strictly_increasing_on_open = false;   // p' > 0 on (a,b)
    std::vector<InteriorZero> interior_derivative_zeros;
    int s1 = 0; // zero order of p' at a
    int s2 = 0; // zero order of p' at b
};

namespace detail {

/// Roots of a (square-free) factor strictly inside (a,b), by sign scan + bisection.
inline std::vector<double> interior_roots(const Polynomial<double>& u, double a, double b) {
    const int grid = 4096;
    const double margin = 1e-9 * (b - a);
    std::vector<double> xs(grid + 1), vs(grid + 1);
    double vmax = 0.0;
    for (int i = 0; i <= grid; ++i) {
        xs[i] = a + (b - a) * i / grid;
        vs[i] = u.evaluate(xs[i]);
        vmax = std::max(vmax, std::fabs(vs[i]));
    }
    if (vmax == 0.0)
        return {};
    const double ztol = 1e-12 * vmax;

    std::vector<double> roots;
    for (int i = 0; i <= grid; ++i)
        if (std::fabs(vs[i]) <= ztol)
            roots.push_back(xs[i]);
    for (int i = 0; i < grid; ++i) {
        if (std::fabs(vs[i]) <= ztol || std::fabs(vs[i + 1]) <= ztol)
            continue;
        if ((vs[i] < 0) == (vs[i + 1] < 0))
            continue;
        double lo = xs[i], hi = xs[i + 1];
        double flo = vs[i];
        for (int it = 0; it < 100 && hi - lo > 1e-16 * (b - a); ++it) {
            double mid = 0.5 * (lo + hi);
            double fm = u.evaluate(mid);
            if (fm == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((fm < 0) == (flo < 0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        roots.push_back(0.5 * (lo + hi));
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> dedup;
    for (double r : roots) {
        if (r <= a + margin || r >= b - margin)
            continue;
        if (!dedup.empty() && r - dedup.back() < 1e-9 * (b - a))
            continue;
        dedup.push_back(r);
    }
    return dedup;
}

/// Zero order of q at the point x0 (count of leading zero Taylor coefficients).
template <class T>
int zero_order_at(const Polynomial<T>& q, const T& x0) {
    Polynomial<T> shifted = q.rebase(x0);
    const auto& c = shifted.coeffs();
    double ref = max_abs(c);
    if (ref == 0.0)
        return static_cast<int>(c.size()); // zero polynomial; callers reject earlier
    int order = 0;
    for (const auto& v : c) {
        bool zero;
        if constexpr (is_exact_v<T>)
            zero = (v == 0);
        else
            zero = std::fabs(to_double(v)) <= 1e-10 * ref;
        if (!zero)
            break;
        ++order;
    }
    return order;
}

/// Sign of the first nonzero Taylor coefficient of q at x0 (+1 / -1).
template <class T>
int leading_sign_at(const Polynomial<T>& q, const T& x0, int order) {
    Polynomial<T> shifted = q.rebase(x0);
    T lead = shifted.coeff(order);
    return to_double(lead) >= 0 ? 1 : -1;
}

} // namespace detail

/// Decides whether p is nondecreasing on [a,b] and reports the zero structure of p'.
/// Throws NotIncreasingError when p' is negative somewhere on [a,b].
template <class T>
MonotonicityCertificate certify_monotone(const Polynomial<T>& p, const Interval<T>& iv) {
    if (p.degree() < 1)
        throw std::invalid_argument("certify_monotone: polynomial must be nonconstant");
    Polynomial<T> q = p.derivative().rebase(iv.a);
    if (q.is_zero())
        throw std::invalid_argument("certify_monotone: polynomial must be nonconstant");

    MonotonicityCertificate cert;
    cert.s1 = detail::zero_order_at(q, iv.a);
    cert.s2 = detail::zero_order_at(q, iv.b);

    // Sign of p' just inside each endpoint: the leading Taylor coefficient at a,
    // and at b the leading coefficient times (-1)^{s2} (approach from the left).
    if (detail::leading_sign_at(q, iv.a, cert.s1) < 0)
        throw NotIncreasingError("certify_monotone: derivative negative near left endpoint");
    int right_sign = detail::leading_sign_at(q, iv.b, cert.s2) * (cert.s2 % 2 == 0 ? 1 : -1);
    if (right_sign < 0)
        throw NotIncreasingError("certify_monotone: derivative negative near right endpoint");

    // Interior zeros with multiplicities from the square-free decomposition.
    auto factors = square_free_factors(q);
    const double a = to_double(iv.a), b = to_double(iv.b);
    for (const auto& [factor, mult] : factors) {
        Polynomial<double> fd = to_double(factor);
        for (double r : detail::interior_roots(fd, a, b))
            cert.interior_derivative_zeros.push_back({r, mult});
    }
    std::sort(cert.interior_derivative_zeros.begin(), cert.interior_derivative_zeros.end(),
              [](const InteriorZero& x, const InteriorZero& y) { return x.location < y.location; });

    // An odd-multiplicity interior zero means p' changes sign inside (a,b).
    for (const auto& z : cert.interior_derivative_zeros)
        if (z.multiplicity % 2 != 0)
            throw NotIncreasingError("certify_monotone: derivative changes sign inside the interval");

    // Sign check between consecutive zeros (and on a coarse safety grid).
    Polynomial<double> qd = to_double(q);
    std::vector<double> breaks{a};
    for (const auto& z : cert.interior_derivative_zeros)
        breaks.push_back(z.location);
    breaks.push_back(b);
    double qmax = 0.0;
    std::vector<double> probes;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        probes.push_back(0.5 * (breaks[i] + breaks[i + 1]));
    for (int i = 1; i < 128; ++i)
        probes.push_back(a + (b - a) * i / 128.0);
    std::vector<double> vals(probes.size());
    for (std::size_t i = 0; i < probes.size(); ++i) {
        vals[i] = qd.evaluate(probes[i]);
        qmax = std::max(qmax, std::fabs(vals[i]));
    }
    for (double v : vals)
        if (v < -1e-10 * qmax)
            throw NotIncreasingError("certify_monotone: derivative negative inside the interval");

    cert.strictly_increasing_on_open = cert.interior_derivative_zeros.empty();
    cert.strictly_increasing_on_closed =
        cert.strictly_increasing_on_open && cert.s1 == 0 && cert.s2 == 0;
    return cert;
}

/// Inverse of a certified nondecreasing polynomial: the x in [a,b] with p(x) = y.
/// Bracketing bisection; Newton steps are taken only while they stay inside the
/// current bracket (p' may vanish at the target).
template <class T>
double invert_monotone(const Polynomial<T>& p, const Interval<T>& iv, double y,
                       double tol = 1e-13) {
    Polynomial<double> pd = to_double(p);
    Polynomial<double> dpd = pd.derivative();
    const double a = to_double(iv.a), b = to_double(iv.b);
    const double pa = pd.evaluate(a), pb = pd.evaluate(b);
    // Conversion from exact coefficients can land y an ulp past the Horner
    // endpoint values; absorb that before rejecting.
    const double slack = 1e-12 * std::max({1.0, std::fabs(pa), std::fabs(pb)});
    if (y < pa - slack || y > pb + slack)
        throw OutOfRangeError("invert_monotone: value outside [p(a), p(b)]");
    const double rscale = std::max(1.0, std::fabs(pb - pa));
    if (y <= pa)
        return a;
    if (y >= pb)
        return b;

    double lo = a, hi = b;
    double x = 0.5 * (lo + hi);
    double best_x = x, best_r = std::fabs(pd.evaluate(x) - y);
    for (int it = 0; it < 200; ++it) {
        double f = pd.evaluate(x) - y;
        if (std::fabs(f) < best_r) {
            best_r = std::fabs(f);
            best_x = x;
        }
        if (f == 0.0)
            return x;
        if (f < 0)
            lo = x;
        else
            hi = x;
        if (hi - lo <= tol && best_r <= tol * rscale)
            break;
        double next = 0.5 * (lo + hi);
        double d = dpd.evaluate(x);
        if (d != 0.0) {
            double xn = x - f / d;
            if (xn > lo && xn < hi)
                next = xn;
        }
        x = next;
    }
    return best_x;
}

} // namespace bernop
