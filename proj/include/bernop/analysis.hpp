#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "bernstein.hpp"
#include "errors.hpp"
#include "interval.hpp"
#include "operator.hpp"
#include "polynomial.hpp"
#include "scalar.hpp"

namespace bernop {

/// Best constant in |B_n f - f| <= c * omega(f, n^{-1/2}) for the classical
/// operator on [0,1]: (4306 + 837*sqrt(6))/5832, about 1.08988.
inline double sikkema_constant() { return (4306.0 + 837.0 * std::sqrt(6.0)) / 5832.0; }

namespace detail {

/// Grid supremum of |g| with one Chebyshev-clustered refinement near the maximizer.
/// A lower bound on the true sup norm.
template <class G>
double grid_sup_abs(G&& g, const Interval<double>& iv, int grid_size) {
    if (grid_size < 2)
        throw std::invalid_argument("grid_sup_abs: grid_size must be >= 2");
    const double a = iv.a, b = iv.b;
    const double h = (b - a) / (grid_size - 1);
    double best = 0.0, best_x = a;
    for (int i = 0; i < grid_size; ++i) {
        double x = (i == grid_size - 1) ? b : a + h * i;
        double v = std::fabs(g(x));
        if (v > best) {
            best = v;
            best_x = x;
        }
    }
    const double lo = std::max(a, best_x - h), hi = std::min(b, best_x + h);
    const int refine = 65;
    for (int i = 0; i < refine; ++i) {
        double theta = std::numbers::pi * (2 * i + 1) / (2 * refine);
        double x = 0.5 * (lo + hi) + 0.5 * (hi - lo) * std::cos(theta);
        best = std::max(best, std::fabs(g(x)));
    }
    return best;
}

} // namespace detail

template <class T>
struct CoordinateErrorReport {
    int n;
    std::vector<T> per_k_error; // |g(a + k(b-a)/n) - w_{n,k}|
    T max_error;
    T bound;                    // m^3 * c_max * M / n,  M = max{(b-a)^2, (b-a)^m}
    T c_max;                    // max_{l=2..m} |c_l|
    T endpoint_refined_bound;   // M * c_max * m^2 * (n/(n-m)) / n^2, for k <= m and k >= n-m
};

template <class T>
CoordinateErrorReport<T> coordinate_error_report(const Polynomial<T>& g, int n,
                                                 const Interval<T>& iv) {
    Polynomial<T> q = (g.base() == iv.a) ? g : g.rebase(iv.a);
    const int m = q.degree();
    if (n <= m)
        throw DegreeTooHighError("coordinate_error_report: requires n > degree");
    BernsteinForm<T> w = monomial_to_bernstein(q, n, iv);
    const T len = iv.b - iv.a;

    CoordinateErrorReport<T> rep{n, {}, T(0), T(0), T(0), T(0)};
    rep.per_k_error.resize(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        T xk = iv.a + T(k) * len / T(n);
        T err = abs_value(q.evaluate(xk) - w.coords[static_cast<std::size_t>(k)]);
        rep.per_k_error[static_cast<std::size_t>(k)] = err;
        if (err > rep.max_error)
            rep.max_error = err;
    }

    for (int l = 2; l <= m; ++l) {
        T c = abs_value(q.coeff(l));
        if (c > rep.c_max)
            rep.c_max = c;
    }
    T len_sq = len * len;
    T len_m(1);
    for (int i = 0; i < m; ++i)
        len_m *= len;
    T M = std::max(len_sq, len_m);
    rep.bound = T(static_cast<long long>(m) * m * m) * rep.c_max * M / T(n);
    rep.endpoint_refined_bound =
        M * rep.c_max * T(static_cast<long long>(m) * m) * T(n) / (T(n - m) * T(n) * T(n));
    return rep;
}

struct HolderReport {
    int s;  // 1 + largest zero order of f1' on [a,b]
    int s1; // zero order of f1' at a
    int s2; // zero order of f1' at b
    std::vector<int> interior_orders;
    double predicted_exponent; // 1/s: Holder order of f1^{-1}, node deviation rate n^{-1/s}
};

template <class T>
HolderReport holder_order(const Polynomial<T>& f1, const Interval<T>& iv) {
    MonotonicityCertificate cert = certify_monotone(f1, iv);
    int largest = std::max(cert.s1, cert.s2);
    HolderReport rep{1, cert.s1, cert.s2, {}, 1.0};
    for (const auto& z : cert.interior_derivative_zeros) {
        rep.interior_orders.push_back(z.multiplicity);
        largest = std::max(largest, z.multiplicity);
    }
    rep.s = 1 + largest;
    rep.predicted_exponent = 1.0 / rep.s;
    return rep;
}

struct DeviationReport {
    int n;
    double max_node_deviation;  // max_k |t_{n,k} - (a + k(b-a)/n)|
    double max_consecutive_gap; // max_k |t_{n,k+1} - t_{n,k}|
};

template <class T>
DeviationReport node_deviation_report(const GeneralizedOperator<T>& op) {
    if (op.status != ExistenceStatus::Exists)
        throw OperatorNotDefinedError("node_deviation_report: operator does not exist");
    const double a = to_double(op.iv.a), b = to_double(op.iv.b);
    DeviationReport rep{op.n, 0.0, 0.0};
    for (int k = 0; k <= op.n; ++k) {
        double classical = a + (b - a) * k / op.n;
        rep.max_node_deviation =
            std::max(rep.max_node_deviation, std::fabs(op.nodes[static_cast<std::size_t>(k)] - classical));
        if (k < op.n)
            rep.max_consecutive_gap =
                std::max(rep.max_consecutive_gap,
                         std::fabs(op.nodes[static_cast<std::size_t>(k) + 1] -
                                   op.nodes[static_cast<std::size_t>(k)]));
    }
    return rep;
}

/// Least-squares slope of log(max_node_deviation) against log(n). The smallest
/// quartile of n values is discarded (the rate laws are asymptotic). Returns
/// nothing when a deviation is zero (classical operator: slope undefined).
template <class T>
std::optional<double> rate_fit(const Polynomial<T>& f1, const Interval<T>& iv,
                               std::vector<int> n_grid, double tol = 1e-13) {
    std::sort(n_grid.begin(), n_grid.end());
    std::size_t drop = n_grid.size() / 4;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
        GeneralizedOperator<T> op = build_operator(f1, n_grid[i], iv, tol);
        if (op.status != ExistenceStatus::Exists)
            throw OperatorNotDefinedError("rate_fit: operator does not exist at n = " +
                                          std::to_string(n_grid[i]));
        if (i < drop)
            continue;
        DeviationReport rep = node_deviation_report(op);
        if (rep.max_node_deviation <= 0.0)
            return std::nullopt;
        lx.push_back(std::log(static_cast<double>(n_grid[i])));
        ly.push_back(std::log(rep.max_node_deviation));
    }
    if (lx.size() < 2)
        return std::nullopt;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= lx.size();
    my /= ly.size();
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0)
        return std::nullopt;
    return sxy / sxx;
}

struct ModulusEstimate {
    double delta;
    double omega; // grid sup of |f(x) - f(y)| over |x - y| <= delta
    int grid_size;
};

/// Sliding-window estimate of the modulus of continuity: exact over grid pairs,
/// a lower bound of the true omega. O(grid) via monotone deques.
template <class F>
ModulusEstimate modulus_of_continuity(F&& f, const Interval<double>& iv, double delta,
                                      int grid_size = 4097) {
    if (delta < 0)
        throw std::invalid_argument("modulus_of_continuity: delta must be >= 0");
    if (grid_size < 2)
        throw std::invalid_argument("modulus_of_continuity: grid_size must be >= 2");
    const double h = (iv.b - iv.a) / (grid_size - 1);
    int w = static_cast<int>(std::floor(delta / h + 1e-9));
    w = std::min(w, grid_size - 1);
    ModulusEstimate est{delta, 0.0, grid_size};
    if (w <= 0)
        return est;

    std::vector<double> v(static_cast<std::size_t>(grid_size));
    for (int i = 0; i < grid_size; ++i)
        v[static_cast<std::size_t>(i)] = f(i == grid_size - 1 ? iv.b : iv.a + h * i);

    std::deque<int> maxq, minq;
    for (int i = 0; i < grid_size; ++i) {
        while (!maxq.empty() && v[static_cast<std::size_t>(maxq.back())] <= v[static_cast<std::size_t>(i)])
            maxq.pop_back();
        maxq.push_back(i);
        while (!minq.empty() && v[static_cast<std::size_t>(minq.back())] >= v[static_cast<std::size_t>(i)])
            minq.pop_back();
        minq.push_back(i);
        if (maxq.front() < i - w)
            maxq.pop_front();
        if (minq.front() < i - w)
            minq.pop_front();
        if (i >= w)
            est.omega = std::max(est.omega, v[static_cast<std::size_t>(maxq.front())] -
                                                v[static_cast<std::size_t>(minq.front())]);
    }
    return est;
}

/// Grid sup of |B_n^{f1} f - B_n f|: both operators share the basis row, so the
/// difference is sum_k (f(t_{n,k}) - f(classical_k)) p_{n,k}(x).
template <class T, class F>
double operator_distance(const GeneralizedOperator<T>& op, F&& f, int grid_size = 4097) {
    if (op.status != ExistenceStatus::Exists)
        throw OperatorNotDefinedError("operator_distance: operator does not exist");
    const double a = to_double(op.iv.a), b = to_double(op.iv.b);
    std::vector<double> diff(op.nodes.size());
    for (std::size_t k = 0; k < op.nodes.size(); ++k) {
        double classical = a + (b - a) * static_cast<double>(k) / op.n;
        diff[k] = f(op.nodes[k]) - f(classical);
    }
    Interval<double> ivd(a, b);
    auto g = [&](double x) {
        std::vector<double> row = basis_row(op.n, x, ivd);
        double acc = 0.0;
        for (std::size_t k = 0; k < diff.size(); ++k)
            acc += diff[k] * row[k];
        return acc;
    };
    return detail::grid_sup_abs(g, ivd, grid_size);
}

struct ErrorBudget {
    double sup_error;           // grid sup |B_n^{f1} f - f|
    double classical_sup_error; // grid sup |B_n f - f|
    double budget;              // c * omega(f, (b-a) n^{-1/2}) + omega(f, max_node_deviation)
};

template <class T, class F>
ErrorBudget error_budget(const GeneralizedOperator<T>& op, F&& f, int grid_size = 4097) {
    if (op.status != ExistenceStatus::Exists)
        throw OperatorNotDefinedError("error_budget: operator does not exist");
    const double a = to_double(op.iv.a), b = to_double(op.iv.b);
    Interval<double> ivd(a, b);

    std::vector<double> samples(op.nodes.size()), classical_samples(op.nodes.size());
    for (std::size_t k = 0; k < op.nodes.size(); ++k) {
        samples[k] = (k > 0 && op.nodes[k] == op.nodes[k - 1]) ? samples[k - 1] : f(op.nodes[k]);
        classical_samples[k] = f(a + (b - a) * static_cast<double>(k) / op.n);
    }
    auto err = [&](const std::vector<double>& s) {
        return [&, s](double x) {
            std::vector<double> row = basis_row(op.n, x, ivd);
            double acc = 0.0;
            for (std::size_t k = 0; k < s.size(); ++k)
                acc += s[k] * row[k];
            return acc - f(x);
        };
    };
    ErrorBudget out{};
    out.sup_error = detail::grid_sup_abs(err(samples), ivd, grid_size);
    out.classical_sup_error = detail::grid_sup_abs(err(classical_samples), ivd, grid_size);

    double dev = node_deviation_report(op).max_node_deviation;
    double omega_half =
        modulus_of_continuity(f, ivd, (b - a) / std::sqrt(static_cast<double>(op.n)), grid_size)
            .omega;
    double omega_dev = modulus_of_continuity(f, ivd, dev, grid_size).omega;
    out.budget = sikkema_constant() * omega_half + omega_dev;
    return out;
}

struct ConvexityWitness {
    double x0, x1, x2; // strictly ordered triple inside [a,b]
    double det_value;
};

/// Determinant of rows (f0, f1, f) sampled at the strictly increasing triple.
/// Nonnegativity for all triples is (f0, f1)-convexity of f.
template <class F0, class F1, class F>
double convexity_determinant(F0&& f0, F1&& f1, F&& f, double x0, double x1, double x2) {
    if (!(x0 < x1 && x1 < x2))
        throw NotOrderedError("convexity_determinant: requires x0 < x1 < x2");
    double a1 = f0(x0), a2 = f0(x1), a3 = f0(x2);
    double b1 = f1(x0), b2 = f1(x1), b3 = f1(x2);
    double c1 = f(x0), c2 = f(x1), c3 = f(x2);
    return a1 * (b2 * c3 - b3 * c2) - a2 * (b1 * c3 - b3 * c1) + a3 * (b1 * c2 - b2 * c1);
}

/// Scans all ordered grid triples for a negative determinant; returns the most
/// negative one, or nothing when every determinant is >= -1e-12 * scale.
template <class F0, class F1, class F>
std::optional<ConvexityWitness> convexity_scan(F0&& f0, F1&& f1, F&& f,
                                               const Interval<double>& iv, int grid_size) {
    if (grid_size < 3)
        throw std::invalid_argument("convexity_scan: grid_size must be >= 3");
    const double h = (iv.b - iv.a) / (grid_size - 1);
    std::vector<double> xs(static_cast<std::size_t>(grid_size));
    std::vector<double> v0(xs.size()), v1(xs.size()), vf(xs.size());
    double m0 = 0, m1 = 0, mf = 0;
    for (int i = 0; i < grid_size; ++i) {
        double x = (i == grid_size - 1) ? iv.b : iv.a + h * i;
        xs[static_cast<std::size_t>(i)] = x;
        v0[static_cast<std::size_t>(i)] = f0(x);
        v1[static_cast<std::size_t>(i)] = f1(x);
        vf[static_cast<std::size_t>(i)] = f(x);
        m0 = std::max(m0, std::fabs(v0[static_cast<std::size_t>(i)]));
        m1 = std::max(m1, std::fabs(v1[static_cast<std::size_t>(i)]));
        mf = std::max(mf, std::fabs(vf[static_cast<std::size_t>(i)]));
    }
    const double scale = std::max(1.0, m0) * std::max(1.0, m1) * std::max(1.0, mf);
    const double threshold = -1e-12 * scale;

    double best = 0.0;
    int bi = -1, bj = -1, bk = -1;
    const int g = grid_size;
    for (int i = 0; i < g; ++i) {
        for (int j = i + 1; j < g; ++j) {
            // Cofactors of the third column for the triple (i, j, k).
            double c13 = v1[i] * vf[j] - v1[j] * vf[i];
            double c23 = v0[i] * vf[j] - v0[j] * vf[i];
            double c33 = v0[i] * v1[j] - v0[j] * v1[i];
            for (int k = j + 1; k < g; ++k) {
                double det = v0[k] * c13 - v1[k] * c23 + vf[k] * c33;
                if (det < best) {
                    best = det;
                    bi = i;
                    bj = j;
                    bk = k;
                }
            }
        }
    }
    if (bi < 0 || best >= threshold)
        return std::nullopt;
    return ConvexityWitness{xs[static_cast<std::size_t>(bi)], xs[static_cast<std::size_t>(bj)],
                            xs[static_cast<std::size_t>(bk)], best};
}

} // namespace bernop
