#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "bernstein.hpp"
#include "errors.hpp"
#include "interval.hpp"
#include "polynomial.hpp"
#include "scalar.hpp"

namespace bernop {

enum class ExistenceStatus { Exists, NotDefined };

/// B_n^{f1} f(x) = sum_k f(t_{n,k}) p_{n,k}(x), with nodes t_{n,k} = f1^{-1}(gamma_{n,k})
/// chosen so that 1 and f1 are reproduced. Nodes are stored in double precision
/// regardless of the coordinate scalar (they are irrational in general).
template <class T>
struct GeneralizedOperator {
    Polynomial<T> f1;
    Interval<T> iv;
    int n;
    BernsteinForm<T> gamma;       // Bernstein coordinates of f1
    std::vector<double> nodes;    // n+1 nodes when status == Exists, else empty
    std::vector<double> weights;  // identically 1 in the normalized basis
    ExistenceStatus status;
    std::vector<int> offending_indices; // k with gamma_k outside [f1(a), f1(b)]
    double tol;                   // node inversion tolerance
};

namespace detail {

// Existence tolerance relative to |f1(b) - f1(a)| (exact comparison in rational mode).
inline constexpr double kExistenceRelTol = 1e-13;

} // namespace detail

template <class T>
GeneralizedOperator<T> build_operator(const Polynomial<T>& f1, int n, const Interval<T>& iv,
                                      double tol = 1e-13) {
    certify_monotone(f1, iv);
    BernsteinForm<T> gamma = monomial_to_bernstein(f1, n, iv);

    const T lo = f1.evaluate(iv.a);
    const T hi = f1.evaluate(iv.b);
    std::vector<int> offending;
    if constexpr (is_exact_v<T>) {
        for (int k = 0; k <= n; ++k) {
            const T& g = gamma.coords[static_cast<std::size_t>(k)];
            if (g < lo || g > hi)
                offending.push_back(k);
        }
    } else {
        const double etol = detail::kExistenceRelTol * std::fabs(to_double(hi) - to_double(lo));
        for (int k = 0; k <= n; ++k) {
            double g = to_double(gamma.coords[static_cast<std::size_t>(k)]);
            if (g < to_double(lo) - etol || g > to_double(hi) + etol)
                offending.push_back(k);
        }
    }

    GeneralizedOperator<T> op{f1,
                              iv,
                              n,
                              std::move(gamma),
                              {},
                              std::vector<double>(static_cast<std::size_t>(n) + 1, 1.0),
                              ExistenceStatus::Exists,
                              std::move(offending),
                              tol};
    if (!op.offending_indices.empty()) {
        op.status = ExistenceStatus::NotDefined;
        return op;
    }

    const double lod = to_double(lo), hid = to_double(hi);
    op.nodes.resize(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) {
        double g = to_double(op.gamma.coords[static_cast<std::size_t>(k)]);
        g = std::min(std::max(g, lod), hid);
        if (k > 0 && g == to_double(op.gamma.coords[static_cast<std::size_t>(k) - 1])) {
            op.nodes[static_cast<std::size_t>(k)] = op.nodes[static_cast<std::size_t>(k) - 1];
            continue;
        }
        op.nodes[static_cast<std::size_t>(k)] = invert_monotone(f1, iv, g, tol);
    }
    return op;
}

/// The f1 = x case: equispaced nodes, no inversion.
template <class T = double>
GeneralizedOperator<T> classical_operator(int n, const Interval<T>& iv) {
    if (n < 1)
        throw std::invalid_argument("classical_operator: requires n >= 1");
    Polynomial<T> id = Polynomial<T>::identity(iv.a);
    BernsteinForm<T> gamma = monomial_to_bernstein(id, n, iv);
    std::vector<double> nodes(static_cast<std::size_t>(n) + 1);
    const double a = to_double(iv.a), b = to_double(iv.b);
    for (int k = 0; k <= n; ++k)
        nodes[static_cast<std::size_t>(k)] = k == n ? b : a + (b - a) * k / n;
    return GeneralizedOperator<T>{std::move(id),
                                  iv,
                                  n,
                                  std::move(gamma),
                                  std::move(nodes),
                                  std::vector<double>(static_cast<std::size_t>(n) + 1, 1.0),
                                  ExistenceStatus::Exists,
                                  {},
                                  0.0};
}

/// Samples f at the nodes, reusing endpoint-plateau evaluations, and sums
/// against the basis row at x.
template <class T, class F>
double evaluate_operator(const GeneralizedOperator<T>& op, F&& f, double x) {
    if (op.status != ExistenceStatus::Exists)
        throw OperatorNotDefinedError("evaluate_operator: operator does not exist at this n");
    const double a = to_double(op.iv.a), b = to_double(op.iv.b);
    if (x < a - 1e-12 * (b - a) || x > b + 1e-12 * (b - a))
        throw std::invalid_argument("evaluate_operator: x outside [a, b]");
    x = std::min(std::max(x, a), b);

    std::vector<double> samples(op.nodes.size());
    for (std::size_t k = 0; k < op.nodes.size(); ++k) {
        if (k > 0 && op.nodes[k] == op.nodes[k - 1])
            samples[k] = samples[k - 1];
        else
            samples[k] = f(op.nodes[k]);
    }
    std::vector<double> row = basis_row(op.n, x, Interval<double>(a, b));
    double acc = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k)
        acc += samples[k] * row[k];
    return acc;
}

enum class NodeOrdering { StrictlyIncreasing, NonDecreasing, HasReversals };

struct OrderingReport {
    NodeOrdering classification;
    std::vector<int> reversal_indices; // k with t_{n,k+1} < t_{n,k}
    int leading_plateau;               // count of initial nodes equal to a
    int trailing_plateau;              // count of final nodes equal to b
};

namespace detail {

// Consecutive nodes closer than this (relative to b-a) count as a tie, not a reversal.
inline constexpr double kNodeTieRelTol = 1e-11;

} // namespace detail

template <class T>
OrderingReport node_ordering(const GeneralizedOperator<T>& op) {
    if (op.status != ExistenceStatus::Exists)
        throw OperatorNotDefinedError("node_ordering: operator does not exist at this n");
    const double a = to_double(op.iv.a), b = to_double(op.iv.b);
    const double tie = detail::kNodeTieRelTol * (b - a);

    OrderingReport rep{NodeOrdering::StrictlyIncreasing, {}, 0, 0};
    bool saw_tie = false;
    for (std::size_t k = 0; k + 1 < op.nodes.size(); ++k) {
        double d = op.nodes[k + 1] - op.nodes[k];
        if (d < -tie)
            rep.reversal_indices.push_back(static_cast<int>(k));
        else if (d <= tie)
            saw_tie = true;
    }
    if (!rep.reversal_indices.empty())
        rep.classification = NodeOrdering::HasReversals;
    else if (saw_tie)
        rep.classification = NodeOrdering::NonDecreasing;

    for (std::size_t k = 0; k < op.nodes.size() && op.nodes[k] == a; ++k)
        ++rep.leading_plateau;
    for (std::size_t k = op.nodes.size(); k-- > 0 && op.nodes[k] == b;)
        ++rep.trailing_plateau;
    return rep;
}

struct MinExistenceResult {
    std::optional<int> n_exist;    // smallest n with all coordinates in range
    std::optional<int> n_monotone; // smallest n with all derivative coordinates >= 0
};

/// Scans n = degree(f1)..n_max using coordinates only (no node inversion).
template <class T>
MinExistenceResult min_existence_n(const Polynomial<T>& f1, const Interval<T>& iv, int n_max) {
    certify_monotone(f1, iv);
    MinExistenceResult res;
    const T lo = f1.evaluate(iv.a);
    const T hi = f1.evaluate(iv.b);
    for (int n = std::max(1, f1.degree()); n <= n_max; ++n) {
        BernsteinForm<T> gamma = monomial_to_bernstein(f1, n, iv);
        if (!res.n_exist) {
            bool ok = true;
            if constexpr (is_exact_v<T>) {
                for (const T& g : gamma.coords)
                    if (g < lo || g > hi) {
                        ok = false;
                        break;
                    }
            } else {
                const double etol =
                    detail::kExistenceRelTol * std::fabs(to_double(hi) - to_double(lo));
                for (const T& g : gamma.coords)
                    if (to_double(g) < to_double(lo) - etol ||
                        to_double(g) > to_double(hi) + etol) {
                        ok = false;
                        break;
                    }
            }
            if (ok)
                res.n_exist = n;
        }
        if (!res.n_monotone) {
            BernsteinForm<T> w = derivative_coordinates(gamma);
            bool ok = true;
            if constexpr (is_exact_v<T>) {
                for (const T& v : w.coords)
                    if (v < 0) {
                        ok = false;
                        break;
                    }
            } else {
                double wmax = 0.0;
                for (const T& v : w.coords)
                    wmax = std::max(wmax, std::fabs(to_double(v)));
                for (const T& v : w.coords)
                    if (to_double(v) < -1e-12 * wmax) {
                        ok = false;
                        break;
                    }
            }
            if (ok)
                res.n_monotone = n;
        }
        if (res.n_exist && res.n_monotone)
            break;
    }
    return res;
}

} // namespace bernop
