#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bernop/analysis.hpp"
#include "bernop/operator.hpp"
#include "support.hpp"

using bernop::build_operator;
using bernop::classical_operator;
using bernop::evaluate_operator;
using bernop::ExistenceStatus;
using bernop::GeneralizedOperator;
using bernop::Interval;
using bernop::min_existence_n;
using bernop::node_ordering;
using bernop::NodeOrdering;
using bernop::Polynomial;
using bernop::Rational;
using Catch::Approx;

namespace {

Polynomial<double> section4_cubic() {
    return Polynomial<double>(0.0, {0.0, 0.375, -0.5, 1.0 / 3.0});
}

Polynomial<Rational> section4_cubic_rational() {
    return Polynomial<Rational>(Rational(0),
                                {Rational(0), Rational(3, 8), Rational(-1, 2), Rational(1, 3)});
}

Polynomial<double> centered_cube() {
    return Polynomial<double>(0.0, {-0.125, 0.75, -1.5, 1.0});
}

} // namespace

TEST_CASE("build_operator: identity gives the classical operator") {
    Interval<double> iv(0.0, 2.0);
    for (int n : {1, 4, 9}) {
        auto op = build_operator(Polynomial<double>::identity(0.0), n, iv);
        REQUIRE(op.status == ExistenceStatus::Exists);
        auto cl = classical_operator(n, iv);
        REQUIRE(cl.nodes.size() == op.nodes.size());
        for (std::size_t k = 0; k < op.nodes.size(); ++k)
            CHECK(op.nodes[k] == Approx(cl.nodes[k]).margin(1e-13));
        CHECK(op.weights == std::vector<double>(static_cast<std::size_t>(n) + 1, 1.0));
    }
}

TEST_CASE("build_operator: section-4 cubic at n=3 exists with the quoted node order") {
    Interval<double> unit(0.0, 1.0);
    auto op = build_operator(section4_cubic(), 3, unit);
    REQUIRE(op.status == ExistenceStatus::Exists);
    REQUIRE(op.nodes.size() == 4);
    CHECK(op.nodes[0] == 0.0);
    CHECK(op.nodes[3] == 1.0);
    // 0 = t_0 < t_2 < t_1 < t_3 = 1
    CHECK(op.nodes[2] > op.nodes[0]);
    CHECK(op.nodes[1] > op.nodes[2]);
    CHECK(op.nodes[3] > op.nodes[1]);
    // node residuals meet the inversion tolerance
    for (int k = 0; k <= 3; ++k) {
        double g = bernop::to_double(op.gamma.coords[static_cast<std::size_t>(k)]);
        CHECK(std::fabs(section4_cubic().evaluate(op.nodes[static_cast<std::size_t>(k)]) - g) <=
              1e-13);
    }
}

TEST_CASE("build_operator: (x-1/N)^3 at n=N is not defined, offending index 2") {
    Interval<double> unit(0.0, 1.0);
    for (int N : {3, 8, 20}) {
        double t = 1.0 / N;
        Polynomial<double> p(0.0, {-t * t * t, 3 * t * t, -3 * t, 1.0});
        auto op = build_operator(p, N, unit);
        CHECK(op.status == ExistenceStatus::NotDefined);
        CHECK(op.nodes.empty());
        bool has2 = false;
        for (int k : op.offending_indices)
            has2 = has2 || k == 2;
        CHECK(has2);
        CHECK_THROWS_AS(node_ordering(op), bernop::OperatorNotDefinedError);
        CHECK_THROWS_AS(evaluate_operator(op, [](double x) { return x; }, 0.5),
                        bernop::OperatorNotDefinedError);
    }
}

TEST_CASE("build_operator: degree and monotonicity guards") {
    Interval<double> unit(0.0, 1.0);
    CHECK_THROWS_AS(build_operator(section4_cubic(), 2, unit), bernop::DegreeTooHighError);
    Polynomial<double> dec(0.0, {1.0, -1.0});
    CHECK_THROWS_AS(build_operator(dec, 3, unit), bernop::NotIncreasingError);
}

TEST_CASE("evaluate_operator: partition of unity and fixed functions") {
    Interval<double> unit(0.0, 1.0);
    auto f1 = section4_cubic();
    std::mt19937_64 g(31);
    for (int n : {3, 7, 20}) {
        auto op = build_operator(f1, n, unit);
        REQUIRE(op.status == ExistenceStatus::Exists);
        for (int i = 0; i < 100; ++i) {
            double x = testsup::u01(g);
            CHECK(evaluate_operator(op, [](double) { return 1.0; }, x) ==
                  Approx(1.0).margin(n * 1e-14));
            double want = f1.evaluate(x);
            CHECK(evaluate_operator(op, [&](double t) { return f1.evaluate(t); }, x) ==
                  Approx(want).margin(10 * 1e-13));
        }
        // endpoint interpolation is exact
        auto fsq = [](double t) { return t * t + 1.0; };
        CHECK(evaluate_operator(op, fsq, 0.0) == fsq(op.nodes.front()));
        CHECK(evaluate_operator(op, fsq, 1.0) == fsq(op.nodes.back()));
    }
}

TEST_CASE("evaluate_operator: positivity for nonnegative samples") {
    Interval<double> unit(0.0, 1.0);
    auto op = build_operator(centered_cube(), 8, unit);
    REQUIRE(op.status == ExistenceStatus::Exists);
    std::mt19937_64 g(32);
    for (int i = 0; i < 50; ++i) {
        double x = testsup::u01(g);
        CHECK(evaluate_operator(op, [](double t) { return std::fabs(t - 0.3); }, x) >= 0.0);
    }
}

TEST_CASE("evaluate_operator: x^3 fixing function on [-1,1] with f = x^4 closed form") {
    Interval<double> sym(-1.0, 1.0);
    Polynomial<double> cube(0.0, {0.0, 0.0, 0.0, 1.0});
    auto op = build_operator(cube, 4, sym);
    REQUIRE(op.status == ExistenceStatus::Exists);

    auto closed = [](double x) {
        double c = std::pow(0.5, 4.0 / 3.0);
        double um = 1.0 - x, up = 1.0 + x;
        return std::pow(um, 4) / 16.0 + c * (std::pow(um, 3) * up + um * std::pow(up, 3)) / 4.0 +
               std::pow(up, 4) / 16.0;
    };
    std::mt19937_64 g(33);
    for (int i = 0; i < 100; ++i) {
        double x = testsup::uniform(g, -1.0, 1.0);
        double got = evaluate_operator(op, [](double t) { return t * t * t * t; }, x);
        CHECK(got == Approx(closed(x)).margin(1e-12));
    }
}

TEST_CASE("classical_operator: line interpolation and moments") {
    Interval<double> unit(0.0, 1.0);
    auto op1 = classical_operator(1, unit);
    auto f = [](double t) { return 3.0 * t + 2.0; };
    std::mt19937_64 g(34);
    for (int i = 0; i < 20; ++i) {
        double x = testsup::u01(g);
        CHECK(evaluate_operator(op1, f, x) == Approx(f(0.0) * (1 - x) + f(1.0) * x));
    }

    // affine reproduction at any n
    auto op6 = classical_operator(6, unit);
    for (int i = 0; i < 20; ++i) {
        double x = testsup::u01(g);
        CHECK(evaluate_operator(op6, [](double t) { return t; }, x) == Approx(x).margin(1e-14));
    }

    // brute-force oracle: B_2 e2 (1/2) = sum_k (k/2)^2 C(2,k) (1/2)^2 = 3/8
    auto op2 = classical_operator(2, unit);
    CHECK(evaluate_operator(op2, [](double t) { return t * t; }, 0.5) == Approx(3.0 / 8.0));

    CHECK_THROWS_AS(classical_operator(0, unit), std::invalid_argument);
}

TEST_CASE("node_ordering: classifications") {
    Interval<double> unit(0.0, 1.0);

    auto id = build_operator(Polynomial<double>::identity(0.0), 5, unit);
    auto rid = node_ordering(id);
    CHECK(rid.classification == NodeOrdering::StrictlyIncreasing);
    CHECK(rid.reversal_indices.empty());
    CHECK(rid.leading_plateau == 1);
    CHECK(rid.trailing_plateau == 1);

    auto s4 = build_operator(section4_cubic(), 3, unit);
    auto rs4 = node_ordering(s4);
    CHECK(rs4.classification == NodeOrdering::HasReversals);
    REQUIRE(rs4.reversal_indices.size() == 1);
    CHECK(rs4.reversal_indices[0] == 1);

    for (int n : {8, 12, 20}) {
        auto cc = build_operator(centered_cube(), n, unit);
        REQUIRE(cc.status == ExistenceStatus::Exists);
        CHECK(node_ordering(cc).classification == NodeOrdering::HasReversals);
    }
}

TEST_CASE("node_ordering: plateau law for endpoint-flat fixing functions") {
    // f1 = 3x^2 - 2x^3: f1' = 6x(1-x), zero of order 1 at both endpoints
    Interval<double> unit(0.0, 1.0);
    Polynomial<double> f1(0.0, {0.0, 0.0, 3.0, -2.0});
    auto scan = min_existence_n(f1, unit, 200);
    REQUIRE(scan.n_exist.has_value());
    for (int n : {*scan.n_exist, *scan.n_exist + 7}) {
        auto op = build_operator(f1, n, unit);
        REQUIRE(op.status == ExistenceStatus::Exists);
        auto rep = node_ordering(op);
        CHECK(rep.leading_plateau == 2);
        CHECK(rep.trailing_plateau == 2);
        CHECK(op.nodes[0] == 0.0);
        CHECK(op.nodes[1] == 0.0);
        CHECK(op.nodes[op.nodes.size() - 2] == 1.0);
        CHECK(op.nodes.back() == 1.0);
    }

    // one-sided: f1 = x^2 on [0,1], s1 = 1, s2 = 0
    Polynomial<double> sq(0.0, {0.0, 0.0, 1.0});
    auto scan2 = min_existence_n(sq, unit, 100);
    REQUIRE(scan2.n_exist.has_value());
    auto op2 = build_operator(sq, *scan2.n_exist, unit);
    auto rep2 = node_ordering(op2);
    CHECK(rep2.leading_plateau == 2);
    CHECK(rep2.trailing_plateau == 1);
}

TEST_CASE("min_existence_n: identity, section-4 cubic, shifted cubes") {
    Interval<double> unit(0.0, 1.0);

    auto rid = min_existence_n(Polynomial<double>::identity(0.0), unit, 10);
    CHECK(rid.n_exist == 1);
    CHECK(rid.n_monotone == 1);

    auto rs4 = min_existence_n(section4_cubic(), unit, 50);
    CHECK(rs4.n_exist == 3);
    CHECK(rs4.n_monotone == 4);

    // exact rational scan agrees
    Interval<Rational> unitr(Rational(0), Rational(1));
    auto rs4r = min_existence_n(section4_cubic_rational(), unitr, 50);
    CHECK(rs4r.n_exist == 3);
    CHECK(rs4r.n_monotone == 4);

    // intro claim: for f1 = (x-t)^3, existence needs n > 1/t
    for (double t : {0.25, 0.125, 0.0625}) {
        Polynomial<double> p(0.0, {-t * t * t, 3 * t * t, -3 * t, 1.0});
        auto r = min_existence_n(p, unit, 400);
        REQUIRE(r.n_exist.has_value());
        CHECK(*r.n_exist > 1.0 / t);
        // reversals for every n: monotone coordinates never appear
        CHECK_FALSE(r.n_monotone.has_value());
    }
}

TEST_CASE("min_existence_n: monotone coordinates persist under elevation") {
    Interval<Rational> unit(Rational(0), Rational(1));
    auto f1 = section4_cubic_rational();
    auto gamma = bernop::monomial_to_bernstein(f1, 4, unit);
    // all derivative coordinates are >= 0 at n = 4; elevation keeps them so
    for (int e = 0; e < 20; ++e) {
        auto w = bernop::derivative_coordinates(gamma);
        for (const auto& v : w.coords)
            CHECK(v >= 0);
        gamma = bernop::degree_elevate(gamma);
    }
}

TEST_CASE("ordering equivalence: node classification matches coordinate signs") {
    Interval<double> unit(0.0, 1.0);
    std::mt19937_64 g(35);
    int agreements = 0;
    for (int trial = 0; trial < 12; ++trial) {
        auto f1 = testsup::random_increasing_poly(g, 1, 0.0, testsup::u01(g) * 0.4 + 0.05);
        for (int n = f1.degree(); n <= f1.degree() + 10; ++n) {
            auto op = build_operator(f1, n, unit);
            if (op.status != ExistenceStatus::Exists)
                continue;
            auto rep = node_ordering(op);
            auto w = bernop::derivative_coordinates(op.gamma);
            double wmax = 0.0;
            for (double v : w.coords)
                wmax = std::max(wmax, std::fabs(v));
            bool any_neg = false, any_zero = false;
            for (double v : w.coords) {
                if (v < -1e-11 * wmax)
                    any_neg = true;
                else if (v <= 1e-11 * wmax)
                    any_zero = true;
            }
            NodeOrdering expect = any_neg    ? NodeOrdering::HasReversals
                                  : any_zero ? NodeOrdering::NonDecreasing
                                             : NodeOrdering::StrictlyIncreasing;
            CHECK(rep.classification == expect);
            ++agreements;
        }
    }
    CHECK(agreements > 50);
}
