#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bernop/bernstein.hpp"
#include "support.hpp"

using bernop::basis_eval;
using bernop::basis_row;
using bernop::BernsteinForm;
using bernop::degree_elevate;
using bernop::derivative_coordinates;
using bernop::form_eval;
using bernop::Interval;
using bernop::monomial_to_bernstein;
using bernop::Polynomial;
using bernop::Rational;
using Catch::Approx;

TEST_CASE("basis_eval: endpoint and midpoint values") {
    Interval<double> unit(0.0, 1.0);
    for (int n : {1, 4, 17}) {
        CHECK(basis_eval(n, 0, 0.0, unit) == 1.0);
        CHECK(basis_eval(n, n, 1.0, unit) == 1.0);
        if (n > 1)
            CHECK(basis_eval(n, 1, 0.0, unit) == 0.0);
    }
    CHECK(basis_eval(2, 1, 0.5, unit) == Approx(0.5));
    CHECK_THROWS_AS(basis_eval(3, 4, 0.5, unit), bernop::IndexOutOfRangeError);
    CHECK_THROWS_AS(basis_eval(3, -1, 0.5, unit), bernop::IndexOutOfRangeError);
}

TEST_CASE("basis_eval: partition of unity") {
    Interval<double> iv(-1.0, 3.0);
    std::mt19937_64 g(21);
    for (int n : {1, 5, 50, 500, 1000}) {
        for (int i = 0; i < 100; ++i) {
            double x = testsup::uniform(g, -1.0, 3.0);
            double sum = 0.0;
            for (int k = 0; k <= n; ++k)
                sum += basis_eval(n, k, x, iv);
            CHECK(std::fabs(sum - 1.0) <= n * 1e-14);
        }
    }
}

TEST_CASE("basis_eval: log-space path agrees across the switch") {
    // n = 1029 uses incremental products, n = 1030 log space; both must agree
    // with the row recurrence and sum to one.
    Interval<double> unit(0.0, 1.0);
    std::mt19937_64 g(22);
    for (int n : {1029, 1030, 4000}) {
        for (int i = 0; i < 5; ++i) {
            double x = testsup::uniform(g, 0.05, 0.95);
            auto row = basis_row(n, x, unit);
            double sum = 0.0;
            for (int k = 0; k <= n; ++k)
                sum += row[static_cast<std::size_t>(k)];
            CHECK(sum == Approx(1.0).epsilon(1e-10));
            for (int k : {0, n / 3, n / 2, n}) {
                double direct = basis_eval(n, k, x, unit);
                double viarow = row[static_cast<std::size_t>(k)];
                CHECK(direct == Approx(viarow).margin(1e-14).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("basis_row: matches basis_eval and is exact in rational mode") {
    Interval<double> iv(0.0, 2.0);
    std::mt19937_64 g(23);
    for (int n : {1, 7, 40}) {
        double x = testsup::uniform(g, 0.0, 2.0);
        auto row = basis_row(n, x, iv);
        for (int k = 0; k <= n; ++k)
            CHECK(row[static_cast<std::size_t>(k)] ==
                  Approx(basis_eval(n, k, x, iv)).margin(1e-15).epsilon(1e-12));
    }

    Interval<Rational> ivr(Rational(0), Rational(1));
    auto rrow = basis_row(5, Rational(1, 3), ivr);
    Rational sum(0);
    for (const auto& v : rrow)
        sum += v;
    CHECK(sum == Rational(1));
    CHECK(rrow[0] == basis_eval(5, 0, Rational(1, 3), ivr));
    CHECK(rrow[3] == basis_eval(5, 3, Rational(1, 3), ivr));
}

TEST_CASE("form_eval: constants, exact fixtures, endpoint identities") {
    Interval<double> unit(0.0, 1.0);
    BernsteinForm<double> c3(3, unit, {2.5, 2.5, 2.5, 2.5});
    std::mt19937_64 g(24);
    for (int i = 0; i < 20; ++i)
        CHECK(form_eval(c3, testsup::u01(g)) == Approx(2.5));

    // coords of the section-4 cubic at n=3, evaluated at the right endpoint
    BernsteinForm<Rational> f(3, Interval<Rational>(Rational(0), Rational(1)),
                              {Rational(0), Rational(1, 8), Rational(1, 12), Rational(5, 24)});
    CHECK(form_eval(f, Rational(1)) == Rational(5, 24));
    CHECK(form_eval(f, Rational(0)) == Rational(0));

    // coords of x^3 on [-1,1] at n=4, evaluated at 0
    Interval<double> sym(-1.0, 1.0);
    BernsteinForm<double> x3(4, sym, {-1.0, 0.5, 0.0, -0.5, 1.0});
    CHECK(form_eval(x3, 0.0) == Approx(0.0).margin(1e-15));
    CHECK(form_eval(x3, 0.7) == Approx(0.343).epsilon(1e-12));

    // endpoint values are the first/last coordinates
    BernsteinForm<double> r(6, unit, {3, 1, 4, 1, 5, 9, 2});
    CHECK(form_eval(r, 0.0) == 3.0);
    CHECK(form_eval(r, 1.0) == 2.0);
}

TEST_CASE("monomial_to_bernstein: identity gives k/n") {
    Interval<double> unit(0.0, 1.0);
    auto f = monomial_to_bernstein(Polynomial<double>::identity(0.0), 7, unit);
    for (int k = 0; k <= 7; ++k)
        CHECK(f.coords[static_cast<std::size_t>(k)] == Approx(k / 7.0));

    Interval<double> gen(-2.0, 3.0);
    auto fg = monomial_to_bernstein(Polynomial<double>::identity(-2.0), 5, gen);
    for (int k = 0; k <= 5; ++k)
        CHECK(fg.coords[static_cast<std::size_t>(k)] == Approx(-2.0 + 5.0 * k / 5.0));
}

TEST_CASE("monomial_to_bernstein: x^3 on [-1,1] at n=4") {
    Interval<Rational> sym(Rational(-1), Rational(1));
    Polynomial<Rational> cube(Rational(0), {Rational(0), Rational(0), Rational(0), Rational(1)});
    auto f = monomial_to_bernstein(cube.rebase(Rational(-1)), 4, sym);
    REQUIRE(f.coords.size() == 5);
    CHECK(f.coords[0] == Rational(-1));
    CHECK(f.coords[1] == Rational(1, 2));
    CHECK(f.coords[2] == Rational(0));
    CHECK(f.coords[3] == Rational(-1, 2));
    CHECK(f.coords[4] == Rational(1));

    // float mode within 1e-12 relative
    Interval<double> symd(-1.0, 1.0);
    Polynomial<double> cubed(0.0, {0.0, 0.0, 0.0, 1.0});
    auto fd = monomial_to_bernstein(cubed.rebase(-1.0), 4, symd);
    double expect[] = {-1.0, 0.5, 0.0, -0.5, 1.0};
    for (int k = 0; k <= 4; ++k)
        CHECK(fd.coords[static_cast<std::size_t>(k)] == Approx(expect[k]).margin(1e-12));
}

TEST_CASE("monomial_to_bernstein: centered cube coordinates at n=2N") {
    for (int N : {4, 10, 50}) {
        Interval<Rational> unit(Rational(0), Rational(1));
        Polynomial<Rational> p(Rational(0),
                               {Rational(-1, 8), Rational(3, 4), Rational(-3, 2), Rational(1)});
        auto f = monomial_to_bernstein(p, 2 * N, unit);
        CHECK(f.coords[static_cast<std::size_t>(N)] == Rational(0));
        CHECK(f.coords[static_cast<std::size_t>(N) + 1] ==
              Rational(-3, 16LL * N * N - 8LL * N));
    }
}

TEST_CASE("monomial_to_bernstein: (x-1/N)^3 coordinate 2 at n=N") {
    for (long long N : {3LL, 8LL, 20LL}) {
        Interval<Rational> unit(Rational(0), Rational(1));
        Rational t(1, N);
        // (x-t)^3 expanded about 0
        Polynomial<Rational> p(Rational(0),
                               {-t * t * t, Rational(3) * t * t, Rational(-3) * t, Rational(1)});
        auto f = monomial_to_bernstein(p, static_cast<int>(N), unit);
        Rational expect = Rational(5, N * N * N) - Rational(6, N * N * N - N * N);
        CHECK(f.coords[2] == expect);
    }
}

TEST_CASE("monomial_to_bernstein: degree guard and internal rebase") {
    Interval<double> unit(0.0, 1.0);
    Polynomial<double> cubic(0.0, {0.0, 0.0, 0.0, 1.0});
    CHECK_THROWS_AS(monomial_to_bernstein(cubic, 2, unit), bernop::DegreeTooHighError);

    // base differing from a is rebased internally
    Interval<double> iv(1.0, 2.0);
    Polynomial<double> sq(0.0, {0.0, 0.0, 1.0});
    auto f = monomial_to_bernstein(sq, 4, iv);
    CHECK(f.coords[0] == Approx(1.0));
    CHECK(f.coords[4] == Approx(4.0));
}

TEST_CASE("round trip: form_eval of converted polynomial equals direct evaluation") {
    std::mt19937_64 g(25);
    for (int trial = 0; trial < 12; ++trial) {
        int deg = 1 + static_cast<int>(testsup::u01(g) * 8);
        Interval<double> iv(trial % 2 == 0 ? 0.0 : -1.0, trial % 3 == 0 ? 0.25 : 1.0);
        auto p = testsup::random_poly(g, deg, iv.a);
        for (int n : {deg, deg + 5, 200}) {
            auto f = monomial_to_bernstein(p, n, iv);
            for (int i = 0; i < 100; ++i) {
                double x = testsup::uniform(g, iv.a, iv.b);
                double want = p.evaluate(x);
                CHECK(form_eval(f, x) ==
                      Approx(want).margin(1e-10 * std::max(1.0, std::fabs(want))));
            }
        }
    }
}

TEST_CASE("derivative_coordinates: section-4 cubic and identity") {
    Interval<Rational> unit(Rational(0), Rational(1));
    Polynomial<Rational> f1(Rational(0),
                            {Rational(0), Rational(3, 8), Rational(-1, 2), Rational(1, 3)});
    auto gamma = monomial_to_bernstein(f1, 3, unit);
    CHECK(gamma.coords[0] == Rational(0));
    CHECK(gamma.coords[1] == Rational(1, 8));
    CHECK(gamma.coords[2] == Rational(1, 12));
    CHECK(gamma.coords[3] == Rational(5, 24));

    auto w = derivative_coordinates(gamma);
    REQUIRE(w.n == 2);
    CHECK(w.coords[0] == Rational(3, 8));
    CHECK(w.coords[1] == Rational(-1, 8));
    CHECK(w.coords[2] == Rational(3, 8));

    // derivative of the identity is 1 in every dimension
    Interval<double> ivd(0.0, 2.0);
    auto gid = monomial_to_bernstein(Polynomial<double>::identity(0.0), 9, ivd);
    auto wid = derivative_coordinates(gid);
    for (const auto& v : wid.coords)
        CHECK(v == Approx(1.0));

    CHECK_THROWS_AS(derivative_coordinates(BernsteinForm<double>(0, ivd, {1.0})),
                    std::invalid_argument);
}

TEST_CASE("derivative_coordinates: agrees with converting the derivative") {
    std::mt19937_64 g(26);
    Interval<double> iv(0.0, 1.0);
    for (int trial = 0; trial < 15; ++trial) {
        auto p = testsup::random_poly(g, 5);
        int n = 6 + static_cast<int>(testsup::u01(g) * 30);
        auto via_form = derivative_coordinates(monomial_to_bernstein(p, n, iv));
        auto via_poly = monomial_to_bernstein(p.derivative(), n - 1, iv);
        for (int k = 0; k < n; ++k)
            CHECK(via_form.coords[static_cast<std::size_t>(k)] ==
                  Approx(via_poly.coords[static_cast<std::size_t>(k)]).margin(1e-12));
    }
}

TEST_CASE("derivative_coordinates: lemma identity reconstructs differences exactly") {
    Interval<Rational> unit(Rational(0), Rational(1));
    Polynomial<Rational> p(Rational(0),
                           {Rational(1, 3), Rational(-2, 7), Rational(5, 11), Rational(1, 2)});
    for (int n : {3, 5, 12}) {
        auto gamma = monomial_to_bernstein(p, n, unit);
        auto w = derivative_coordinates(gamma);
        for (int k = 0; k < n; ++k) {
            Rational diff = gamma.coords[static_cast<std::size_t>(k) + 1] -
                            gamma.coords[static_cast<std::size_t>(k)];
            CHECK(w.coords[static_cast<std::size_t>(k)] * (unit.b - unit.a) / Rational(n) == diff);
        }
    }
}

TEST_CASE("degree_elevate: constants, value preservation, rational pipeline") {
    Interval<double> unit(0.0, 1.0);
    BernsteinForm<double> c(4, unit, {2.0, 2.0, 2.0, 2.0, 2.0});
    auto ce = degree_elevate(c);
    REQUIRE(ce.n == 5);
    for (const auto& v : ce.coords)
        CHECK(v == Approx(2.0));

    std::mt19937_64 g(27);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> coords(8);
        for (auto& v : coords)
            v = testsup::uniform(g, -1.0, 1.0);
        BernsteinForm<double> f(7, unit, coords);
        auto fe = degree_elevate(f);
        for (int i = 0; i < 25; ++i) {
            double x = testsup::u01(g);
            double want = form_eval(f, x);
            CHECK(form_eval(fe, x) ==
                  Approx(want).margin(1e-12 * std::max(1.0, std::fabs(want))));
        }
    }

    // elevation of the centered cube's n=3 coordinates equals direct conversion at n=4
    Interval<Rational> ur(Rational(0), Rational(1));
    Polynomial<Rational> p(Rational(0),
                           {Rational(-1, 8), Rational(3, 4), Rational(-3, 2), Rational(1)});
    auto f3 = monomial_to_bernstein(p, 3, ur);
    auto f4 = degree_elevate(f3);
    auto direct = monomial_to_bernstein(p, 4, ur);
    REQUIRE(f4.coords.size() == direct.coords.size());
    for (std::size_t k = 0; k < f4.coords.size(); ++k)
        CHECK(f4.coords[k] == direct.coords[k]);
}

TEST_CASE("degree_elevate: preserves nonnegativity and monotone coordinates") {
    Interval<double> unit(0.0, 1.0);
    std::mt19937_64 g(28);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> coords(6);
        for (auto& v : coords)
            v = testsup::u01(g);
        BernsteinForm<double> f(5, unit, coords);
        for (int e = 0; e < 10; ++e) {
            f = degree_elevate(f);
            for (const auto& v : f.coords)
                CHECK(v >= 0.0);
        }

        std::vector<double> inc(6);
        double acc = 0.0;
        for (auto& v : inc) {
            acc += testsup::u01(g);
            v = acc;
        }
        BernsteinForm<double> fm(5, unit, inc);
        for (int e = 0; e < 10; ++e) {
            fm = degree_elevate(fm);
            for (std::size_t k = 0; k + 1 < fm.coords.size(); ++k)
                CHECK(fm.coords[k] <= fm.coords[k + 1] + 1e-15);
        }
    }
}
