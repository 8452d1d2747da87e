#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"

using namespace psatz;
using fixtures::x;

namespace {

Polynomial var(int n, int i, int p = 1) { return Polynomial::variable(n, i, p); }

}  // namespace

TEST_CASE("gamma floor of the unconstrained square") {
    PopInstance pop = fixtures::f1();
    PopConstants k = compute_constants(pop);
    CHECK(gamma_floor(pop, k) == -2);  // -(R + beta) = -(1 + 1)
    CHECK_THROWS_AS(build_f_gamma(pop, k, Rational(-3)), std::domain_error);
    CHECK_NOTHROW(build_f_gamma(pop, k, Rational(-2)));  // base exactly 0
}

TEST_CASE("f_gamma squares for the unconstrained square, gamma = -1") {
    // Variables (x, s0, s1, y); base = R + beta + gamma = 1.
    PopInstance pop = fixtures::f1();
    PopConstants k = compute_constants(pop);
    ReducedForm f = build_f_gamma(pop, k, Rational(-1));
    REQUIRE(f.squares.size() == 2);
    // first: gamma*y^2 - x^2 - s0^2
    CHECK(f.squares[0] ==
          -var(4, 3, 2) - var(4, 0, 2) - var(4, 1, 2));
    // last: base^d y^2 - (x^2 + s0^2) - s1^2
    CHECK(f.squares[1] ==
          var(4, 3, 2) - var(4, 0, 2) - var(4, 1, 2) - var(4, 2, 2));
    CHECK(f.identity_holds());
    CHECK(f.form.is_homogeneous());
    CHECK(f.form.degree() == 2 * k.D);
    CHECK(f.gamma == Rational(-1));
    // positive definite: strictly positive on sphere samples
    auto rep = oracle::sphere_min(f.form, 2000, 42);
    CHECK(rep.numeric_estimate > 0.0);
}

TEST_CASE("f_0 of the unconstrained square vanishes off the origin") {
    PopInstance pop = fixtures::f1();
    PopConstants k = compute_constants(pop);
    ReducedForm f = build_f_gamma(pop, k, Rational(0));
    // base = 2: zero at (x, s0, s1, y) = (0, 0, sqrt(2), 1).
    auto w = zero_witness(pop, k, Rational(0), {Rational(0)});
    REQUIRE(w.size() == 4);
    CHECK(w[3] == 1.0);
    CHECK(std::abs(f.form.evaluate_double(w)) <= 1e-9);
    std::vector<double> dir = w;
    auto rep = oracle::sphere_min(f.form, 2000, 42, {dir});
    CHECK(rep.numeric_estimate <= 1e-9);  // not positive definite
    // homogeneity: f(0) = 0
    CHECK(f.form.evaluate({Rational(0), Rational(0), Rational(0),
                           Rational(0)}) == 0);
}

TEST_CASE("build_h drops gamma and matches the gamma = 0 construction") {
    for (const auto& pop : fixtures::all_pops()) {
        PopConstants k = compute_constants(pop);
        ReducedForm h = build_h(pop, k);
        ReducedForm f0 = build_f_gamma(pop, k, Rational(0));
        CHECK_FALSE(h.gamma.has_value());
        CHECK(h.form == f0.form);
        CHECK(h.identity_holds());
        CHECK(h.form.degree() == 2 * k.D);
        std::vector<Rational> origin(k.N, Rational(0));
        CHECK(h.form.evaluate(origin) == 0);
    }
}

TEST_CASE("structural identity on random gammas") {
    std::uint64_t c = 0;
    for (const auto& pop : fixtures::all_pops()) {
        PopConstants k = compute_constants(pop);
        Rational floor = gamma_floor(pop, k);
        for (int t = 0; t < 4; ++t) {
            long num = static_cast<long>(oracle::stream_value(13, c++) % 400);
            Rational gamma = floor + make_rational(num, 100);
            ReducedForm f = build_f_gamma(pop, k, gamma);
            CHECK(f.identity_holds());
        }
    }
}

TEST_CASE("perturbed even lift") {
    PopInstance pop = fixtures::f1();
    PopConstants k = compute_constants(pop);
    Polynomial pgr = build_p_gamma_r(pop, k, Rational(-1), 1);
    CHECK(is_even_form(pgr));
    CHECK(pgr.degree() == 4 * k.D);
    CHECK(pgr.nvars() == 2 * k.N);
    // at v = e_1, w = 0: f_gamma(1,0,0,0) - 1 + 1/2
    ReducedForm f = build_f_gamma(pop, k, Rational(-1));
    std::vector<Rational> vw(8, Rational(0));
    vw[0] = 1;
    Rational want = f.form.evaluate({Rational(1), Rational(0), Rational(0),
                                     Rational(0)}) -
                    Rational(1) + make_rational(1, 2);
    CHECK(pgr.evaluate(vw) == want);
    CHECK_THROWS_AS(build_p_gamma_r(pop, k, Rational(-1), 0),
                    std::invalid_argument);
}

TEST_CASE("zero witness construction") {
    PopInstance pop = fixtures::f2();
    PopConstants k = compute_constants(pop);
    // gamma = p(x_hat) makes s_0 = 0
    std::vector<Rational> x_hat = {make_rational(1, 2)};
    Rational gamma = pop.objective.evaluate(x_hat);
    auto w = zero_witness(pop, k, gamma, x_hat);
    CHECK(w[1] == 0.0);           // s_0
    CHECK(w.back() == 1.0);       // y
    ReducedForm f = build_f_gamma(pop, k, gamma);
    CHECK(std::abs(f.form.evaluate_double(w)) <= 1e-9);

    CHECK_THROWS_AS(zero_witness(pop, k, Rational(-1), x_hat),
                    std::invalid_argument);  // gamma < p(x_hat)
    CHECK_THROWS_AS(zero_witness(pop, k, Rational(9), {Rational(2)}),
                    std::invalid_argument);  // outside the ball
    PopInstance f3 = fixtures::f3();
    PopConstants k3 = compute_constants(f3);
    CHECK_THROWS_AS(
        zero_witness(f3, k3, Rational(0), {make_rational(-1, 2)}),
        std::invalid_argument);  // violates g_1 = x >= 0
}

TEST_CASE("zero witnesses vanish for every fixture") {
    for (const auto& pop : fixtures::all_pops()) {
        PopConstants k = compute_constants(pop);
        auto grid = oracle::grid_minimize(pop, 21);
        REQUIRE(grid.has_estimate);
        Rational gamma = grid.estimate + make_rational(1, 2);
        ReducedForm f = build_f_gamma(pop, k, gamma);
        auto w = zero_witness(pop, k, gamma, grid.witness);
        CHECK(std::abs(f.form.evaluate_double(w)) <= 1e-9);
    }
}
