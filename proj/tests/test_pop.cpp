#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"

using namespace psatz;
using fixtures::x;

TEST_CASE("constants for the unconstrained square") {
    PopConstants k = compute_constants(fixtures::f1());
    CHECK(k.d == 1);
    CHECK(k.D == 2);
    CHECK(k.N == 4);
    CHECK(k.beta == 1);
    CHECK(k.eta.empty());
    CHECK(k.eta_sum() == 0);
}

TEST_CASE("eta for the ball constraint") {
    PopConstants k = compute_constants(fixtures::f2());
    REQUIRE(k.eta.size() == 1);
    CHECK(k.eta[0] == 2);  // |1| + |-1| * R
    CHECK(k.N == 5);
}

TEST_CASE("constant objective has beta matching its magnitude") {
    PopInstance pop{Polynomial::zero(1), {}, Rational(1)};
    PopConstants k = compute_constants(pop);
    CHECK(k.beta == 0);
    PopInstance neg{Polynomial::constant(1, -3), {}, Rational(1)};
    CHECK(compute_constants(neg).beta == 3);
}

TEST_CASE("degree rounding to the next even integer") {
    PopInstance pop{x(1, 0, 3), {}, Rational(1)};
    PopConstants k = compute_constants(pop);
    CHECK(k.d == 2);
    CHECK(k.D == 4);
}

TEST_CASE("monomial_bound uses sqrt(R) for odd degrees") {
    // |x| <= sqrt(2) on the ball of radius_sq 2, and the bound uses a
    // rational upper bound u >= sqrt(2).
    Rational b = monomial_bound(x(1, 0), Rational(2));
    CHECK(b * b >= 2);
    CHECK(monomial_bound(x(1, 0, 2), Rational(2)) == 2);
    CHECK(monomial_bound(Rational(-5) * x(2, 0, 2), Rational(1)) == 5);
}

TEST_CASE("bounds dominate samples in the ball") {
    for (const auto& pop : fixtures::all_pops()) {
        PopConstants k = compute_constants(pop);
        const int n = pop.nvars();
        Rational root = sqrt_upper_bound(pop.radius_sq);
        int checked = 0;
        for (int t = 0; checked < 100 && t < 1000; ++t) {
            std::vector<Rational> pt(n);
            Rational nrm(0);
            for (int i = 0; i < n; ++i) {
                std::uint64_t v = oracle::stream_value(
                    7, static_cast<std::uint64_t>(t) * n + i);
                long kk = static_cast<long>(v % 201) - 100;
                pt[i] = root * make_rational(kk, 100);
                nrm += pt[i] * pt[i];
            }
            if (nrm > pop.radius_sq) continue;
            ++checked;
            for (int i = 0; i < pop.num_constraints(); ++i)
                CHECK(pop.constraints[i].evaluate(pt) <= k.eta[i]);
            CHECK(-pop.objective.evaluate(pt) <= k.beta);
        }
        CHECK(checked == 100);
    }
}

TEST_CASE("compute_constants is deterministic") {
    PopConstants a = compute_constants(fixtures::f2());
    PopConstants b = compute_constants(fixtures::f2());
    CHECK(a.beta == b.beta);
    CHECK(a.eta == b.eta);
    CHECK(a.d == b.d);
}

TEST_CASE("validate warns when the radius looks too small") {
    // unconstrained 2-var problem: every grid point is feasible, including
    // corners with norm 2 > radius_sq 1.
    PopInstance pop{x(2, 0, 2) + x(2, 1, 2), {}, Rational(1)};
    PopDiagnostics diag = validate(pop);
    CHECK(diag.nvars == 2);
    CHECK_FALSE(diag.warnings.empty());

    PopDiagnostics ok = validate(fixtures::f2());
    CHECK(ok.warnings.empty());
    CHECK(ok.num_constraints == 1);

    PopInstance empty{x(1, 0, 2), {}, Rational(1)};
    CHECK(validate(empty).num_constraints == 0);
}

TEST_CASE("instance validation errors") {
    PopInstance bad{x(1, 0, 2), {}, Rational(0)};
    CHECK_THROWS_AS(bad.check(), std::invalid_argument);
    PopInstance mismatch{x(1, 0, 2), {x(2, 0)}, Rational(1)};
    CHECK_THROWS_AS(mismatch.check(), std::invalid_argument);
}

TEST_CASE("pop json round-trip") {
    for (const auto& pop : fixtures::all_pops()) {
        PopInstance back = pop_from_json(pop_to_json(pop));
        CHECK(back.objective == pop.objective);
        CHECK(back.constraints == pop.constraints);
        CHECK(back.radius_sq == pop.radius_sq);
    }
}

TEST_CASE("polynomial json round-trip") {
    Polynomial p = x(2, 0, 2) - Rational(3) * (x(2, 0) * x(2, 1)) +
                   Polynomial::constant(2, make_rational(7, 5));
    CHECK(poly_from_json(poly_to_json(p)) == p);
}
