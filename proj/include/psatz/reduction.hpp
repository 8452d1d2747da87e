#ifndef PSATZ_REDUCTION_HPP
#define PSATZ_REDUCTION_HPP

#include <cmath>
#include <optional>
#include <vector>

#include "psatz/pop.hpp"

namespace psatz {

/// Homogeneous degree-2D target form in N = n+m+3 variables, ordered
/// (x_1..x_n, s_0..s_{m+1}, y).  `squares` retains the polynomials whose
/// squares sum to `form`, so the construction can be re-verified exactly.
struct ReducedForm {
    Polynomial form;
    std::optional<Rational> gamma;
    std::vector<Polynomial> squares;

    bool identity_holds() const {
        Polynomial sum(form.nvars());
        for (const auto& s : squares) sum = sum + s * s;
        return sum == form;
    }
};

inline Rational gamma_floor(const PopInstance& pop, const PopConstants& k) {
    return -(pop.radius_sq + k.eta_sum() + k.beta);
}

namespace detail {

/// Builds the m+2 square roots of the target form.  The first-square input
/// `first` is gamma - p for the gamma-parametrized form and -p for the
/// gamma-free variant; `base` is R + sum(eta) + beta (+ gamma).
inline ReducedForm build_squares(const PopInstance& pop, const PopConstants& k,
                                 const Polynomial& first, const Rational& base,
                                 std::optional<Rational> gamma) {
    const int n = pop.nvars();
    const int m = pop.num_constraints();
    const int N = k.N;
    const int yidx = N - 1;              // homogenizing variable
    const int sidx = n;                  // s_0 .. s_{m+1} start here

    auto widen = [&](const Polynomial& p) {
        Polynomial r(N);
        for (const auto& [mono, c] : p.terms()) {
            Monomial mm(N);
            for (int i = 0; i < n; ++i) mm.exp[i] = mono.exp[i];
            r.add_term(mm, c);
        }
        return r;
    };

    std::vector<Polynomial> squares;
    // (first_hom - s_0^2 y^{2d-2})
    {
        Polynomial q = homogenize(widen(first), 2 * k.d, yidx);
        Polynomial slack = Polynomial::variable(N, sidx, 2) *
                           Polynomial::variable(N, yidx, 2 * k.d - 2);
        squares.push_back(q - slack);
    }
    // (g_i hom - s_i^2 y^{2d-2}), i = 1..m
    for (int i = 0; i < m; ++i) {
        Polynomial q = homogenize(widen(pop.constraints[i]), 2 * k.d, yidx);
        Polynomial slack = Polynomial::variable(N, sidx + 1 + i, 2) *
                           Polynomial::variable(N, yidx, 2 * k.d - 2);
        squares.push_back(q - slack);
    }
    // (base^d y^{2d} - (sum x^2 + sum_{i<=m} s_i^2)^d - s_{m+1}^{2d})
    {
        Polynomial norms(N);
        for (int i = 0; i < n + m + 1; ++i)
            norms = norms + Polynomial::variable(N, i, 2);
        Polynomial q = rational_pow(base, k.d) *
                           Polynomial::variable(N, yidx, 2 * k.d) -
                       norms.pow(k.d) -
                       Polynomial::variable(N, sidx + m + 1, 2 * k.d);
        squares.push_back(q);
    }

    ReducedForm rf;
    rf.gamma = gamma;
    rf.squares = std::move(squares);
    Polynomial total(N);
    for (const auto& s : rf.squares) total = total + s * s;
    rf.form = std::move(total);
    return rf;
}

}  // namespace detail

/// The degree-2D form whose positive definiteness is equivalent to gamma
/// being a strict lower bound on the POP.  Rejects gamma below the floor
/// -(R + sum(eta) + beta), where the d-th power base would go negative.
inline ReducedForm build_f_gamma(const PopInstance& pop, const PopConstants& k,
                                 const Rational& gamma) {
    Rational base = pop.radius_sq + k.eta_sum() + k.beta + gamma;
    if (base < 0)
        throw std::domain_error("gamma below floor " +
                                to_string(gamma_floor(pop, k)));
    Polynomial first =
        Polynomial::constant(pop.nvars(), gamma) - pop.objective;
    return detail::build_squares(pop, k, first, base, gamma);
}

/// Gamma-free variant: positivity of p on S is equivalent to positive
/// definiteness of this form.  Coincides exactly with build_f_gamma at
/// gamma = 0 (the first bracket flips sign, which the square absorbs).
inline ReducedForm build_h(const PopInstance& pop, const PopConstants& k) {
    ReducedForm rf = build_f_gamma(pop, k, Rational(0));
    rf.gamma.reset();
    return rf;
}

/// Even form of degree 4D in 2N variables:
/// f_gamma(v^2-w^2) - (1/r)(sum (v_i^2-w_i^2)^2)^D + (1/2r)(sum v_i^4+w_i^4)^D.
inline Polynomial build_p_gamma_r(const PopInstance& pop, const PopConstants& k,
                                  const Rational& gamma, int r) {
    if (r < 1) throw std::invalid_argument("build_p_gamma_r: r must be >= 1");
    ReducedForm f = build_f_gamma(pop, k, gamma);
    Polynomial base =
        f.form - Rational(1, r) * sum_of_even_powers(k.N, 2, k.D);
    return even_lift(base) +
           Rational(1, 2 * r) * sum_of_even_powers(2 * k.N, 4, k.D);
}

/// Point (x_hat, s, 1) at which f_gamma vanishes, built from a feasible
/// point with p(x_hat) <= gamma.  Square roots are numeric, so the zero is
/// exact only up to floating tolerance.
inline std::vector<double> zero_witness(const PopInstance& pop,
                                        const PopConstants& k,
                                        const Rational& gamma,
                                        const std::vector<Rational>& x_hat) {
    const int n = pop.nvars();
    const int m = pop.num_constraints();
    Rational pval = pop.objective.evaluate(x_hat);
    if (gamma < pval)
        throw std::invalid_argument("zero_witness: gamma below p(x_hat)");
    std::vector<double> z(k.N, 0.0);
    Rational norm_sq(0);
    for (int i = 0; i < n; ++i) {
        z[i] = x_hat[i].get_d();
        norm_sq += x_hat[i] * x_hat[i];
    }
    if (norm_sq > pop.radius_sq)
        throw std::invalid_argument("zero_witness: x_hat outside the ball");
    Rational s_sq_sum = gamma - pval;
    z[n] = std::sqrt(Rational(gamma - pval).get_d());  // s_0
    for (int i = 0; i < m; ++i) {
        Rational gval = pop.constraints[i].evaluate(x_hat);
        if (gval < 0)
            throw std::invalid_argument("zero_witness: x_hat infeasible");
        z[n + 1 + i] = std::sqrt(gval.get_d());
        s_sq_sum += gval;
    }
    Rational base = pop.radius_sq + k.eta_sum() + k.beta + gamma;
    double inner = Rational(norm_sq + s_sq_sum).get_d();
    double gap = rational_pow(base, k.d).get_d() -
                 std::pow(inner, static_cast<double>(k.d));
    if (gap < 0) gap = 0;  // bound construction guarantees gap >= 0
    z[n + 1 + m] = std::pow(gap, 1.0 / (2.0 * k.d));  // s_{m+1}
    z[k.N - 1] = 1.0;                                 // y
    return z;
}

}  // namespace psatz

#endif
