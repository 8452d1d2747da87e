#ifndef PSATZ_POP_HPP
#define PSATZ_POP_HPP

#include <string>
#include <vector>

#include "psatz/json_io.hpp"
#include "psatz/polynomial.hpp"

namespace psatz {

/// minimize objective(x) subject to constraints_i(x) >= 0, with the feasible
/// set known to satisfy sum_i x_i^2 <= radius_sq.
struct PopInstance {
    Polynomial objective;
    std::vector<Polynomial> constraints;
    Rational radius_sq;

    int nvars() const { return objective.nvars(); }
    int num_constraints() const { return static_cast<int>(constraints.size()); }

    void check() const {
        if (radius_sq <= 0) throw std::invalid_argument("radius_sq must be positive");
        for (const auto& g : constraints)
            if (g.nvars() != objective.nvars())
                throw std::invalid_argument("constraint variable-count mismatch");
    }
};

/// Auxiliary constants of the reduction.  2d is the smallest even integer
/// covering every input degree; eta_i / beta are coarse monomial upper
/// bounds on g_i / -p over the ball, always finite and valid.
struct PopConstants {
    int d = 1;
    std::vector<Rational> eta;
    Rational beta;
    int N = 0;  // n + m + 3
    int D = 2;  // 2d

    Rational eta_sum() const {
        Rational s(0);
        for (const auto& e : eta) s += e;
        return s;
    }
};

/// Sum over terms of |c_alpha| * R^{|alpha|/2}, using |x_j| <= sqrt(R).
/// Odd total degrees use a rational upper bound on sqrt(R).
inline Rational monomial_bound(const Polynomial& p, const Rational& radius_sq) {
    Rational root = sqrt_upper_bound(radius_sq);
    Rational total(0);
    for (const auto& [m, c] : p.terms()) {
        int deg = m.degree();
        Rational mag = c >= 0 ? c : Rational(-c);
        Rational scale = rational_pow(radius_sq, deg / 2);
        if (deg % 2 != 0) scale *= root;
        total += mag * scale;
    }
    return total;
}

inline PopConstants compute_constants(const PopInstance& pop) {
    pop.check();
    PopConstants k;
    int maxdeg = std::max(1, pop.objective.degree());
    for (const auto& g : pop.constraints) maxdeg = std::max(maxdeg, g.degree());
    k.d = (maxdeg + 1) / 2;
    k.D = 2 * k.d;
    k.N = pop.nvars() + pop.num_constraints() + 3;
    for (const auto& g : pop.constraints)
        k.eta.push_back(monomial_bound(g, pop.radius_sq));
    k.beta = monomial_bound(-pop.objective, pop.radius_sq);
    return k;
}

struct PopDiagnostics {
    int nvars = 0;
    int num_constraints = 0;
    int max_degree = 0;
    std::vector<std::string> warnings;
};

/// Structural report plus a coarse sampling check: a point satisfying every
/// g_i >= 0 but lying outside {sum x^2 <= R} indicates a bad radius_sq.
inline PopDiagnostics validate(const PopInstance& pop,
                               int samples_per_axis = 9) {
    PopDiagnostics diag;
    diag.nvars = pop.nvars();
    diag.num_constraints = pop.num_constraints();
    diag.max_degree = std::max(1, pop.objective.degree());
    for (const auto& g : pop.constraints)
        diag.max_degree = std::max(diag.max_degree, g.degree());

    if (pop.nvars() <= 3) {
        Rational root = sqrt_upper_bound(pop.radius_sq);
        Rational span = 2 * root;
        std::vector<int> idx(pop.nvars(), 0);
        const int res = samples_per_axis;
        bool done = pop.nvars() == 0;
        while (!done) {
            std::vector<Rational> pt(pop.nvars());
            for (int i = 0; i < pop.nvars(); ++i)
                pt[i] = -root + span * make_rational(idx[i], res - 1);
            bool feasible = true;
            for (const auto& g : pop.constraints)
                if (g.evaluate(pt) < 0) { feasible = false; break; }
            if (feasible) {
                Rational nrm(0);
                for (const auto& x : pt) nrm += x * x;
                if (nrm > pop.radius_sq) {
                    std::string w = "feasible sample outside the radius_sq ball (";
                    for (size_t i = 0; i < pt.size(); ++i)
                        w += (i ? "," : "") + to_string(pt[i]);
                    w += "): radius_sq may be too small";
                    diag.warnings.push_back(w);
                    break;
                }
            }
            int axis = 0;
            while (axis < pop.nvars() && ++idx[axis] == res) idx[axis++] = 0;
            done = axis == pop.nvars();
        }
    }
    return diag;
}

/// POP JSON: {"objective": <poly>, "constraints": [<poly>...], "radius_sq": "p/q"}
inline Json pop_to_json(const PopInstance& pop) {
    Json j;
    j["objective"] = poly_to_json(pop.objective);
    Json cs = Json::array();
    for (const auto& g : pop.constraints) cs.push_back(poly_to_json(g));
    j["constraints"] = std::move(cs);
    j["radius_sq"] = to_string(pop.radius_sq);
    return j;
}

inline PopInstance pop_from_json(const Json& j) {
    PopInstance pop{poly_from_json(j.at("objective")), {}, Rational(1)};
    if (j.contains("constraints"))
        for (const auto& g : j.at("constraints"))
            pop.constraints.push_back(poly_from_json(g));
    pop.radius_sq = parse_rational(j.at("radius_sq").get<std::string>());
    pop.check();
    return pop;
}

}  // namespace psatz

#endif
