#ifndef PSATZ_ORACLE_HPP
#define PSATZ_ORACLE_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "psatz/pop.hpp"

namespace psatz::oracle {

/// Counter-based generator: value(seed, counter) = splitmix64(seed xor
/// splitmix64(counter)).  Stateless, so sampling is reproducible and
/// parallelizable by index; the exact construction is documented in the
/// README so independent implementations agree bit-for-bit.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t stream_value(std::uint64_t seed, std::uint64_t counter) {
    return splitmix64(seed ^ splitmix64(counter));
}

/// Uniform in (0, 1]: top 53 bits, shifted away from zero.
inline double stream_u01(std::uint64_t seed, std::uint64_t counter) {
    return ((stream_value(seed, counter) >> 11) + 1) * 0x1p-53;
}

/// Standard normal via Box-Muller on two counter draws.
inline double stream_gaussian(std::uint64_t seed, std::uint64_t counter) {
    double u1 = stream_u01(seed, 2 * counter);
    double u2 = stream_u01(seed, 2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

struct OracleReport {
    bool has_estimate = false;
    Rational estimate;             // exact for grid minima
    double numeric_estimate = 0.0;
    std::vector<Rational> witness;
    std::vector<double> numeric_witness;
    long samples = 0;
    int resolution = 0;
    std::string direction;  // "upper-bound-on-min" | "min-on-samples"
    bool infeasible_grid = false;
};

/// Exact minimum of the objective over grid points of [-u, u]^n (u a
/// rational upper bound on sqrt(R)) that satisfy every constraint and the
/// ball bound.  A grid minimum is an upper bound on the true minimum.
inline OracleReport grid_minimize(const PopInstance& pop, int resolution = 101) {
    if (pop.nvars() > 3)
        throw std::invalid_argument("grid_minimize: more than 3 variables");
    if (resolution < 10)
        throw std::invalid_argument("grid_minimize: resolution must be >= 10");
    OracleReport rep;
    rep.direction = "upper-bound-on-min";
    rep.resolution = resolution;
    const int n = pop.nvars();
    Rational root = sqrt_upper_bound(pop.radius_sq);
    Rational span = 2 * root;
    std::vector<int> idx(n, 0);
    bool done = false;
    while (!done) {
        std::vector<Rational> pt(n);
        for (int i = 0; i < n; ++i)
            pt[i] = -root + span * make_rational(idx[i], resolution - 1);
        bool feasible = true;
        Rational nrm(0);
        for (const auto& x : pt) nrm += x * x;
        if (nrm > pop.radius_sq) feasible = false;
        for (int i = 0; feasible && i < pop.num_constraints(); ++i)
            if (pop.constraints[i].evaluate(pt) < 0) feasible = false;
        if (feasible) {
            rep.samples++;
            Rational v = pop.objective.evaluate(pt);
            if (!rep.has_estimate || v < rep.estimate) {
                rep.has_estimate = true;
                rep.estimate = v;
                rep.witness = pt;
            }
        }
        if (n == 0) break;
        int axis = 0;
        while (axis < n && ++idx[axis] == resolution) idx[axis++] = 0;
        done = axis == n;
    }
    rep.infeasible_grid = !rep.has_estimate;
    if (rep.has_estimate) {
        rep.numeric_estimate = rep.estimate.get_d();
        for (const auto& x : rep.witness)
            rep.numeric_witness.push_back(x.get_d());
    }
    return rep;
}

/// Minimum of a form over `samples` uniform unit vectors plus the signed
/// coordinate axes and any forced directions (normalized here).
inline OracleReport sphere_min(const Polynomial& form, long samples,
                               std::uint64_t seed,
                               const std::vector<std::vector<double>>& forced = {}) {
    if (!form.is_homogeneous())
        throw std::invalid_argument("sphere_min: input must be homogeneous");
    const int n = form.nvars();
    OracleReport rep;
    rep.direction = "min-on-samples";

    auto consider = [&](std::vector<double> v) {
        double nrm = 0.0;
        for (double x : v) nrm += x * x;
        if (nrm <= 0.0) return;
        nrm = std::sqrt(nrm);
        for (double& x : v) x /= nrm;
        double val = form.evaluate_double(v);
        rep.samples++;
        if (!rep.has_estimate || val < rep.numeric_estimate) {
            rep.has_estimate = true;
            rep.numeric_estimate = val;
            rep.numeric_witness = v;
        }
    };

    for (int i = 0; i < n; ++i) {
        std::vector<double> axis(n, 0.0);
        axis[i] = 1.0;
        consider(axis);
        axis[i] = -1.0;
        consider(axis);
    }
    for (const auto& f : forced) {
        if (static_cast<int>(f.size()) != n)
            throw std::invalid_argument("sphere_min: forced sample arity");
        consider(f);
    }
    for (long s = 0; s < samples; ++s) {
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i)
            v[i] = stream_gaussian(seed, static_cast<std::uint64_t>(s) * n + i);
        consider(v);
    }
    return rep;
}

/// Advisory identity check: a - b vanishes at `trials` random rational
/// points (coordinates k/1000 with k uniform in [-1000, 1000], exact
/// evaluation).  Canonical equality remains the authority.
inline bool random_eval_equal(const Polynomial& a, const Polynomial& b,
                              int trials, std::uint64_t seed) {
    if (a.nvars() != b.nvars())
        throw std::invalid_argument("random_eval_equal: arity mismatch");
    const int n = a.nvars();
    for (int t = 0; t < trials; ++t) {
        std::vector<Rational> pt(n);
        for (int i = 0; i < n; ++i) {
            std::uint64_t v =
                stream_value(seed, static_cast<std::uint64_t>(t) * n + i);
            long k = static_cast<long>(v % 2001) - 1000;
            pt[i] = make_rational(k, 1000);
        }
        if (a.evaluate(pt) != b.evaluate(pt)) return false;
    }
    return true;
}

}  // namespace psatz::oracle

#endif
