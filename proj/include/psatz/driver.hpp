#ifndef PSATZ_DRIVER_HPP
#define PSATZ_DRIVER_HPP

#include <chrono>
#include <optional>
#include <utility>

#include "psatz/certifiers.hpp"
#include "psatz/oracle.hpp"
#include "psatz/reduction.hpp"

namespace psatz {

enum class Method { Polya, Reznick, Artin, Dsos, Sdsos };

inline const char* to_string(Method m) {
    switch (m) {
        case Method::Polya: return "polya";
        case Method::Reznick: return "reznick";
        case Method::Artin: return "artin";
        case Method::Dsos: return "dsos";
        case Method::Sdsos: return "sdsos";
    }
    return "?";
}

inline std::optional<Method> method_from_string(const std::string& s) {
    if (s == "polya") return Method::Polya;
    if (s == "reznick") return Method::Reznick;
    if (s == "artin") return Method::Artin;
    if (s == "dsos") return Method::Dsos;
    if (s == "sdsos") return Method::Sdsos;
    return std::nullopt;
}

struct HierarchyConfig {
    Method method = Method::Reznick;
    int r_min = 1;
    int r_max = 1;
    Rational epsilon = make_rational(1, 100);
    std::optional<std::pair<Rational, Rational>> brackets;
    conic::SolveBudget budget;
    long polya_term_budget = psatz::polya_term_budget();
    conic::Tolerances tolerances;
};

/// Level-r membership test for gamma: builds the perturbed reduction form
/// (or its even lift for dsos/sdsos) and dispatches to the certifier.
/// Solver-unknown and budget-exceeded both count as "not certified".
inline CertifyResult level_feasible(const PopInstance& pop,
                                    const PopConstants& k, Method method,
                                    int r, const Rational& gamma,
                                    const HierarchyConfig& cfg) {
    if (r < 1) throw std::invalid_argument("level_feasible: r must be >= 1");
    switch (method) {
        case Method::Dsos:
        case Method::Sdsos: {
            Polynomial pgr = build_p_gamma_r(pop, k, gamma, r);
            return dsos_certify(pgr, r, method == Method::Sdsos, cfg.budget,
                                cfg.tolerances);
        }
        default: {
            ReducedForm f = build_f_gamma(pop, k, gamma);
            Polynomial test =
                f.form - Rational(1, r) * sum_of_even_powers(k.N, 2, k.D);
            if (method == Method::Polya)
                return polya_certify(test, r, cfg.polya_term_budget);
            if (method == Method::Reznick)
                return reznick_certify(test, r, cfg.budget, cfg.tolerances);
            return artin_certify(test, r, cfg.budget, cfg.tolerances);
        }
    }
}

struct BisectionStep {
    Rational gamma;
    CertStatus status;
};

struct LevelResult {
    int r = 0;
    Rational l_r_eps;
    Rational m_r;
    std::optional<Certificate> certificate;
    std::vector<BisectionStep> trace;
    double wall_seconds = 0.0;
    std::string note;
};

struct HierarchyResult {
    Rational L0, U0;
    std::vector<LevelResult> levels;
};

struct BisectOutcome {
    Rational value;
    std::optional<Certificate> certificate;
    std::vector<BisectionStep> trace;
};

/// Classic bisection on gamma: midpoint certified -> raise L, otherwise
/// lower U; stops when |U - L| < epsilon and returns the final L, so any
/// value above L0 carries the certificate of its last accepted midpoint.
/// `test` is any gamma -> CertifyResult functor.
template <typename F>
BisectOutcome bisect(F&& test, const Rational& L0, const Rational& U0,
                     const Rational& epsilon) {
    if (!(L0 < U0)) throw std::invalid_argument("bisect: need L0 < U0");
    if (epsilon <= 0)
        throw std::invalid_argument("bisect: epsilon must be positive");
    BisectOutcome out;
    Rational L = L0, U = U0;
    while (U - L >= epsilon) {
        Rational mid = (L + U) / 2;
        CertifyResult res = test(mid);
        out.trace.push_back({mid, res.status});
        if (res.accepted()) {
            L = mid;
            out.certificate = std::move(res.cert);
        } else {
            U = mid;
        }
    }
    out.value = L;
    return out;
}

inline LevelResult bisect_level(const PopInstance& pop, const PopConstants& k,
                                Method method, int r, const Rational& L0,
                                const Rational& U0, const Rational& epsilon,
                                const HierarchyConfig& cfg) {
    if (L0 < gamma_floor(pop, k))
        throw std::invalid_argument("bisect_level: L0 below the gamma floor");
    auto t0 = std::chrono::steady_clock::now();
    LevelResult lr;
    lr.r = r;
    BisectOutcome out = bisect(
        [&](const Rational& gamma) {
            return level_feasible(pop, k, method, r, gamma, cfg);
        },
        L0, U0, epsilon);
    lr.l_r_eps = std::move(out.value);
    lr.certificate = std::move(out.certificate);
    lr.trace = std::move(out.trace);
    lr.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return lr;
}

/// L0 respects the gamma floor with a 1/1000 margin when the floor binds;
/// U0 is an oracle feasible value when one is found at desk scale, else
/// the coarse monomial bound on the objective.
inline std::pair<Rational, Rational> default_brackets(const PopInstance& pop,
                                                      const PopConstants& k) {
    Rational floor = gamma_floor(pop, k);
    Rational cand = -k.beta - 1;
    Rational L0 = cand >= floor ? cand : floor + make_rational(1, 1000);
    Rational U0;
    bool have_u = false;
    if (pop.nvars() <= 3) {
        oracle::OracleReport rep = oracle::grid_minimize(pop, 21);
        if (rep.has_estimate) {
            U0 = rep.estimate;
            have_u = true;
        }
    }
    if (!have_u) U0 = monomial_bound(pop.objective, pop.radius_sq);
    if (U0 <= L0) U0 = L0 + 1;
    return {L0, U0};
}

/// Runs levels r_min..r_max, recording l_{r,eps} and the running maximum
/// m_r; per-level failures are recorded and the run continues.
inline HierarchyResult run_hierarchy(const PopInstance& pop,
                                     const HierarchyConfig& cfg) {
    PopConstants k = compute_constants(pop);
    HierarchyResult out;
    if (cfg.brackets) {
        out.L0 = cfg.brackets->first;
        out.U0 = cfg.brackets->second;
    } else {
        auto [L0, U0] = default_brackets(pop, k);
        out.L0 = L0;
        out.U0 = U0;
    }
    Rational m_r;
    bool have_m = false;
    for (int r = cfg.r_min; r <= cfg.r_max; ++r) {
        LevelResult lr;
        try {
            lr = bisect_level(pop, k, cfg.method, r, out.L0, out.U0,
                              cfg.epsilon, cfg);
        } catch (const std::exception& e) {
            lr.r = r;
            lr.l_r_eps = out.L0;
            lr.note = e.what();
        }
        if (!have_m || lr.l_r_eps > m_r) m_r = lr.l_r_eps;
        have_m = true;
        lr.m_r = m_r;
        out.levels.push_back(std::move(lr));
    }
    return out;
}

}  // namespace psatz

#endif
