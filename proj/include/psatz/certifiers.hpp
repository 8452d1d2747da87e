#ifndef PSATZ_CERTIFIERS_HPP
#define PSATZ_CERTIFIERS_HPP

#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include "psatz/conic.hpp"
#include "psatz/polynomial.hpp"
#include "psatz/reduction.hpp"

namespace psatz {

enum class CertStatus { Accept, Reject, Unknown, BudgetExceeded };

inline const char* to_string(CertStatus s) {
    switch (s) {
        case CertStatus::Accept: return "accept";
        case CertStatus::Reject: return "reject";
        case CertStatus::Unknown: return "unknown";
        case CertStatus::BudgetExceeded: return "budget-exceeded";
    }
    return "?";
}

enum class CertKind { Polya, Reznick, Artin, Dsos, Sdsos };

inline const char* to_string(CertKind k) {
    switch (k) {
        case CertKind::Polya: return "polya";
        case CertKind::Reznick: return "reznick";
        case CertKind::Artin: return "artin";
        case CertKind::Dsos: return "dsos";
        case CertKind::Sdsos: return "sdsos";
    }
    return "?";
}

struct GramBlock {
    std::vector<Monomial> basis;
    Eigen::MatrixXd G;
    conic::BlockKind kind = conic::BlockKind::Psd;
};

using NumericTerms = std::map<Monomial, double, GradedLexLess>;

/// Self-contained positivity certificate; verify_certificate re-checks it
/// without solver state.
struct Certificate {
    CertKind kind;
    int level = 0;
    // Polya: the fully expanded product and its minimum coefficient.
    Polynomial expanded;
    Rational min_coeff;
    Monomial min_monomial;
    // Gram kinds: the exact base polynomial (p*(sum x^2)^r for Reznick,
    // p for Artin, p_{gamma,r} for dsos/sdsos), the Gram blocks for it
    // (times the multiplier), and the multiplier data.
    Polynomial target;
    std::vector<GramBlock> grams;
    std::vector<GramBlock> q_grams;
    NumericTerms multiplier;  // q, reconstructed from q_grams
    bool exact_roundtrip = false;
};

struct CertifyResult {
    CertStatus status = CertStatus::Unknown;
    Certificate cert;
    std::string reason;
    bool accepted() const { return status == CertStatus::Accept; }
};

inline long polya_term_budget() {
    if (const char* env = std::getenv("PSATZ_BUDGET_TERMS")) {
        long v = std::atol(env);
        if (v > 0) return v;
    }
    return 5000000;
}

namespace detail {

/// C(deg + nvars - 1, nvars - 1), saturating.
inline double monomial_count(int nvars, int degree) {
    double c = 1.0;
    for (int i = 1; i < nvars; ++i)
        c *= static_cast<double>(degree + i) / i;
    return c;
}

inline NumericTerms reconstruct(const std::vector<GramBlock>& blocks) {
    NumericTerms out;
    for (const auto& gb : blocks) {
        const int n = static_cast<int>(gb.basis.size());
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double v = (i == j ? 1.0 : 2.0) * gb.G(i, j);
                if (v == 0.0) continue;
                out[gb.basis[i] * gb.basis[j]] += v;
            }
    }
    return out;
}

inline NumericTerms convolve(const Polynomial& a, const NumericTerms& b) {
    NumericTerms out;
    for (const auto& [ma, ca] : a.terms()) {
        double da = ca.get_d();
        for (const auto& [mb, cb] : b) out[ma * mb] += da * cb;
    }
    return out;
}

inline double max_residual(const NumericTerms& a, const NumericTerms& b) {
    double r = 0.0;
    for (const auto& [m, v] : a) {
        auto it = b.find(m);
        r = std::max(r, std::abs(v - (it == b.end() ? 0.0 : it->second)));
    }
    for (const auto& [m, v] : b)
        if (!a.count(m)) r = std::max(r, std::abs(v));
    return r;
}

inline NumericTerms to_numeric(const Polynomial& p) {
    NumericTerms out;
    for (const auto& [m, c] : p.terms()) out[m] = c.get_d();
    return out;
}

inline bool block_class_ok(const GramBlock& gb, const conic::Tolerances& tol) {
    switch (gb.kind) {
        case conic::BlockKind::Psd: return conic::check_psd(gb.G, tol);
        case conic::BlockKind::Dd: return conic::check_dd(gb.G);
        case conic::BlockKind::Sdd: return conic::check_sdd(gb.G, nullptr, tol);
        case conic::BlockKind::Nonneg:
            return gb.G.diagonal().minCoeff() >= 0.0;
    }
    return false;
}

/// Groups basis monomials by exponent parity pattern; products within one
/// class have all-even exponents.
inline std::vector<std::vector<Monomial>> parity_classes(
    const std::vector<Monomial>& basis) {
    std::map<std::vector<int>, std::vector<Monomial>> groups;
    for (const auto& m : basis) {
        std::vector<int> key(m.exp.size());
        for (size_t i = 0; i < m.exp.size(); ++i) key[i] = m.exp[i] % 2;
        groups[key].push_back(m);
    }
    std::vector<std::vector<Monomial>> out;
    for (auto& [k, v] : groups) out.push_back(std::move(v));
    return out;
}

inline void require_even_form_degree(const Polynomial& p, const char* who) {
    if (!p.is_homogeneous() || p.is_zero())
        throw std::invalid_argument(std::string(who) +
                                    ": input must be a nonzero form");
    if (p.degree() % 2 != 0)
        throw std::invalid_argument(std::string(who) +
                                    ": form degree must be even");
}

}  // namespace detail

/// Re-checks a certificate from its own data: exact coefficient scan for
/// Polya, matrix class checks plus reconstruction residual for Gram kinds.
inline bool verify_certificate(const Certificate& cert,
                               const conic::Tolerances& tol =
                                   conic::default_tolerances()) {
    using namespace detail;
    if (cert.kind == CertKind::Polya) {
        auto [c, m] = min_coefficient(cert.expanded);
        return c >= 0;
    }
    for (const auto& gb : cert.grams)
        if (!block_class_ok(gb, tol)) return false;
    for (const auto& gb : cert.q_grams)
        if (!block_class_ok(gb, tol)) return false;
    NumericTerms recon = reconstruct(cert.grams);
    NumericTerms want;
    if (cert.kind == CertKind::Reznick) {
        want = to_numeric(cert.target);
    } else {
        if (cert.multiplier.empty()) return false;
        double trace = 0.0;
        for (const auto& gb : cert.q_grams) trace += gb.G.trace();
        if (std::abs(trace - 1.0) > 1e-6) return false;
        want = convolve(cert.target, cert.multiplier);
    }
    return max_residual(recon, want) <= tol.reconstruction;
}

/// Exact test: (p(v^2-w^2) + (1/2r)(sum v^4+w^4)^d) * (sum v^2+w^2)^{r^2}
/// has nonnegative coefficients.  Reject carries the most negative
/// coefficient and its monomial.
inline CertifyResult polya_certify(const Polynomial& p, int r,
                                   long term_budget = polya_term_budget()) {
    detail::require_even_form_degree(p, "polya_certify");
    if (r < 1) throw std::invalid_argument("polya_certify: r must be >= 1");
    const int n = p.nvars();
    const int d = p.degree() / 2;

    CertifyResult res;
    res.cert.kind = CertKind::Polya;
    res.cert.level = r;

    double est = detail::monomial_count(2 * n, 4 * d + 2 * r * r);
    if (est > static_cast<double>(term_budget)) {
        res.status = CertStatus::BudgetExceeded;
        res.reason = "estimated expansion of ~" + std::to_string(est) +
                     " terms exceeds budget " + std::to_string(term_budget);
        return res;
    }

    Polynomial inner = even_lift(p) +
                       Rational(1, 2 * r) * sum_of_even_powers(2 * n, 4, d);
    Polynomial product =
        inner * sum_of_even_powers(2 * n, 2,
                                   static_cast<unsigned long>(r) * r);
    auto [minc, mono] = min_coefficient(product);
    res.cert.expanded = std::move(product);
    res.cert.min_coeff = minc;
    res.cert.min_monomial = mono;
    res.status = minc >= 0 ? CertStatus::Accept : CertStatus::Reject;
    if (res.status == CertStatus::Reject)
        res.reason = "minimum coefficient " + to_string(minc);
    return res;
}

/// SOS test for p * (sum x^2)^r via a single PSD Gram block.
inline CertifyResult reznick_certify(const Polynomial& p, int r,
                                     const conic::SolveBudget& budget = {},
                                     const conic::Tolerances& tol =
                                         conic::default_tolerances()) {
    detail::require_even_form_degree(p, "reznick_certify");
    if (r < 0) throw std::invalid_argument("reznick_certify: r must be >= 0");
    const int n = p.nvars();

    CertifyResult res;
    res.cert.kind = CertKind::Reznick;
    res.cert.level = r;

    Polynomial target =
        p * sum_of_even_powers(n, 2, static_cast<unsigned long>(r));
    const int half = target.degree() / 2;
    if (detail::monomial_count(n, 2 * half) >
        static_cast<double>(budget.max_equalities)) {
        res.status = CertStatus::BudgetExceeded;
        res.reason = "Gram system larger than the equality budget";
        return res;
    }

    std::vector<Monomial> basis = conic::monomial_basis(n, half);
    conic::ConeProgram prog;
    prog.blocks.push_back({conic::BlockKind::Psd,
                           static_cast<int>(basis.size())});
    conic::gram_setup(prog, 0, basis, target);

    conic::ConeStatus st = conic::solve(prog, budget, tol);
    switch (st.kind) {
        case conic::ConeStatus::Kind::Feasible: {
            res.cert.target = target;
            res.cert.grams.push_back(
                {basis, st.assignment.blocks[0], conic::BlockKind::Psd});
            if (!verify_certificate(res.cert, tol)) {
                res.status = CertStatus::Unknown;
                res.reason = "certificate failed re-verification";
                return res;
            }
            // Exact rational round-trip of the Gram matrix when it stays
            // within the reconstruction tolerance.
            {
                const long denom = 1L << 32;
                Polynomial exact(n);
                const auto& G = res.cert.grams[0].G;
                for (size_t i = 0; i < basis.size(); ++i)
                    for (size_t j = i; j < basis.size(); ++j) {
                        Rational q = make_rational(
                            static_cast<long>(std::llround(G(i, j) * denom)),
                            denom);
                        if (i != j) q *= 2;
                        exact.add_term(basis[i] * basis[j], q);
                    }
                Rational worst(0);
                Polynomial diff = exact - target;
                for (const auto& [m, c] : diff.terms()) {
                    Rational a = c >= 0 ? c : Rational(-c);
                    if (a > worst) worst = a;
                }
                res.cert.exact_roundtrip =
                    worst.get_d() <= tol.reconstruction;
            }
            res.status = CertStatus::Accept;
            return res;
        }
        case conic::ConeStatus::Kind::Infeasible:
            res.status = CertStatus::Reject;
            res.reason = st.reason;
            return res;
        case conic::ConeStatus::Kind::BudgetExceeded:
            res.status = CertStatus::BudgetExceeded;
            res.reason = st.reason;
            return res;
        default:
            res.status = CertStatus::Unknown;
            res.reason = st.reason;
            return res;
    }
}

/// Joint SOS search: q of degree 2r with q sos, p*q sos, trace(Gram_q) = 1.
inline CertifyResult artin_certify(const Polynomial& p, int r,
                                   const conic::SolveBudget& budget = {},
                                   const conic::Tolerances& tol =
                                       conic::default_tolerances()) {
    detail::require_even_form_degree(p, "artin_certify");
    if (r < 0) throw std::invalid_argument("artin_certify: r must be >= 0");
    const int n = p.nvars();
    const int d = p.degree() / 2;

    CertifyResult res;
    res.cert.kind = CertKind::Artin;
    res.cert.level = r;

    if (detail::monomial_count(n, 2 * (d + r)) >
        static_cast<double>(budget.max_equalities)) {
        res.status = CertStatus::BudgetExceeded;
        res.reason = "Gram system larger than the equality budget";
        return res;
    }

    std::vector<Monomial> basis = conic::monomial_basis(n, d + r);
    std::vector<Monomial> qbasis = conic::monomial_basis(n, r);

    conic::ConeProgram prog;
    prog.blocks.push_back({conic::BlockKind::Psd,
                           static_cast<int>(basis.size())});
    prog.blocks.push_back({conic::BlockKind::Psd,
                           static_cast<int>(qbasis.size())});
    conic::GramBuilder gb(n);
    gb.add_gram(0, basis, Rational(1));
    gb.add_gram(1, qbasis, Rational(-1), &p);
    gb.set_target(Polynomial::zero(n));
    gb.emit(prog);
    {
        conic::Equality trace;
        for (size_t i = 0; i < qbasis.size(); ++i)
            trace.terms.push_back({false, 0, 1, static_cast<int>(i),
                                   static_cast<int>(i), Rational(1)});
        trace.rhs = Rational(1);
        prog.equalities.push_back(std::move(trace));
    }

    conic::ConeStatus st = conic::solve(prog, budget, tol);
    switch (st.kind) {
        case conic::ConeStatus::Kind::Feasible:
            res.cert.target = p;
            res.cert.grams.push_back(
                {basis, st.assignment.blocks[0], conic::BlockKind::Psd});
            res.cert.q_grams.push_back(
                {qbasis, st.assignment.blocks[1], conic::BlockKind::Psd});
            res.cert.multiplier = detail::reconstruct(res.cert.q_grams);
            if (!verify_certificate(res.cert, tol)) {
                res.status = CertStatus::Unknown;
                res.reason = "certificate failed re-verification";
                return res;
            }
            res.status = CertStatus::Accept;
            return res;
        case conic::ConeStatus::Kind::Infeasible:
            res.status = CertStatus::Reject;
            res.reason = st.reason;
            return res;
        case conic::ConeStatus::Kind::BudgetExceeded:
            res.status = CertStatus::BudgetExceeded;
            res.reason = st.reason;
            return res;
        default:
            res.status = CertStatus::Unknown;
            res.reason = st.reason;
            return res;
    }
}

/// LP (dd) / SOCP-equivalent (sdd) search for a multiplier q of degree
/// 2r^2 with q and pgr*q both dsos (resp. sdsos).  Both Gram matrices are
/// restricted to the parity-class block diagonal, which keeps every
/// equality on even monomials; this inner approximation still contains the
/// diagonal certificates that make the hierarchy converge.
inline CertifyResult dsos_certify(const Polynomial& pgr, int r, bool sdd_mode,
                                  const conic::SolveBudget& budget = {},
                                  const conic::Tolerances& tol =
                                      conic::default_tolerances()) {
    detail::require_even_form_degree(pgr, "dsos_certify");
    if (r < 1) throw std::invalid_argument("dsos_certify: r must be >= 1");
    if (!is_even_form(pgr))
        throw std::invalid_argument("dsos_certify: input must be an even form");
    const int nv = pgr.nvars();
    const int half = pgr.degree() / 2 + r * r;

    CertifyResult res;
    res.cert.kind = sdd_mode ? CertKind::Sdsos : CertKind::Dsos;
    res.cert.level = r;

    if (detail::monomial_count(nv, half) >
        static_cast<double>(budget.max_equalities)) {
        res.status = CertStatus::BudgetExceeded;
        res.reason = "Gram system larger than the equality budget";
        return res;
    }

    conic::BlockKind kind =
        sdd_mode ? conic::BlockKind::Sdd : conic::BlockKind::Dd;
    std::vector<Monomial> basis = conic::monomial_basis(nv, half);
    std::vector<Monomial> qbasis = conic::monomial_basis(nv, r * r);
    auto classes = detail::parity_classes(basis);
    auto qclasses = detail::parity_classes(qbasis);

    conic::ConeProgram prog;
    conic::GramBuilder gb(nv);
    std::vector<std::vector<Monomial>> block_bases;
    for (const auto& cls : classes) {
        int b = static_cast<int>(prog.blocks.size());
        prog.blocks.push_back({kind, static_cast<int>(cls.size())});
        gb.add_gram(b, cls, Rational(1));
        block_bases.push_back(cls);
    }
    int qfirst = static_cast<int>(prog.blocks.size());
    std::vector<std::vector<Monomial>> qblock_bases;
    for (const auto& cls : qclasses) {
        int b = static_cast<int>(prog.blocks.size());
        prog.blocks.push_back({kind, static_cast<int>(cls.size())});
        gb.add_gram(b, cls, Rational(-1), &pgr);
        qblock_bases.push_back(cls);
    }
    gb.set_target(Polynomial::zero(nv));
    gb.emit(prog);
    {
        conic::Equality trace;
        for (size_t c = 0; c < qclasses.size(); ++c)
            for (size_t i = 0; i < qclasses[c].size(); ++i)
                trace.terms.push_back({false, 0,
                                       qfirst + static_cast<int>(c),
                                       static_cast<int>(i),
                                       static_cast<int>(i), Rational(1)});
        trace.rhs = Rational(1);
        prog.equalities.push_back(std::move(trace));
    }

    conic::ConeStatus st = conic::solve(prog, budget, tol);
    switch (st.kind) {
        case conic::ConeStatus::Kind::Feasible:
            res.cert.target = pgr;
            for (size_t c = 0; c < block_bases.size(); ++c)
                res.cert.grams.push_back(
                    {block_bases[c], st.assignment.blocks[c], kind});
            for (size_t c = 0; c < qblock_bases.size(); ++c)
                res.cert.q_grams.push_back(
                    {qblock_bases[c], st.assignment.blocks[qfirst + c], kind});
            res.cert.multiplier = detail::reconstruct(res.cert.q_grams);
            if (!verify_certificate(res.cert, tol)) {
                res.status = CertStatus::Unknown;
                res.reason = "certificate failed re-verification";
                return res;
            }
            res.status = CertStatus::Accept;
            return res;
        case conic::ConeStatus::Kind::Infeasible:
            res.status = CertStatus::Reject;
            res.reason = st.reason;
            return res;
        case conic::ConeStatus::Kind::BudgetExceeded:
            res.status = CertStatus::BudgetExceeded;
            res.reason = st.reason;
            return res;
        default:
            res.status = CertStatus::Unknown;
            res.reason = st.reason;
            return res;
    }
}

struct PolyaBoundReport {
    Rational lambda;
    Rational norm;
    long nbar = 0;
    int d = 0;
    std::optional<Rational> c_gamma;
    std::optional<long> r_hat;
};

namespace detail {

inline mpz_class factorial(int k) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(k));
    return f;
}

/// max_alpha |a_alpha| * (prod alpha_i!) / (2d)! over the terms of a
/// degree-2d form.
inline Rational weighted_norm(const Polynomial& f) {
    const int deg = f.degree();
    mpz_class dfac = factorial(deg);
    Rational best(0);
    for (const auto& [m, c] : f.terms()) {
        mpz_class num(1);
        for (int e : m.exp)
            if (e > 1) num *= factorial(e);
        Rational b = c * make_rational(num, dfac);
        if (b < 0) b = -b;
        if (b > best) best = b;
    }
    return best;
}

/// Smallest integer strictly greater than q, clamped at zero.
inline long strict_ceil_nonneg(const Rational& q) {
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    long v = fl.get_si() + 1;
    return v < 0 ? 0 : v;
}

}  // namespace detail

/// Exponent bound: smallest N such that f * (sum x)^N has nonnegative
/// coefficients is at most the returned nbar, given a positive lower bound
/// lambda on min of f over the unit simplex.
inline PolyaBoundReport powers_reznick_nbar(const Polynomial& f,
                                            const Rational& lambda) {
    detail::require_even_form_degree(f, "powers_reznick_nbar");
    if (lambda <= 0)
        throw std::invalid_argument("powers_reznick_nbar: lambda must be > 0");
    PolyaBoundReport rep;
    rep.d = f.degree() / 2;
    rep.lambda = lambda;
    rep.norm = detail::weighted_norm(f);
    Rational bound =
        Rational(rep.d) * Rational(2 * rep.d - 1) * rep.norm / lambda -
        Rational(2 * rep.d);
    rep.nbar = detail::strict_ceil_nonneg(bound);
    return rep;
}

/// For an even pd form p: halves every exponent and applies the simplex
/// bound with lambda = beta (a lower bound on min of p over the sphere),
/// so p * (sum x^2)^nbar has nonnegative coefficients.
inline PolyaBoundReport even_form_nbar(const Polynomial& p,
                                       const Rational& beta) {
    if (!is_even_form(p))
        throw std::invalid_argument("even_form_nbar: input is not an even form");
    Polynomial q(p.nvars());
    for (const auto& [m, c] : p.terms()) {
        Monomial half(m);
        for (int& e : half.exp) e /= 2;
        q.add_term(half, c);
    }
    if (q.degree() % 2 != 0)
        throw std::invalid_argument(
            "even_form_nbar: halved form has odd degree " +
            std::to_string(q.degree()));
    return powers_reznick_nbar(q, beta);
}

/// Diagnostic level estimate: a level r_hat beyond which the r^2 power of
/// the simple multiplier outstrips the required exponent bound, computed
/// from three exact weighted norms of degree-2D data.  r0 is a caller-
/// estimated level at which f_gamma - (1/r0)(sum z^2)^D is pd.
inline PolyaBoundReport r_hat_bound(const PopInstance& pop,
                                    const PopConstants& k,
                                    const Rational& gamma, int r0) {
    if (r0 < 1) throw std::invalid_argument("r_hat_bound: r0 must be >= 1");
    ReducedForm f = build_f_gamma(pop, k, gamma);
    const int N = k.N;
    const int D = k.D;

    // f_gamma(v - w) in 2N variables (v_1..v_N, w_1..w_N).
    Polynomial fbar(2 * N);
    {
        std::vector<Polynomial> subst;
        for (int i = 0; i < N; ++i)
            subst.push_back(Polynomial::variable(2 * N, i) -
                            Polynomial::variable(2 * N, N + i));
        for (const auto& [m, c] : f.form.terms()) {
            Polynomial t = Polynomial::constant(2 * N, c);
            for (int i = 0; i < N; ++i)
                if (m.exp[i] != 0) t = t * subst[i].pow(m.exp[i]);
            fbar = fbar + t;
        }
    }
    Polynomial diffs(2 * N);
    Polynomial sums(2 * N);
    for (int i = 0; i < N; ++i) {
        Polynomial v = Polynomial::variable(2 * N, i);
        Polynomial w = Polynomial::variable(2 * N, N + i);
        diffs = diffs + (v - w) * (v - w);
        sums = sums + v * v + w * w;
    }
    Rational c_gamma = detail::weighted_norm(fbar) +
                       detail::weighted_norm(diffs.pow(D)) +
                       detail::weighted_norm(sums.pow(D));

    Rational raw = Rational(D) * Rational(2 * D - 1) *
                   rational_pow(Rational(2), D + 1) *
                   rational_pow(Rational(N), D) * c_gamma;
    mpz_class ceilv;
    mpz_cdiv_q(ceilv.get_mpz_t(), raw.get_num_mpz_t(), raw.get_den_mpz_t());
    long r_hat = std::max(static_cast<long>(r0), ceilv.get_si());

    PolyaBoundReport rep;
    rep.d = D;
    rep.norm = c_gamma;
    rep.c_gamma = c_gamma;
    rep.r_hat = r_hat;
    return rep;
}

}  // namespace psatz

#endif
