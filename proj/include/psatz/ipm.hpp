#ifndef PSATZ_IPM_HPP
#define PSATZ_IPM_HPP

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <vector>

namespace psatz::conic {

/// Coefficient of X(i,j) (i <= j, counted once) in a linear functional of a
/// block-diagonal symmetric matrix variable.
struct MatCoeff {
    int block;
    int i;
    int j;
    double value;
};

/// Standard-form semidefinite program over block-diagonal X >= 0:
///   minimize  <C,X>   subject to  <A_k,X> = b_k.
/// Linear programs are the all-1x1-blocks special case.
struct SdpProblem {
    std::vector<int> block_sizes;
    std::vector<std::vector<MatCoeff>> constraints;
    std::vector<double> b;
    std::vector<MatCoeff> objective;
};

enum class IpmStatus { Converged, MaxIterations, Stalled, NumericalFailure };

struct IpmOptions {
    int max_iterations = 200;
    double tol_gap = 1e-10;
    double tol_feas = 1e-10;
    double step_fraction = 0.98;
};

struct IpmResult {
    IpmStatus status = IpmStatus::NumericalFailure;
    std::vector<Eigen::MatrixXd> X;
    std::vector<double> y;
    std::vector<Eigen::MatrixXd> Z;
    double primal_obj = 0.0;
    double dual_obj = 0.0;
    double primal_infeas = 0.0;  // ||b - A(X)||_inf
    double dual_infeas = 0.0;    // ||C - Z - sum y_k A_k||_max
    double gap = 0.0;            // <X,Z>
    int iterations = 0;
};

namespace detail {

using BlockMats = std::vector<Eigen::MatrixXd>;

inline void add_scaled(BlockMats& target, const std::vector<MatCoeff>& coeffs,
                       double s) {
    for (const auto& c : coeffs) {
        if (c.i == c.j) {
            target[c.block](c.i, c.i) += c.value * s;
        } else {
            target[c.block](c.i, c.j) += 0.5 * c.value * s;
            target[c.block](c.j, c.i) += 0.5 * c.value * s;
        }
    }
}

inline double inner(const std::vector<MatCoeff>& coeffs, const BlockMats& M) {
    double total = 0.0;
    for (const auto& c : coeffs) total += c.value * M[c.block](c.i, c.j);
    return total;
}

inline double dot(const BlockMats& A, const BlockMats& B) {
    double total = 0.0;
    for (size_t l = 0; l < A.size(); ++l)
        total += (A[l].array() * B[l].array()).sum();
    return total;
}

/// Largest a in (0,1] with M + a*dM staying positive definite, via the
/// minimum eigenvalue of L^{-1} dM L^{-T}.
inline double max_step(const BlockMats& M, const BlockMats& dM,
                       double fraction) {
    double alpha = 1.0;
    for (size_t l = 0; l < M.size(); ++l) {
        if (M[l].rows() == 1) {
            double m = M[l](0, 0), d = dM[l](0, 0);
            if (d < 0.0) alpha = std::min(alpha, -fraction * m / d);
            continue;
        }
        Eigen::LLT<Eigen::MatrixXd> llt(M[l]);
        if (llt.info() != Eigen::Success) return 0.0;
        Eigen::MatrixXd W = llt.matrixL().solve(dM[l]);
        W = llt.matrixL().solve(W.transpose().eval());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
            0.5 * (W + W.transpose()), Eigen::EigenvaluesOnly);
        double lmin = es.eigenvalues().minCoeff();
        if (lmin < 0.0) alpha = std::min(alpha, -fraction / lmin);
    }
    return alpha;
}

}  // namespace detail

/// Infeasible-start primal-dual path-following method (HKM direction with a
/// Mehrotra-style corrector).  Dense linear algebra throughout; intended for
/// problems with at most a few thousand equalities and modest block sizes.
inline IpmResult solve_sdp(const SdpProblem& prob, const IpmOptions& opt = {}) {
    using detail::BlockMats;
    const int m = static_cast<int>(prob.constraints.size());
    const size_t L = prob.block_sizes.size();
    int ntot = 0;
    for (int s : prob.block_sizes) ntot += s;

    IpmResult res;
    res.y.assign(m, 0.0);
    if (m == 0 || ntot == 0) {
        res.status = IpmStatus::Converged;
        for (int s : prob.block_sizes)
            res.X.push_back(Eigen::MatrixXd::Identity(s, s));
        res.Z = res.X;
        return res;
    }

    // Initial scaling from the data magnitudes.
    double bscale = 1.0, ascale = 1.0;
    for (double v : prob.b) bscale = std::max(bscale, std::abs(v));
    for (const auto& row : prob.constraints)
        for (const auto& c : row) ascale = std::max(ascale, std::abs(c.value));
    double init = std::max(10.0, std::sqrt(bscale * ascale));

    BlockMats X, Z;
    for (int s : prob.block_sizes) {
        X.push_back(init * Eigen::MatrixXd::Identity(s, s));
        Z.push_back(init * Eigen::MatrixXd::Identity(s, s));
    }
    std::vector<double>& y = res.y;

    // Constraint coefficients grouped by block, for Schur assembly.
    struct ConsBlock {
        int block;
        std::vector<MatCoeff> entries;
    };
    std::vector<std::vector<ConsBlock>> cons_blocks(m);
    for (int k = 0; k < m; ++k) {
        std::vector<MatCoeff> sorted = prob.constraints[k];
        std::sort(sorted.begin(), sorted.end(),
                  [](const MatCoeff& a, const MatCoeff& b) {
                      return a.block < b.block;
                  });
        for (const auto& c : sorted) {
            if (cons_blocks[k].empty() || cons_blocks[k].back().block != c.block)
                cons_blocks[k].push_back({c.block, {}});
            cons_blocks[k].back().entries.push_back(c);
        }
    }
    // Per block: the constraints touching it, with their coefficient slices.
    std::vector<std::vector<std::pair<int, const std::vector<MatCoeff>*>>>
        block_entries(L);
    for (int k = 0; k < m; ++k)
        for (const auto& cb : cons_blocks[k])
            block_entries[cb.block].push_back({k, &cb.entries});

    BlockMats Cmat;
    for (int s : prob.block_sizes) Cmat.push_back(Eigen::MatrixXd::Zero(s, s));
    detail::add_scaled(Cmat, prob.objective, 1.0);

    Eigen::VectorXd bvec(m);
    for (int k = 0; k < m; ++k) bvec(k) = prob.b[k];

    double bnorm = 1.0 + bvec.lpNorm<Eigen::Infinity>();
    double cnorm = 1.0;
    for (const auto& c : prob.objective) cnorm = std::max(cnorm, std::abs(c.value));

    auto apply_A = [&](const BlockMats& M) {
        Eigen::VectorXd v(m);
        for (int k = 0; k < m; ++k) v(k) = detail::inner(prob.constraints[k], M);
        return v;
    };

    Eigen::MatrixXd schur(m, m);
    BlockMats Rd(L), dX(L), dZ(L), dXa(L), dZa(L);
    std::vector<Eigen::LLT<Eigen::MatrixXd>> zfac(L);

    double best_merit = std::numeric_limits<double>::infinity();
    IpmResult best = res;
    int stall = 0;

    for (int iter = 0; iter < opt.max_iterations; ++iter) {
        Eigen::VectorXd rp = bvec - apply_A(X);
        for (size_t l = 0; l < L; ++l) Rd[l] = Cmat[l] - Z[l];
        for (int k = 0; k < m; ++k)
            if (y[k] != 0.0) detail::add_scaled(Rd, prob.constraints[k], -y[k]);

        double gap = detail::dot(X, Z);
        double mu = gap / ntot;
        double pinf = rp.lpNorm<Eigen::Infinity>() / bnorm;
        double dinf = 0.0;
        for (const auto& Mb : Rd)
            dinf = std::max(dinf, Mb.cwiseAbs().maxCoeff());
        dinf /= cnorm;

        res.primal_obj = detail::inner(prob.objective, X);
        res.dual_obj = bvec.dot(Eigen::Map<Eigen::VectorXd>(y.data(), m));
        double relgap =
            gap / (1.0 + std::abs(res.primal_obj) + std::abs(res.dual_obj));

        res.X = X;
        res.Z = Z;
        res.primal_infeas = pinf;
        res.dual_infeas = dinf;
        res.gap = gap;
        res.iterations = iter;

        double merit = relgap + pinf + dinf;
        if (merit < best_merit) {
            best_merit = merit;
            best = res;
            stall = 0;
        } else if (++stall > 8) {
            best.status = IpmStatus::Stalled;
            return best;
        }

        if (relgap < opt.tol_gap && pinf < opt.tol_feas && dinf < opt.tol_feas) {
            res.status = IpmStatus::Converged;
            return res;
        }

        // Factor Z and precompute Z^{-1}.
        bool ok = true;
        for (size_t l = 0; l < L; ++l) {
            zfac[l].compute(Z[l]);
            if (zfac[l].info() != Eigen::Success) { ok = false; break; }
        }
        if (!ok) {
            best.status = IpmStatus::NumericalFailure;
            return best;
        }

        // Schur matrix M_lk = <A_l, Z^{-1} A_k X> assembled columnwise.
        schur.setZero();
        for (int k = 0; k < m; ++k) {
            for (const auto& cb : cons_blocks[k]) {
                const int bl = cb.block;
                const int n = prob.block_sizes[bl];
                Eigen::MatrixXd AX = Eigen::MatrixXd::Zero(n, n);
                for (const auto& c : cb.entries) {
                    if (c.i == c.j) {
                        AX.row(c.i) += c.value * X[bl].row(c.i);
                    } else {
                        AX.row(c.i) += 0.5 * c.value * X[bl].row(c.j);
                        AX.row(c.j) += 0.5 * c.value * X[bl].row(c.i);
                    }
                }
                Eigen::MatrixXd S = zfac[bl].solve(AX);
                for (const auto& [l2, ent] : block_entries[bl]) {
                    double acc = 0.0;
                    for (const auto& c : *ent) {
                        if (c.i == c.j)
                            acc += c.value * S(c.i, c.i);
                        else
                            acc += 0.5 * c.value * (S(c.i, c.j) + S(c.j, c.i));
                    }
                    schur(l2, k) += acc;
                }
            }
        }
        schur = 0.5 * (schur + schur.transpose().eval());
        for (int k = 0; k < m; ++k) schur(k, k) += 1e-13 * (1.0 + schur(k, k));
        Eigen::LDLT<Eigen::MatrixXd> mfac(schur);
        if (mfac.info() != Eigen::Success) {
            best.status = IpmStatus::NumericalFailure;
            return best;
        }

        auto solve_direction = [&](double sigma_mu, const BlockMats* corr,
                                   BlockMats& outdX, BlockMats& outdZ,
                                   Eigen::VectorXd& dy) {
            // dX = sigma*mu*Z^{-1} - X - Z^{-1}(Rd - sum dy A)X - Z^{-1}corr
            BlockMats base(L);
            for (size_t l = 0; l < L; ++l) {
                const int n = prob.block_sizes[l];
                base[l] =
                    sigma_mu * zfac[l].solve(Eigen::MatrixXd::Identity(n, n)) -
                    X[l] - zfac[l].solve(Rd[l] * X[l]);
                if (corr) base[l] -= zfac[l].solve((*corr)[l]);
            }
            Eigen::VectorXd rhs = rp;
            for (int k = 0; k < m; ++k) {
                double t = 0.0;
                for (const auto& c : prob.constraints[k]) {
                    if (c.i == c.j)
                        t += c.value * base[c.block](c.i, c.i);
                    else
                        t += 0.5 * c.value *
                             (base[c.block](c.i, c.j) + base[c.block](c.j, c.i));
                }
                rhs(k) -= t;
            }
            dy = mfac.solve(rhs);
            for (size_t l = 0; l < L; ++l) outdZ[l] = Rd[l];
            for (int k = 0; k < m; ++k)
                if (dy(k) != 0.0)
                    detail::add_scaled(outdZ, prob.constraints[k], -dy(k));
            for (size_t l = 0; l < L; ++l) {
                base[l] -= zfac[l].solve((outdZ[l] - Rd[l]) * X[l]);
                outdX[l] = 0.5 * (base[l] + base[l].transpose().eval());
            }
        };

        // Predictor.
        Eigen::VectorXd dya(m), dy(m);
        solve_direction(0.0, nullptr, dXa, dZa, dya);
        double ap = detail::max_step(X, dXa, opt.step_fraction);
        double ad = detail::max_step(Z, dZa, opt.step_fraction);
        double mu_aff = 0.0;
        {
            BlockMats Xt(L), Zt(L);
            for (size_t l = 0; l < L; ++l) {
                Xt[l] = X[l] + ap * dXa[l];
                Zt[l] = Z[l] + ad * dZa[l];
            }
            mu_aff = detail::dot(Xt, Zt) / ntot;
        }
        double sigma = std::pow(std::max(mu_aff, 0.0) / mu, 3.0);
        sigma = std::min(0.9, std::max(1e-6, sigma));

        // Corrector with the second-order term dZa * dXa.
        BlockMats corr(L);
        for (size_t l = 0; l < L; ++l) corr[l] = dZa[l] * dXa[l];
        solve_direction(sigma * mu, &corr, dX, dZ, dy);

        ap = detail::max_step(X, dX, opt.step_fraction);
        ad = detail::max_step(Z, dZ, opt.step_fraction);
        if (ap <= 1e-14 || ad <= 1e-14) {
            best.status = IpmStatus::Stalled;
            return best;
        }
        for (size_t l = 0; l < L; ++l) {
            X[l] += ap * dX[l];
            Z[l] += ad * dZ[l];
        }
        for (int k = 0; k < m; ++k) y[k] += ad * dy(k);
    }

    best.status = IpmStatus::MaxIterations;
    return best;
}

}  // namespace psatz::conic

#endif
