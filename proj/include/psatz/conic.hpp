#ifndef PSATZ_CONIC_HPP
#define PSATZ_CONIC_HPP

#include <Eigen/Dense>

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "psatz/ipm.hpp"
#include "psatz/polynomial.hpp"

namespace psatz::conic {

/// Pinned numerical tolerances, printed with every result.
struct Tolerances {
    double equality_residual = 1e-8;
    double psd_min_eig = -1e-9;
    double reconstruction = 1e-7;
    double infeasibility_margin = 1e-7;
};

inline const Tolerances& default_tolerances() {
    static const Tolerances t;
    return t;
}

/// M_ii >= sum_{j != i} |M_ij|, exact comparisons.
inline bool check_dd(const Eigen::MatrixXd& M) {
    if (M.rows() != M.cols() || !M.isApprox(M.transpose()))
        throw std::invalid_argument("check_dd: matrix not symmetric");
    for (int i = 0; i < M.rows(); ++i) {
        double off = 0.0;
        for (int j = 0; j < M.cols(); ++j)
            if (j != i) off += std::abs(M(i, j));
        if (M(i, i) < off) return false;
    }
    return true;
}

inline bool check_psd(const Eigen::MatrixXd& M,
                      const Tolerances& tol = default_tolerances()) {
    if (M.rows() != M.cols() || !M.isApprox(M.transpose()))
        throw std::invalid_argument("check_psd: matrix not symmetric");
    if (M.rows() == 0) return true;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= tol.psd_min_eig;
}

enum class BlockKind { Nonneg, Dd, Sdd, Psd };

struct Block {
    BlockKind kind;
    int size;
};

/// A linear term: coefficient times a scalar variable or a matrix entry
/// (i <= j, counted once).
struct LinTerm {
    bool is_scalar;
    int scalar = 0;
    int block = 0;
    int i = 0;
    int j = 0;
    Rational coef;
};

struct Equality {
    std::vector<LinTerm> terms;
    Rational rhs;
};

/// Conic feasibility problem: free scalars plus tagged symmetric matrix
/// blocks, coupled by linear equalities.
struct ConeProgram {
    int num_scalars = 0;
    std::vector<Block> blocks;
    std::vector<Equality> equalities;
};

struct Assignment {
    std::vector<double> scalars;
    std::vector<Eigen::MatrixXd> blocks;
};

struct SolveBudget {
    int max_equalities = 3000;
    long max_entries = 400000;
    int max_iterations = 200;
};

struct ConeStatus {
    enum class Kind { Feasible, Infeasible, Unknown, BudgetExceeded } kind;
    Assignment assignment;       // valid for Feasible
    double margin = 0.0;         // certified bound for Infeasible
    double t_star = 0.0;         // phase-1 interior margin estimate
    double equality_residual = 0.0;
    std::string reason;

    bool feasible() const { return kind == Kind::Feasible; }
};

/// Decides scaled diagonal dominance via the linear system
/// d_i M_ii >= sum_{j != i} |M_ij| d_j, d > 0, returning diag(d) on success.
/// Declared here, defined after solve().
inline ConeStatus solve(const ConeProgram& prog, const SolveBudget& budget = {},
                        const Tolerances& tol = default_tolerances());

inline bool check_sdd(const Eigen::MatrixXd& M, Eigen::VectorXd* witness = nullptr,
                      const Tolerances& tol = default_tolerances()) {
    const int n = static_cast<int>(M.rows());
    if (M.rows() != M.cols() || !M.isApprox(M.transpose()))
        throw std::invalid_argument("check_sdd: matrix not symmetric");
    if (n == 0) return true;
    for (int i = 0; i < n; ++i) {
        if (M(i, i) < 0) return false;
        if (M(i, i) == 0.0) {
            for (int j = 0; j < n; ++j)
                if (j != i && M(i, j) != 0.0) return false;
        }
    }
    if (check_dd(M)) {
        if (witness) *witness = Eigen::VectorXd::Ones(n);
        return true;
    }
    // d_i = 1 + e_i with e_i >= 0; one slack row per i.
    ConeProgram lp;
    lp.blocks.push_back({BlockKind::Nonneg, n});  // e
    lp.blocks.push_back({BlockKind::Nonneg, n});  // slack
    for (int i = 0; i < n; ++i) {
        Equality eq;
        double row_abs = 0.0;
        eq.terms.push_back({false, 0, 0, i, i, Rational(M(i, i))});
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            double a = std::abs(M(i, j));
            row_abs += a;
            if (a != 0.0) eq.terms.push_back({false, 0, 0, j, j, Rational(-a)});
        }
        eq.terms.push_back({false, 0, 1, i, i, Rational(-1)});
        eq.rhs = Rational(row_abs - M(i, i));
        lp.equalities.push_back(std::move(eq));
    }
    ConeStatus st = solve(lp, {}, tol);
    if (!st.feasible()) return false;
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = 1.0 + std::max(0.0, st.assignment.blocks[0](i, i));
    // Repair rounding: scale until D M D is dd or the attempt degenerates.
    for (int tries = 0; tries < 64; ++tries) {
        Eigen::MatrixXd S = d.asDiagonal() * M * d.asDiagonal();
        if (check_dd(S)) {
            if (witness) *witness = d;
            return true;
        }
        // Nudge the worst row upward.
        int worst = 0;
        double worst_def = 0.0;
        for (int i = 0; i < n; ++i) {
            double off = 0.0;
            for (int j = 0; j < n; ++j)
                if (j != i) off += std::abs(S(i, j));
            double def = off - S(i, i);
            if (def > worst_def) { worst_def = def; worst = i; }
        }
        if (worst_def <= 0.0) break;
        d(worst) *= 1.0 + 1e-9 + worst_def / std::max(1e-12, M(worst, worst) * d(worst) * d(worst));
    }
    Eigen::MatrixXd S = d.asDiagonal() * M * d.asDiagonal();
    if (check_dd(S)) {
        if (witness) *witness = d;
        return true;
    }
    return false;
}

namespace detail {

/// Variable map from user-level program entries to standard-form entries.
struct Lowering {
    SdpProblem sdp;
    // For each user block: how to recover its entries from the sdp solution.
    // Entry handles are resolved lazily through these tables.
    std::vector<std::vector<int>> scalar_pos_neg;  // scalar -> {pos_blk, neg_blk}
    struct BlockMap {
        BlockKind kind;
        int size;
        int first;                 // first sdp block index for this block
        // Dd: diag entries d_i at first+i; offdiag (i<j) pos at
        // first+n+2*pair, neg at +1; slack blocks afterwards.
        // Sdd: 2x2 block per pair (i<j) starting at first.
        // Psd/Nonneg: single block / diagonal 1x1 blocks at first.
    };
    std::vector<BlockMap> block_maps;

    static int pair_index(int n, int i, int j) {
        // i < j, row-major upper triangle
        return i * n - i * (i + 1) / 2 + (j - i - 1);
    }

    /// Expands a user entry reference into standard-form coefficients.
    void expand(const LinTerm& t, double scale,
                std::vector<MatCoeff>& out) const {
        const auto& bm = block_maps[t.block];
        const int n = bm.size;
        switch (bm.kind) {
            case BlockKind::Psd:
                out.push_back({bm.first, std::min(t.i, t.j), std::max(t.i, t.j),
                               scale});
                break;
            case BlockKind::Nonneg:
                if (t.i != t.j)
                    throw std::invalid_argument(
                        "nonneg block has no off-diagonal entries");
                out.push_back({bm.first + t.i, 0, 0, scale});
                break;
            case BlockKind::Dd: {
                if (t.i == t.j) {
                    out.push_back({bm.first + t.i, 0, 0, scale});
                } else {
                    int i = std::min(t.i, t.j), j = std::max(t.i, t.j);
                    int p = bm.first + n + 2 * pair_index(n, i, j);
                    out.push_back({p, 0, 0, scale});
                    out.push_back({p + 1, 0, 0, -scale});
                }
                break;
            }
            case BlockKind::Sdd: {
                if (n == 1) {
                    out.push_back({bm.first, 0, 0, scale});
                    break;
                }
                if (t.i == t.j) {
                    for (int j = 0; j < n; ++j) {
                        if (j == t.i) continue;
                        int i = std::min(t.i, j), jj = std::max(t.i, j);
                        int blk = bm.first + pair_index(n, i, jj);
                        int d = t.i < j ? 0 : 1;
                        out.push_back({blk, d, d, scale});
                    }
                } else {
                    int i = std::min(t.i, t.j), j = std::max(t.i, t.j);
                    int blk = bm.first + pair_index(n, i, j);
                    out.push_back({blk, 0, 1, scale});
                }
                break;
            }
        }
    }
};

inline Lowering lower(const ConeProgram& prog) {
    Lowering lw;
    auto add_block = [&](int size) {
        lw.sdp.block_sizes.push_back(size);
        return static_cast<int>(lw.sdp.block_sizes.size()) - 1;
    };
    for (int s = 0; s < prog.num_scalars; ++s) {
        int p = add_block(1);
        int q = add_block(1);
        lw.scalar_pos_neg.push_back({p, q});
    }
    for (const auto& blk : prog.blocks) {
        Lowering::BlockMap bm;
        bm.kind = blk.kind;
        bm.size = blk.size;
        switch (blk.kind) {
            case BlockKind::Psd:
                bm.first = add_block(blk.size);
                break;
            case BlockKind::Nonneg:
                bm.first = add_block(1);
                for (int i = 1; i < blk.size; ++i) add_block(1);
                break;
            case BlockKind::Dd: {
                bm.first = add_block(1);  // d_0
                for (int i = 1; i < blk.size; ++i) add_block(1);
                int pairs = blk.size * (blk.size - 1) / 2;
                for (int p = 0; p < 2 * pairs; ++p) add_block(1);
                for (int i = 0; i < blk.size; ++i) add_block(1);  // slacks
                break;
            }
            case BlockKind::Sdd: {
                if (blk.size == 1) {
                    bm.first = add_block(1);
                } else {
                    bm.first = add_block(2);
                    int pairs = blk.size * (blk.size - 1) / 2;
                    for (int p = 1; p < pairs; ++p) add_block(2);
                }
                break;
            }
        }
        lw.block_maps.push_back(bm);
    }
    // Translate equalities.
    for (const auto& eq : prog.equalities) {
        std::vector<MatCoeff> row;
        for (const auto& t : eq.terms) {
            double c = t.coef.get_d();
            if (t.is_scalar) {
                row.push_back({lw.scalar_pos_neg[t.scalar][0], 0, 0, c});
                row.push_back({lw.scalar_pos_neg[t.scalar][1], 0, 0, -c});
            } else {
                lw.expand(t, c, row);
            }
        }
        lw.sdp.constraints.push_back(std::move(row));
        lw.sdp.b.push_back(eq.rhs.get_d());
    }
    // Dd row constraints: d_i - sum_{j != i}(p_ij + n_ij) - slack_i = 0.
    for (size_t ub = 0; ub < prog.blocks.size(); ++ub) {
        const auto& bm = lw.block_maps[ub];
        if (bm.kind != BlockKind::Dd) continue;
        int n = bm.size;
        int pairs = n * (n - 1) / 2;
        int slack0 = bm.first + n + 2 * pairs;
        for (int i = 0; i < n; ++i) {
            std::vector<MatCoeff> row;
            row.push_back({bm.first + i, 0, 0, 1.0});
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                int a = std::min(i, j), bb = std::max(i, j);
                int p = bm.first + n + 2 * Lowering::pair_index(n, a, bb);
                row.push_back({p, 0, 0, -1.0});
                row.push_back({p + 1, 0, 0, -1.0});
            }
            row.push_back({slack0 + i, 0, 0, -1.0});
            lw.sdp.constraints.push_back(std::move(row));
            lw.sdp.b.push_back(0.0);
        }
    }
    return lw;
}

inline Eigen::MatrixXd recover_block(const Lowering& lw, size_t ub,
                                     const std::vector<Eigen::MatrixXd>& X) {
    const auto& bm = lw.block_maps[ub];
    const int n = bm.size;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    switch (bm.kind) {
        case BlockKind::Psd:
            M = X[bm.first];
            break;
        case BlockKind::Nonneg:
            for (int i = 0; i < n; ++i)
                M(i, i) = std::max(0.0, X[bm.first + i](0, 0));
            break;
        case BlockKind::Dd: {
            for (int i = 0; i < n; ++i) M(i, i) = X[bm.first + i](0, 0);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    int p = bm.first + n + 2 * Lowering::pair_index(n, i, j);
                    double v = std::max(0.0, X[p](0, 0)) -
                               std::max(0.0, X[p + 1](0, 0));
                    M(i, j) = M(j, i) = v;
                }
            // Restore exact diagonal dominance lost to rounding.
            for (int i = 0; i < n; ++i) {
                double off = 0.0;
                for (int j = 0; j < n; ++j)
                    if (j != i) off += std::abs(M(i, j));
                if (M(i, i) < off) M(i, i) = off;
            }
            break;
        }
        case BlockKind::Sdd: {
            if (n == 1) {
                M(0, 0) = std::max(0.0, X[bm.first](0, 0));
                break;
            }
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    const Eigen::MatrixXd& P =
                        X[bm.first + Lowering::pair_index(n, i, j)];
                    M(i, i) += std::max(0.0, P(0, 0));
                    M(j, j) += std::max(0.0, P(1, 1));
                    double v = 0.5 * (P(0, 1) + P(1, 0));
                    M(i, j) += v;
                    M(j, i) += v;
                }
            break;
        }
    }
    return M;
}

}  // namespace detail

/// Phase-1 feasibility: maximizes t with X - tI >= 0 over the equalities
/// (t capped at 1), so strictly feasible programs report a positive margin
/// and cleanly infeasible ones a certified negative bound.
inline ConeStatus solve(const ConeProgram& prog, const SolveBudget& budget,
                        const Tolerances& tol) {
    ConeStatus st;
    if (prog.equalities.empty()) {
        st.kind = ConeStatus::Kind::Feasible;
        st.assignment.scalars.assign(prog.num_scalars, 0.0);
        for (const auto& b : prog.blocks)
            st.assignment.blocks.push_back(
                Eigen::MatrixXd::Identity(b.size, b.size));
        return st;
    }

    detail::Lowering lw = detail::lower(prog);

    long entries = 0;
    for (int s : lw.sdp.block_sizes) entries += static_cast<long>(s) * s;
    if (static_cast<int>(lw.sdp.constraints.size()) > budget.max_equalities ||
        entries > budget.max_entries) {
        st.kind = ConeStatus::Kind::BudgetExceeded;
        st.reason = "program size exceeds solve budget (" +
                    std::to_string(lw.sdp.constraints.size()) + " equalities, " +
                    std::to_string(entries) + " entries)";
        return st;
    }

    // Append the phase-1 scalar s (t = 1 - s) and set the objective min s.
    int sblk = static_cast<int>(lw.sdp.block_sizes.size());
    lw.sdp.block_sizes.push_back(1);
    for (size_t k = 0; k < lw.sdp.constraints.size(); ++k) {
        double tr = 0.0;
        for (const auto& c : lw.sdp.constraints[k])
            if (c.i == c.j) tr += c.value;
        if (tr != 0.0) {
            lw.sdp.constraints[k].push_back({sblk, 0, 0, -tr});
            lw.sdp.b[k] -= tr;
        }
    }
    lw.sdp.objective.push_back({sblk, 0, 0, 1.0});

    IpmOptions iopt;
    iopt.max_iterations = budget.max_iterations;
    IpmResult ipm = solve_sdp(lw.sdp, iopt);

    double t = ipm.X.empty() ? 0.0 : 1.0 - ipm.X[sblk](0, 0);
    st.t_star = t;

    bool quality = ipm.primal_infeas < 1e-7 && ipm.dual_infeas < 1e-7;

    // Certified upper bound on t from the dual objective.
    double t_upper = 1.0 - ipm.dual_obj;
    if (quality && t_upper < -tol.infeasibility_margin) {
        st.kind = ConeStatus::Kind::Infeasible;
        st.margin = -t_upper;
        st.reason = "phase-1 margin " + std::to_string(t_upper) +
                    " below -" + std::to_string(tol.infeasibility_margin);
        return st;
    }

    // Attempt extraction: X = Z + t I on every lowered block.
    if (quality && t > -1e-8) {
        std::vector<Eigen::MatrixXd> Xrec = ipm.X;
        double tpos = t;
        for (int bi = 0; bi < sblk; ++bi)
            Xrec[bi] += tpos * Eigen::MatrixXd::Identity(Xrec[bi].rows(),
                                                         Xrec[bi].cols());
        // Clip tiny negative eigenvalues so downstream class checks pass.
        for (int bi = 0; bi < sblk; ++bi) {
            if (Xrec[bi].rows() == 1) {
                if (Xrec[bi](0, 0) < 0 && Xrec[bi](0, 0) > -1e-7)
                    Xrec[bi](0, 0) = 0.0;
                continue;
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
                Xrec[bi], Eigen::EigenvaluesOnly);
            double lmin = es.eigenvalues().minCoeff();
            if (lmin < 0 && lmin > -1e-7)
                Xrec[bi] += (-lmin + 1e-14) *
                            Eigen::MatrixXd::Identity(Xrec[bi].rows(),
                                                      Xrec[bi].cols());
        }

        Assignment asg;
        asg.scalars.resize(prog.num_scalars);
        for (int s = 0; s < prog.num_scalars; ++s)
            asg.scalars[s] = Xrec[lw.scalar_pos_neg[s][0]](0, 0) -
                             Xrec[lw.scalar_pos_neg[s][1]](0, 0);
        for (size_t ub = 0; ub < prog.blocks.size(); ++ub)
            asg.blocks.push_back(detail::recover_block(lw, ub, Xrec));

        // Verify the equalities on the recovered assignment.
        double max_res = 0.0;
        for (const auto& eq : prog.equalities) {
            double v = -eq.rhs.get_d();
            for (const auto& term : eq.terms) {
                double val = term.is_scalar
                                 ? asg.scalars[term.scalar]
                                 : asg.blocks[term.block](term.i, term.j);
                v += term.coef.get_d() * val;
            }
            max_res = std::max(max_res, std::abs(v));
        }
        if (max_res <= tol.equality_residual * 10.0) {
            bool classes_ok = true;
            for (size_t ub = 0; ub < prog.blocks.size() && classes_ok; ++ub) {
                const auto& M = asg.blocks[ub];
                switch (prog.blocks[ub].kind) {
                    case BlockKind::Psd:
                        classes_ok = check_psd(M, tol);
                        break;
                    case BlockKind::Dd:
                        classes_ok = check_dd(M);
                        break;
                    case BlockKind::Sdd:
                        classes_ok = check_sdd(M, nullptr, tol);
                        break;
                    case BlockKind::Nonneg:
                        classes_ok = M.diagonal().minCoeff() >= 0.0;
                        break;
                }
            }
            if (classes_ok) {
                st.kind = ConeStatus::Kind::Feasible;
                st.assignment = std::move(asg);
                st.equality_residual = max_res;
                return st;
            }
        }
    }

    st.kind = ConeStatus::Kind::Unknown;
    st.reason = quality ? "feasibility boundary within solver tolerance"
                        : "solver did not converge";
    return st;
}

/// All monomials of total degree `degree` in `nvars` variables, graded-lex
/// ordered.
inline std::vector<Monomial> monomial_basis(int nvars, int degree) {
    std::vector<Monomial> out;
    Monomial cur(nvars);
    // Recursive enumeration in lex order.
    std::function<void(int, int)> rec = [&](int pos, int rem) {
        if (pos == nvars - 1) {
            cur.exp[pos] = rem;
            out.push_back(cur);
            return;
        }
        for (int e = 0; e <= rem; ++e) {
            cur.exp[pos] = e;
            rec(pos + 1, rem - e);
        }
        cur.exp[pos] = 0;
    };
    if (nvars == 0) return out;
    rec(0, degree);
    std::sort(out.begin(), out.end(), GradedLexLess{});
    return out;
}

/// Accumulates Gram-matrix equalities keyed by product monomial, so that
/// several Gram blocks and scalar terms can couple into shared rows.
class GramBuilder {
public:
    explicit GramBuilder(int nvars) : nvars_(nvars) {}

    /// Adds `scale * (z^T Q z)` for the Gram block `block` over `basis`.
    /// With a polynomial `weight`, adds `weight * scale * (z^T Q z)`.
    void add_gram(int block, const std::vector<Monomial>& basis,
                  const Rational& scale,
                  const Polynomial* weight = nullptr) {
        const int n = static_cast<int>(basis.size());
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                Monomial prod = basis[i] * basis[j];
                Rational mult = (i == j) ? scale : 2 * scale;
                if (!weight) {
                    add_term(prod, {false, 0, block, i, j, mult});
                } else {
                    for (const auto& [wm, wc] : weight->terms())
                        add_term(prod * wm, {false, 0, block, i, j, mult * wc});
                }
            }
        }
    }

    void add_scalar(const Monomial& row, int scalar, const Rational& coef) {
        add_term(row, {true, scalar, 0, 0, 0, coef});
    }

    /// Sets right-hand sides from the target polynomial; monomials in the
    /// target but not generated by any Gram pair get their own (infeasible
    /// unless zero) rows.
    void set_target(const Polynomial& target) {
        for (const auto& [m, c] : target.terms()) {
            rows_[m];  // ensure the row exists
            rhs_[m] = c;
        }
    }

    void emit(ConeProgram& prog) const {
        for (const auto& [mono, terms] : rows_) {
            Equality eq;
            eq.terms = terms;
            auto it = rhs_.find(mono);
            eq.rhs = it == rhs_.end() ? Rational(0) : it->second;
            prog.equalities.push_back(std::move(eq));
        }
    }

    size_t row_count() const { return rows_.size(); }

private:
    void add_term(const Monomial& m, LinTerm t) {
        rows_[m].push_back(std::move(t));
    }

    int nvars_;
    std::map<Monomial, std::vector<LinTerm>, GradedLexLess> rows_;
    std::map<Monomial, Rational, GradedLexLess> rhs_;
};

/// One equality per monomial of degree 2k: the Gram entries mapping to that
/// monomial must sum to the target coefficient.
inline void gram_setup(ConeProgram& prog, int block,
                       const std::vector<Monomial>& basis,
                       const Polynomial& target) {
    GramBuilder gb(target.nvars());
    gb.add_gram(block, basis, Rational(1));
    gb.set_target(target);
    gb.emit(prog);
}

}  // namespace psatz::conic

#endif
