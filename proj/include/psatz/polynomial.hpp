#ifndef PSATZ_POLYNOMIAL_HPP
#define PSATZ_POLYNOMIAL_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "psatz/rational.hpp"

namespace psatz {

/// Exponent vector of a power product, one entry per variable.
struct Monomial {
    std::vector<int> exp;

    Monomial() = default;
    explicit Monomial(std::vector<int> e) : exp(std::move(e)) {}
    explicit Monomial(int nvars) : exp(nvars, 0) {}

    int degree() const { return std::accumulate(exp.begin(), exp.end(), 0); }
    int nvars() const { return static_cast<int>(exp.size()); }

    bool all_even() const {
        for (int e : exp)
            if (e % 2 != 0) return false;
        return true;
    }

    Monomial operator*(const Monomial& o) const {
        Monomial r(*this);
        for (size_t i = 0; i < exp.size(); ++i) r.exp[i] += o.exp[i];
        return r;
    }

    bool operator==(const Monomial& o) const { return exp == o.exp; }
};

/// Graded lexicographic order: total degree first, ties broken by the
/// exponent vector compared entrywise from the first variable.
struct GradedLexLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        int da = a.degree(), db = b.degree();
        if (da != db) return da < db;
        return std::lexicographical_compare(a.exp.begin(), a.exp.end(),
                                            b.exp.begin(), b.exp.end());
    }
};

/// Sparse multivariate polynomial with exact rational coefficients.
/// Canonical form: no zero coefficients are stored, so operator== is
/// structural equality.
class Polynomial {
public:
    using TermMap = std::map<Monomial, Rational, GradedLexLess>;

    explicit Polynomial(int nvars = 0) : nvars_(nvars) {
        if (nvars < 0) throw std::invalid_argument("negative variable count");
    }

    static Polynomial zero(int nvars) { return Polynomial(nvars); }

    static Polynomial constant(int nvars, const Rational& c) {
        Polynomial p(nvars);
        p.add_term(Monomial(nvars), c);
        return p;
    }

    static Polynomial one(int nvars) { return constant(nvars, 1); }

    /// x_i (0-based index).
    static Polynomial variable(int nvars, int i, int power = 1) {
        Polynomial p(nvars);
        Monomial m(nvars);
        m.exp.at(i) = power;
        p.add_term(m, 1);
        return p;
    }

    int nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    int degree() const {
        if (terms_.empty()) return -1;  // degree of the zero polynomial
        return terms_.rbegin()->first.degree();
    }

    bool is_homogeneous() const {
        if (terms_.empty()) return true;
        int d = terms_.begin()->first.degree();
        return terms_.rbegin()->first.degree() == d;
    }

    void add_term(const Monomial& m, const Rational& c) {
        if (static_cast<int>(m.exp.size()) != nvars_)
            throw std::invalid_argument("monomial arity mismatch");
        if (c == 0) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Rational coefficient(const Monomial& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    bool operator==(const Polynomial& o) const {
        return nvars_ == o.nvars_ && terms_ == o.terms_;
    }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    Polynomial operator+(const Polynomial& o) const {
        check_same_arity(o);
        Polynomial r(*this);
        for (const auto& [m, c] : o.terms_) r.add_term(m, c);
        return r;
    }

    Polynomial operator-() const {
        Polynomial r(nvars_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }

    Polynomial operator-(const Polynomial& o) const { return *this + (-o); }

    Polynomial operator*(const Polynomial& o) const {
        check_same_arity(o);
        Polynomial r(nvars_);
        for (const auto& [ma, ca] : terms_)
            for (const auto& [mb, cb] : o.terms_) r.add_term(ma * mb, ca * cb);
        return r;
    }

    Polynomial operator*(const Rational& c) const {
        Polynomial r(nvars_);
        if (c == 0) return r;
        for (const auto& [m, cc] : terms_) r.terms_.emplace(m, cc * c);
        return r;
    }

    Polynomial pow(unsigned long k) const {
        Polynomial result = Polynomial::one(nvars_);
        Polynomial base(*this);
        while (k > 0) {
            if (k & 1UL) result = result * base;
            base = (k >>= 1UL) ? base * base : base;
        }
        return result;
    }

    Rational evaluate(const std::vector<Rational>& point) const {
        if (static_cast<int>(point.size()) != nvars_)
            throw std::invalid_argument("evaluation point arity mismatch");
        Rational total(0);
        for (const auto& [m, c] : terms_) {
            Rational t(c);
            for (int i = 0; i < nvars_; ++i)
                if (m.exp[i] != 0) t *= rational_pow(point[i], m.exp[i]);
            total += t;
        }
        return total;
    }

    double evaluate_double(const std::vector<double>& point) const {
        double total = 0.0;
        for (const auto& [m, c] : terms_) {
            double t = c.get_d();
            for (int i = 0; i < nvars_; ++i)
                for (int k = 0; k < m.exp[i]; ++k) t *= point[i];
            total += t;
        }
        return total;
    }

    /// Substitutes 1 for variable `idx` and drops it from the variable list.
    Polynomial substitute_one_and_drop(int idx) const {
        Polynomial r(nvars_ - 1);
        for (const auto& [m, c] : terms_) {
            Monomial mm(nvars_ - 1);
            for (int i = 0, j = 0; i < nvars_; ++i) {
                if (i == idx) continue;
                mm.exp[j++] = m.exp[i];
            }
            r.add_term(mm, c);
        }
        return r;
    }

private:
    void check_same_arity(const Polynomial& o) const {
        if (nvars_ != o.nvars_)
            throw std::invalid_argument("polynomial variable-count mismatch");
    }

    int nvars_ = 0;
    TermMap terms_;
};

inline Polynomial operator*(const Rational& c, const Polynomial& p) { return p * c; }

/// y^{2d} p(x/y): multiplies each term of degree k by y^{2d-k}.  The
/// homogenizing variable must be fresh (index yindex, exponent 0 in p).
inline Polynomial homogenize(const Polynomial& p, int target_degree, int yindex) {
    if (p.degree() > target_degree)
        throw std::invalid_argument("homogenize: degree exceeds target");
    Polynomial r(p.nvars());
    for (const auto& [m, c] : p.terms()) {
        if (m.exp.at(yindex) != 0)
            throw std::invalid_argument("homogenize: variable already used");
        Monomial mm(m);
        mm.exp[yindex] += target_degree - m.degree();
        r.add_term(mm, c);
    }
    return r;
}

/// Substitutes z_i := v_i^2 - w_i^2, mapping n variables to 2n variables
/// ordered (v_1..v_n, w_1..w_n).  The image of a form is an even form of
/// twice the degree.
inline Polynomial even_lift(const Polynomial& p) {
    const int n = p.nvars();
    Polynomial r(2 * n);
    std::vector<Polynomial> subst;
    subst.reserve(n);
    for (int i = 0; i < n; ++i)
        subst.push_back(Polynomial::variable(2 * n, i, 2) -
                        Polynomial::variable(2 * n, n + i, 2));
    for (const auto& [m, c] : p.terms()) {
        Polynomial t = Polynomial::constant(2 * n, c);
        for (int i = 0; i < n; ++i)
            if (m.exp[i] != 0) t = t * subst[i].pow(m.exp[i]);
        r = r + t;
    }
    return r;
}

/// (sum_i x_i^e)^k with e even.
inline Polynomial sum_of_even_powers(int nvars, int exponent, unsigned long power) {
    if (exponent < 0 || exponent % 2 != 0)
        throw std::invalid_argument("sum_of_even_powers: exponent must be even");
    Polynomial s(nvars);
    for (int i = 0; i < nvars; ++i)
        s = s + Polynomial::variable(nvars, i, exponent);
    return s.pow(power);
}

/// Minimum coefficient and a witnessing monomial (graded-lex smallest on
/// ties).  The zero polynomial reports (0, empty monomial).
inline std::pair<Rational, Monomial> min_coefficient(const Polynomial& p) {
    if (p.is_zero()) return {Rational(0), Monomial(p.nvars())};
    bool first = true;
    Rational best;
    Monomial witness;
    for (const auto& [m, c] : p.terms()) {
        if (first || c < best) {
            best = c;
            witness = m;
            first = false;
        }
    }
    return {best, witness};
}

/// True iff every exponent of every monomial is even; requires a form.
inline bool is_even_form(const Polynomial& p) {
    if (!p.is_homogeneous())
        throw std::invalid_argument("is_even_form: input is not homogeneous");
    for (const auto& [m, c] : p.terms())
        if (!m.all_even()) return false;
    return true;
}

}  // namespace psatz

#endif
