#ifndef PSATZ_RATIONAL_HPP
#define PSATZ_RATIONAL_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace psatz {

using Rational = mpq_class;

/// Parses a decimal-free rational string such as "3", "-7/2".
inline Rational parse_rational(const std::string& s) {
    Rational q;
    if (q.set_str(s, 10) != 0)
        throw std::invalid_argument("invalid rational literal: " + s);
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

/// num/den in canonical (reduced) form.
inline Rational make_rational(const mpz_class& num, const mpz_class& den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline Rational rational_pow(const Rational& base, unsigned long k) {
    Rational r;
    mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), k);
    mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), k);
    r.canonicalize();
    return r;
}

/// Exact square root if the argument is a square of a rational, else throws.
inline bool exact_sqrt(const Rational& q, Rational& out) {
    if (q < 0) return false;
    if (mpz_perfect_square_p(q.get_num_mpz_t()) &&
        mpz_perfect_square_p(q.get_den_mpz_t())) {
        Rational r;
        mpz_sqrt(r.get_num_mpz_t(), q.get_num_mpz_t());
        mpz_sqrt(r.get_den_mpz_t(), q.get_den_mpz_t());
        r.canonicalize();
        out = r;
        return true;
    }
    return false;
}

/// Smallest u = a/10^6 with u*u >= q; used where sqrt(q) is irrational.
/// Any rational upper bound on sqrt(q) keeps downstream bounds valid.
inline Rational sqrt_upper_bound(const Rational& q) {
    if (q < 0) throw std::domain_error("sqrt_upper_bound of negative rational");
    Rational exact;
    if (exact_sqrt(q, exact)) return exact;
    const unsigned long denom = 1000000UL;
    // smallest integer a with a^2 >= q * denom^2
    Rational scaled = q * Rational((long)denom) * Rational((long)denom);
    // floor of scaled as integer
    mpz_class fl = scaled.get_num() / scaled.get_den();
    mpz_class a;
    mpz_sqrt(a.get_mpz_t(), fl.get_mpz_t());
    // a = isqrt(floor(scaled)); bump until a^2 >= scaled
    Rational cand;
    while (true) {
        cand = Rational(a) * Rational(a);
        if (cand >= scaled) break;
        a += 1;
    }
    Rational u(a, mpz_class(denom));
    u.canonicalize();
    return u;
}

}  // namespace psatz

#endif
