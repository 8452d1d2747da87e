#ifndef PSATZ_TEST_FIXTURES_HPP
#define PSATZ_TEST_FIXTURES_HPP

#include <psatz/psatz.hpp>

namespace fixtures {

using psatz::Monomial;
using psatz::Polynomial;
using psatz::PopInstance;
using psatz::Rational;

inline Polynomial x(int nvars, int i, int power = 1) {
    return Polynomial::variable(nvars, i, power);
}

// minimize x^2 over the unit ball, unconstrained; p* = 0
inline PopInstance f1() { return {x(1, 0, 2), {}, Rational(1)}; }

// minimize x^2 subject to 1 - x^2 >= 0; p* = 0
inline PopInstance f2() {
    return {x(1, 0, 2), {Polynomial::one(1) - x(1, 0, 2)}, Rational(1)};
}

// minimize x subject to x >= 0, 1 - x >= 0; p* = 0
inline PopInstance f3() {
    return {x(1, 0), {x(1, 0), Polynomial::one(1) - x(1, 0)}, Rational(1)};
}

// minimize -x subject to 1 - x^2 >= 0; p* = -1
inline PopInstance f4() {
    return {-x(1, 0), {Polynomial::one(1) - x(1, 0, 2)}, Rational(1)};
}

// minimize x1 + x2 subject to 1 - x1^2 - x2^2 >= 0; p* = -sqrt(2)
inline PopInstance f5() {
    return {x(2, 0) + x(2, 1),
            {Polynomial::one(2) - x(2, 0, 2) - x(2, 1, 2)},
            Rational(1)};
}

inline std::vector<PopInstance> all_pops() {
    return {f1(), f2(), f3(), f4(), f5()};
}

// x^4 y^2 + x^2 y^4 - 3 x^2 y^2 z^2 + z^6: nonnegative but not sos
inline Polynomial motzkin() {
    Polynomial p(3);
    p.add_term(Monomial({4, 2, 0}), 1);
    p.add_term(Monomial({2, 4, 0}), 1);
    p.add_term(Monomial({2, 2, 2}), -3);
    p.add_term(Monomial({0, 0, 6}), 1);
    return p;
}

}  // namespace fixtures

#endif
