#pragma once

// Degree <= 2 polynomials with real coefficients: the only algebra the
// hypergeometric-type reduction needs. Value = c0 + c1*s + c2*s^2.

#include <algorithm>
#include <cmath>

namespace hartmann {

struct Poly2 {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;

    // Degree by exact-zero test on stored coefficients (no tolerance):
    // inputs are given exactly; round-off is handled by the callers' own
    // tolerance contracts.
    int degree() const {
        if (c2 != 0.0) return 2;
        if (c1 != 0.0) return 1;
        return 0;
    }

    double operator()(double s) const { return c0 + s * (c1 + s * c2); }

    // d/ds, one degree down.
    Poly2 derivative() const { return {c1, 2.0 * c2, 0.0}; }

    Poly2 operator+(const Poly2& o) const { return {c0 + o.c0, c1 + o.c1, c2 + o.c2}; }
    Poly2 operator-(const Poly2& o) const { return {c0 - o.c0, c1 - o.c1, c2 - o.c2}; }
    Poly2 scaled(double a) const { return {a * c0, a * c1, a * c2}; }

    bool is_zero() const { return c0 == 0.0 && c1 == 0.0 && c2 == 0.0; }

    double max_abs_coeff() const {
        return std::max({std::abs(c0), std::abs(c1), std::abs(c2)});
    }
};

// b^2 - 4ac of a quadratic (meaningful only when degree == 2).
inline double discriminant(const Poly2& p) { return p.c1 * p.c1 - 4.0 * p.c2 * p.c0; }

}  // namespace hartmann
