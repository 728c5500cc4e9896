#pragma once

// Self-contained special functions: log-gamma, generalized (associated)
// Laguerre polynomials, and Jacobi polynomials. Parameters are real and may
// be non-integer throughout: the solver's effective angular momentum is
// irrational in general, so alpha = 2*ell + 1 and (a, b) = (m', m') must not
// be restricted to integers.

#include <cmath>
#include <stdexcept>

namespace hartmann::specfun {

// ln Gamma(x) for x > 0 via the Stirling series after shifting the argument
// up past 12, where the first eight Bernoulli terms already leave a
// truncation error below 1e-17 relative. Arguments 1 and 2 return exactly 0.
inline double log_gamma(double x) {
    if (!(x > 0.0))
        throw std::domain_error("log_gamma: argument must be positive");
    if (x == 1.0 || x == 2.0) return 0.0;

    // Gamma(x) = Gamma(x+k) / (x (x+1) ... (x+k-1)): push x above 12.
    double shift = 0.0;
    double y = x;
    while (y < 12.0) {
        shift -= std::log(y);
        y += 1.0;
    }

    // Asymptotic series sum B_{2j} / (2j (2j-1) y^{2j-1}).
    static const double coeff[8] = {
        1.0 / 12.0,   -1.0 / 360.0,    1.0 / 1260.0, -1.0 / 1680.0,
        1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0, -3617.0 / 122400.0};
    const double inv = 1.0 / y;
    const double inv2 = inv * inv;
    double series = 0.0;
    double p = inv;
    for (double c : coeff) {
        series += c * p;
        p *= inv2;
    }

    static const double half_log_two_pi = 0.91893853320467274178;
    return shift + (y - 0.5) * std::log(y) - y + half_log_two_pi + series;
}

// Generalized Laguerre polynomial L_n^{(alpha)}(x), alpha > -1, by the
// ascending three-term recurrence
//   (k+1) L_{k+1} = (2k + 1 + alpha - x) L_k - (k + alpha) L_{k-1},
// which is stable for the desk-scale degrees used here.
inline double assoc_laguerre(int n, double alpha, double x) {
    if (n < 0)
        throw std::domain_error("assoc_laguerre: degree must be nonnegative");
    if (!(alpha > -1.0))
        throw std::domain_error("assoc_laguerre: alpha must exceed -1");

    double prev = 1.0;  // L_0
    if (n == 0) return prev;
    double curr = 1.0 + alpha - x;  // L_1
    for (int k = 1; k < n; ++k) {
        double next = ((2.0 * k + 1.0 + alpha - x) * curr - (k + alpha) * prev) / (k + 1.0);
        prev = curr;
        curr = next;
    }
    return curr;
}

// Jacobi polynomial P_n^{(a,b)}(x), a, b > -1, by the standard ascending
// recurrence. Only the ultraspherical case a == b is consumed downstream,
// but the general recurrence costs nothing extra.
inline double jacobi(int n, double a, double b, double x) {
    if (n < 0)
        throw std::domain_error("jacobi: degree must be nonnegative");
    if (!(a > -1.0) || !(b > -1.0))
        throw std::domain_error("jacobi: parameters must exceed -1");

    double prev = 1.0;  // P_0
    if (n == 0) return prev;
    double curr = 0.5 * ((a - b) + (a + b + 2.0) * x);  // P_1
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + a + b;
        const double d1 = 2.0 * (k + 1.0) * (k + a + b + 1.0) * s;
        const double d2 = (s + 1.0) * (a * a - b * b);
        const double d3 = s * (s + 1.0) * (s + 2.0);
        const double d4 = 2.0 * (k + a) * (k + b) * (s + 2.0);
        double next = ((d2 + d3 * x) * curr - d4 * prev) / d1;
        prev = curr;
        curr = next;
    }
    return curr;
}

}  // namespace hartmann::specfun
