#pragma once

// Gauss-Legendre quadrature: nodes/weights by Newton iteration on the
// Legendre recurrence, plus a panel-bisection adaptive wrapper used for all
// normalization integrals. The adaptive driver keeps the fixed-order base
// rule and splits panels until the rule self-agrees, which handles both the
// exponential radial tails and the (1 - x^2)^{m'} endpoint behavior of the
// polar weight without special-casing either.

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hartmann::quad {

struct Rule {
    std::vector<double> x;  // nodes
    std::vector<double> w;  // weights
};

namespace detail {

// n-point rule on [-1, 1]. Initial guesses cos(pi (i + 3/4) / (n + 1/2))
// converge in a handful of Newton steps; weights 2 / ((1 - x^2) P_n'(x)^2).
inline Rule make_unit_rule(int n) {
    Rule rule;
    rule.x.assign(n, 0.0);
    rule.w.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            // Legendre P_n(z) and derivative by the ascending recurrence.
            double p0 = 1.0, p1 = z;
            for (int k = 1; k < n; ++k) {
                double p2 = ((2.0 * k + 1.0) * z * p1 - k * p0) / (k + 1.0);
                p0 = p1;
                p1 = p2;
            }
            pp = n * (z * p1 - p0) / (z * z - 1.0);
            double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        rule.x[i] = -z;
        rule.x[n - 1 - i] = z;
        rule.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        rule.w[n - 1 - i] = rule.w[i];
    }
    if (n % 2 == 1) rule.x[n / 2] = 0.0;  // exact center node
    return rule;
}

inline const Rule& unit_rule(int n) {
    static std::mutex mutex;
    static std::map<int, Rule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_unit_rule(n)).first;
    return it->second;
}

}  // namespace detail

// Rule mapped to [a, b]; exact for polynomials of degree <= 2n - 1.
inline Rule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw std::domain_error("gauss_legendre: need at least one node");
    if (!(a < b)) throw std::domain_error("gauss_legendre: require a < b");
    const Rule& unit = detail::unit_rule(n);
    Rule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    const double mid = 0.5 * (a + b);
    const double halfwidth = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        rule.x[i] = mid + halfwidth * unit.x[i];
        rule.w[i] = halfwidth * unit.w[i];
    }
    return rule;
}

// Single fixed-order panel.
template <class F>
double integrate(F&& f, double a, double b, int n) {
    const Rule& unit = detail::unit_rule(n);
    const double mid = 0.5 * (a + b);
    const double halfwidth = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < unit.x.size(); ++i)
        sum += unit.w[i] * f(mid + halfwidth * unit.x[i]);
    return halfwidth * sum;
}

struct AdaptOptions {
    int base_n = 200;        // fixed panel order
    double rel_tol = 1e-12;  // relative to the first whole-interval estimate
    double abs_tol = 1e-14;  // floor, so near-zero integrals terminate
    int max_depth = 48;
};

// Global-adaptive panel bisection: split while the rule disagrees with its
// own two-panel refinement. Deterministic (fixed traversal order).
template <class F>
double integrate_adaptive(F&& f, double a, double b, AdaptOptions opt = {}) {
    if (!(a < b)) throw std::domain_error("integrate_adaptive: require a < b");
    const double whole = integrate(f, a, b, opt.base_n);
    const double tol0 = std::max(opt.rel_tol * std::abs(whole), opt.abs_tol);

    std::function<double(double, double, double, double, int)> refine =
        [&](double lo, double hi, double estimate, double tol, int depth) -> double {
        const double mid = 0.5 * (lo + hi);
        const double left = integrate(f, lo, mid, opt.base_n);
        const double right = integrate(f, mid, hi, opt.base_n);
        const double better = left + right;
        if (std::abs(better - estimate) <= tol || depth >= opt.max_depth)
            return better;
        return refine(lo, mid, left, 0.5 * tol, depth + 1) +
               refine(mid, hi, right, 0.5 * tol, depth + 1);
    };
    return refine(a, b, whole, tol0, 0);
}

}  // namespace hartmann::quad
