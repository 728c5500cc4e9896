#pragma once

// Independent numerical verification of the closed forms. Eigenvalues come
// from second-order finite differences plus Sturm-sequence bisection on the
// eigenvalue index (so non-integer effective angular momenta cost nothing),
// refined by Richardson extrapolation over three nested grids. Node counts
// come from inverse-iteration eigenvectors. Nothing in the numeric path uses
// the closed-form spectrum; it appears only as the comparison value carried
// in the reports.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "hartmann/analytic.hpp"
#include "hartmann/core_model.hpp"
#include "hartmann/format.hpp"
#include "hartmann/quadrature.hpp"

namespace hartmann::oracle {

using quad::gauss_legendre;

enum class GridScheme { Uniform, Log };

struct GridSpec {
    int n_points = 4000;      // base grid size; refinement doubles it twice
    double lo = 0.0;          // lower domain bound
    double hi = 40.0;         // upper domain bound (r_max for radial solves)
    GridScheme scheme = GridScheme::Uniform;

    void validate() const {
        if (n_points < 64)
            throw std::domain_error("GridSpec: need at least 64 points");
        if (!(hi > lo)) throw std::domain_error("GridSpec: require hi > lo");
    }
};

struct EigensolveReport {
    double analytic_value = 0.0;
    double numeric_value = 0.0;
    double abs_err = 0.0;
    double rel_err = 0.0;
    int node_count = -1;
    GridSpec grid;
    double richardson_order = 0.0;
};

struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

// --- symmetric tridiagonal eigensolver ---------------------------------------

namespace detail {

struct Tridiag {
    std::vector<double> d;  // diagonal, size n
    std::vector<double> e;  // off-diagonal, size n-1
};

// Number of eigenvalues strictly below x, by counting negative pivots of the
// LDL^T factorization of T - xI (Sturm sequence).
inline int count_below(const Tridiag& t, double x) {
    int count = 0;
    double q = t.d[0] - x;
    if (q < 0.0) ++count;
    for (std::size_t i = 1; i < t.d.size(); ++i) {
        if (q == 0.0) q = 1e-300;
        q = t.d[i] - x - t.e[i - 1] * t.e[i - 1] / q;
        if (q < 0.0) ++count;
    }
    return count;
}

// k-th smallest eigenvalue (k = 0, 1, ...) by bisection on the count.
inline double kth_eigenvalue(const Tridiag& t, int k) {
    const std::size_t n = t.d.size();
    if (k < 0 || static_cast<std::size_t>(k) >= n)
        throw SolverError("kth_eigenvalue: index out of range");
    double lo = t.d[0], hi = t.d[0];
    for (std::size_t i = 0; i < n; ++i) {
        const double left = i > 0 ? std::abs(t.e[i - 1]) : 0.0;
        const double right = i + 1 < n ? std::abs(t.e[i]) : 0.0;
        lo = std::min(lo, t.d[i] - left - right);
        hi = std::max(hi, t.d[i] + left + right);
    }
    const double pad = 1e-8 * (std::abs(lo) + std::abs(hi) + 1.0);
    lo -= pad;
    hi += pad;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (count_below(t, mid) >= k + 1)
            hi = mid;
        else
            lo = mid;
        if (hi - lo <= 1e-14 * std::max({std::abs(lo), std::abs(hi), 1.0})) break;
    }
    return 0.5 * (lo + hi);
}

// Eigenvector by two rounds of inverse iteration with a deterministic start;
// the Thomas solve guards vanishing pivots (near-singularity is the point).
inline std::vector<double> inverse_iteration(const Tridiag& t, double lambda) {
    const std::size_t n = t.d.size();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = std::sin(static_cast<double>(i) + 1.0);

    std::vector<double> diag(n), upper(n > 0 ? n - 1 : 0), rhs(n);
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i < n; ++i) diag[i] = t.d[i] - lambda;
        for (std::size_t i = 0; i + 1 < n; ++i) upper[i] = t.e[i];
        rhs = y;
        // Forward elimination (symmetric tridiagonal, no pivoting).
        for (std::size_t i = 1; i < n; ++i) {
            double piv = diag[i - 1];
            if (std::abs(piv) < 1e-300) piv = 1e-300;
            const double factor = t.e[i - 1] / piv;
            diag[i] -= factor * t.e[i - 1];
            rhs[i] -= factor * rhs[i - 1];
        }
        double piv = diag[n - 1];
        if (std::abs(piv) < 1e-300) piv = 1e-300;
        y[n - 1] = rhs[n - 1] / piv;
        for (std::size_t i = n - 1; i-- > 0;) {
            double p = diag[i];
            if (std::abs(p) < 1e-300) p = 1e-300;
            y[i] = (rhs[i] - t.e[i] * y[i + 1]) / p;
        }
        double peak = 0.0;
        for (double v : y) peak = std::max(peak, std::abs(v));
        if (!(peak > 0.0)) throw SolverError("inverse_iteration: zero vector");
        for (double& v : y) v /= peak;
    }
    return y;
}

// Strict sign changes among entries that stand clear of rounding noise.
inline int count_sign_changes(const std::vector<double>& y) {
    double peak = 0.0;
    for (double v : y) peak = std::max(peak, std::abs(v));
    const double threshold = 1e-8 * peak;
    int changes = 0;
    int prev = 0;
    for (double v : y) {
        if (std::abs(v) <= threshold) continue;
        const int sign = v > 0.0 ? 1 : -1;
        if (prev != 0 && sign != prev) ++changes;
        prev = sign;
    }
    return changes;
}

struct LevelSolve {
    double value = 0.0;
    int nodes = -1;
};

// Shared Richardson driver: solve at three nested grids (the callback maps a
// base-size parameter to {eigenvalue, node count}), extrapolate the two
// finest assuming second order, and estimate the observed order.
template <class SolveFn>
EigensolveReport richardson(SolveFn&& solve, int base, int mid, int fine) {
    const LevelSolve coarse_level = solve(base);
    const LevelSolve mid_level = solve(mid);
    const LevelSolve fine_level = solve(fine);

    EigensolveReport report;
    report.numeric_value =
        fine_level.value + (fine_level.value - mid_level.value) / 3.0;
    report.node_count = fine_level.nodes;
    const double d1 = std::abs(coarse_level.value - mid_level.value);
    const double d2 = std::abs(mid_level.value - fine_level.value);
    report.richardson_order =
        (d1 > 0.0 && d2 > 0.0) ? std::log2(d1 / d2) : 0.0;
    return report;
}

}  // namespace detail

// --- radial eigensolver -------------------------------------------------------

// n1-th eigenvalue (by node count) of
//   -(hbar^2 / 2 mu) G'' + [ hbar^2 ell(ell+1) / (2 mu r^2) - A/r ] G = E G
// with G(0) = G(r_max) = 0. grid.n_points is the base interior point count;
// the solver refines it twice (exact mesh halving) for extrapolation.
inline EigensolveReport radial_eigenvalue(double A, double ell, int n1, GridSpec grid,
                                          double mu = 1.0, double hbar = 1.0) {
    grid.validate();
    if (!(A > 0.0)) throw SolverError("radial_eigenvalue: A must be positive");
    if (ell < 0.0) throw SolverError("radial_eigenvalue: ell must be nonnegative");
    if (n1 < 0 || n1 >= grid.n_points / 4)
        throw SolverError("radial_eigenvalue: node count out of range for grid");

    const double c = hbar * hbar / (2.0 * mu);
    const double r_max = grid.hi;

    auto solve_uniform = [&](int m_interior) -> detail::LevelSolve {
        const double h = r_max / (m_interior + 1);
        detail::Tridiag t;
        t.d.resize(m_interior);
        t.e.assign(m_interior - 1, -c / (h * h));
        for (int i = 0; i < m_interior; ++i) {
            const double r = (i + 1) * h;
            t.d[i] = 2.0 * c / (h * h) + c * ell * (ell + 1.0) / (r * r) - A / r;
        }
        detail::LevelSolve out;
        out.value = detail::kth_eigenvalue(t, n1);
        out.nodes = detail::count_sign_changes(detail::inverse_iteration(t, out.value));
        return out;
    };

    // Log-mesh variant: u = ln r, G = sqrt(r) g makes the operator symmetric
    // in the generalized problem  A g = E B g  with B = diag(e^{2u}); it is
    // reduced to standard form by the diagonal similarity B^{-1/2} A B^{-1/2}.
    auto solve_log = [&](int m_interior) -> detail::LevelSolve {
        const double r_min = grid.lo > 0.0 ? grid.lo : r_max * 1e-6;
        const double u_lo = std::log(r_min), u_hi = std::log(r_max);
        const double h = (u_hi - u_lo) / (m_interior + 1);
        std::vector<double> b(m_interior);
        detail::Tridiag t;
        t.d.resize(m_interior);
        t.e.resize(m_interior - 1);
        for (int i = 0; i < m_interior; ++i) {
            const double u = u_lo + (i + 1) * h;
            const double r = std::exp(u);
            b[i] = r * r;
            const double v = c * ell * (ell + 1.0) / (r * r) - A / r;
            t.d[i] = (2.0 * c / (h * h) + 0.25 * c + b[i] * v) / b[i];
        }
        for (int i = 0; i + 1 < m_interior; ++i)
            t.e[i] = (-c / (h * h)) / std::sqrt(b[i] * b[i + 1]);
        detail::LevelSolve out;
        out.value = detail::kth_eigenvalue(t, n1);
        out.nodes = detail::count_sign_changes(detail::inverse_iteration(t, out.value));
        return out;
    };

    const int base = grid.n_points;
    EigensolveReport report =
        grid.scheme == GridScheme::Uniform
            ? detail::richardson(solve_uniform, base, 2 * base + 1, 4 * base + 3)
            : detail::richardson(solve_log, base, 2 * base + 1, 4 * base + 3);
    report.grid = grid;
    report.analytic_value = radial_energy(A, ell, n1, mu, hbar);
    report.abs_err = std::abs(report.analytic_value - report.numeric_value);
    report.rel_err = report.abs_err / std::abs(report.analytic_value);
    return report;
}

// --- polar eigensolver --------------------------------------------------------

// n2-th eigenvalue lambda of the polar operator with barrier
// (m^2 + beta)/sin^2(theta). In x = cos(theta), factoring out the pole
// behavior Theta = (1 - x^2)^{m'/2} f  (m' = sqrt(m^2 + beta)) leaves the
// regular Sturm-Liouville problem
//   -((1 - x^2)^{m'+1} f')' = nu (1 - x^2)^{m'} f,  nu = lambda - m'(m'+1),
// discretized in flux form on a cell-centered grid; the coefficient vanishes
// at x = +-1, so the natural boundary condition is built in. grid.n_points
// is the base cell count (lo/hi/scheme are fixed by the substitution).
inline EigensolveReport angular_eigenvalue(int m, double beta, int n2, GridSpec grid) {
    grid.validate();
    if (beta < 0.0) throw SolverError("angular_eigenvalue: beta must be nonnegative");
    if (n2 < 0 || n2 >= grid.n_points / 4)
        throw SolverError("angular_eigenvalue: node count out of range for grid");

    const double mp = std::sqrt(static_cast<double>(m) * m + beta);
    const double shift = mp * (mp + 1.0);

    auto solve_cells = [&](int cells) -> detail::LevelSolve {
        const double h = 2.0 / cells;
        auto p = [&](double x) {
            return std::pow(std::max(1.0 - x * x, 0.0), mp + 1.0);
        };
        std::vector<double> w(cells);
        detail::Tridiag t;
        t.d.resize(cells);
        t.e.resize(cells - 1);
        for (int j = 0; j < cells; ++j) {
            const double x = -1.0 + (j + 0.5) * h;
            const double face_lo = p(-1.0 + j * h);
            const double face_hi = p(-1.0 + (j + 1) * h);
            w[j] = std::pow(std::max(1.0 - x * x, 0.0), mp);
            t.d[j] = (face_lo + face_hi) / (h * h) / w[j];
        }
        for (int j = 0; j + 1 < cells; ++j) {
            const double face = p(-1.0 + (j + 1) * h);
            t.e[j] = -(face / (h * h)) / std::sqrt(w[j] * w[j + 1]);
        }
        detail::LevelSolve out;
        out.value = detail::kth_eigenvalue(t, n2) + shift;
        out.nodes = detail::count_sign_changes(detail::inverse_iteration(t, out.value - shift));
        return out;
    };

    const int base = grid.n_points;
    EigensolveReport report = detail::richardson(solve_cells, base, 2 * base, 4 * base);
    report.grid = grid;
    const double ell = n2 + mp;
    report.analytic_value = ell * (ell + 1.0);
    report.abs_err = std::abs(report.analytic_value - report.numeric_value);
    // lambda = 0 for the nodeless barrier-free level; fall back to the
    // absolute error where a ratio is undefined.
    report.rel_err = report.analytic_value > 0.0
                         ? report.abs_err / report.analytic_value
                         : report.abs_err;
    return report;
}

// --- pointwise ODE residual ----------------------------------------------------

enum class OdeEquation { Radial, Polar };

struct OdeParams {
    // Radial: G'' + [2 mu (E + A/r)/hbar^2 - ell(ell+1)/r^2] G = 0.
    double A = 0.0;
    double ell = 0.0;
    double energy = 0.0;
    double mu = 1.0;
    double hbar = 1.0;
    // Polar: T'' + cot(theta) T' + [lambda - m_prime_sq/sin^2(theta)] T = 0.
    double m_prime_sq = 0.0;
    double lambda = 0.0;
};

// Max fourth-order central-difference residual over the grid interior
// (excluding three points at each boundary), normalized by the largest
// individual operator term anywhere on the grid so that points where all
// terms cross zero do not manufacture spurious blow-ups. The wide stencil
// keeps truncation error far below the tolerances this residual is compared
// against, so a reported failure reflects the function, not the stencil.
// When the operator annihilates the sampled function to machine precision
// (every term is pure rounding noise -- e.g. a constant in the kernel of the
// polar operator), noise divided by noise would read as order one; the raw
// residual is therefore compared against the provable rounding envelope of
// the stencil arithmetic first, and anything inside that envelope reports
// as an exact solution.
inline double ode_residual(const std::function<double(double)>& f, OdeEquation equation,
                           const OdeParams& params, const GridSpec& grid) {
    grid.validate();
    const int n = grid.n_points;
    if (n < 8) throw std::domain_error("ode_residual: grid too small");
    const double h = (grid.hi - grid.lo) / (n - 1);

    std::vector<double> values(n);
    double fmax = 0.0;
    for (int i = 0; i < n; ++i) {
        values[i] = f(grid.lo + i * h);
        fmax = std::max(fmax, std::abs(values[i]));
    }

    double worst = 0.0;
    double scale = 0.0;
    double first_coeff_max = 0.0;
    for (int i = 3; i <= n - 4; ++i) {
        const double x = grid.lo + i * h;
        const double second = (-values[i - 2] + 16.0 * values[i - 1] -
                               30.0 * values[i] + 16.0 * values[i + 1] -
                               values[i + 2]) /
                              (12.0 * h * h);
        double first = 0.0, zeroth = 0.0;
        if (equation == OdeEquation::Radial) {
            zeroth = (2.0 * params.mu * (params.energy + params.A / x) /
                          (params.hbar * params.hbar) -
                      params.ell * (params.ell + 1.0) / (x * x)) *
                     values[i];
        } else {
            const double s = std::sin(x);
            const double coeff = std::cos(x) / s;
            first = coeff *
                    (values[i - 2] - 8.0 * values[i - 1] + 8.0 * values[i + 1] -
                     values[i + 2]) /
                    (12.0 * h);
            first_coeff_max = std::max(first_coeff_max, std::abs(coeff));
            zeroth = (params.lambda - params.m_prime_sq / (s * s)) * values[i];
        }
        const double residual = second + first + zeroth;
        scale = std::max({scale, std::abs(second), std::abs(first), std::abs(zeroth)});
        worst = std::max(worst, std::abs(residual));
    }
    if (!(scale > 0.0)) return 0.0;  // identically zero input
    // Rounding envelope of the difference quotients: each stencil sums
    // coefficient-weighted values (|c| totals 64 and 18) whose products and
    // cancellations each contribute O(eps * fmax); the factor 8 covers jitter
    // in the sampled function itself.
    const double eps = std::numeric_limits<double>::epsilon();
    const double noise = 8.0 * eps * fmax *
                         (64.0 / (12.0 * h * h) + first_coeff_max * 18.0 / (12.0 * h));
    if (worst <= noise) return 0.0;
    return worst / scale;
}

// --- per-level verification ----------------------------------------------------

struct VerifyTolerances {
    double radial_rel = 1e-6;
    double angular_rel = 1e-5;
    double norm_abs = 1e-8;
};

struct CheckRecord {
    int n1 = 0, n2 = 0, m = 0;
    double beta = 0.0;
    std::string convention;
    std::string check;
    double analytic = 0.0;
    double numeric = 0.0;
    double abs_err = 0.0;
    double rel_err = 0.0;
    double tol = 0.0;
    bool pass = false;
};

namespace detail {

inline CheckRecord make_record(const QuantumNumbers& qn, double beta,
                               MPrimeConvention conv, const std::string& check,
                               double analytic, double numeric, double tol,
                               bool relative) {
    CheckRecord rec;
    rec.n1 = qn.n1;
    rec.n2 = qn.n2;
    rec.m = qn.m;
    rec.beta = beta;
    rec.convention = convention_name(conv);
    rec.check = check;
    rec.analytic = analytic;
    rec.numeric = numeric;
    rec.abs_err = std::abs(analytic - numeric);
    // A ratio is undefined at analytic = 0 (the nodeless polar level has
    // lambda = 0 exactly); the relative measure degenerates to the absolute
    // error there instead of dividing by an arbitrary floor.
    const double denom = std::abs(analytic);
    rec.rel_err = denom > 0.0 ? rec.abs_err / denom : rec.abs_err;
    rec.tol = tol;
    const double measure = relative ? rec.rel_err : rec.abs_err;
    rec.pass = std::isfinite(numeric) && measure <= tol;
    return rec;
}

// Base grid sized from the decay scale of the target level.  The mesh is
// logarithmic: near the origin the reduced wave behaves like r^(l+1) with
// generally non-integer l, which is singular in its higher derivatives on a
// uniform mesh but analytic in u = ln r, so second-order convergence (and
// Richardson extrapolation on top of it) holds uniformly in l.  The inner
// cutoff acts as a hard wall whose eigenvalue shift is linear in r_min and
// negligible at this radius.
inline GridSpec radial_grid_for(double big_n, const PotentialParams& params) {
    GridSpec grid;
    const double points = 1200.0 * big_n;
    const double length_unit = params.hbar * params.hbar / (params.mu * params.A);
    grid.n_points = static_cast<int>(std::min(std::max(points, 4000.0), 48000.0));
    grid.scheme = GridScheme::Log;
    grid.lo = 1e-9 * length_unit;
    grid.hi = 40.0 * big_n * big_n * length_unit;
    return grid;
}

}  // namespace detail

// Runs the independent checks for one level: radial eigenvalue, polar
// eigenvalue (only in the m' = sqrt(m^2 + beta) convention, the only one the
// polar operator realizes), and re-measured quadrature norms. Solver failures
// are recorded as failed checks, never thrown.
inline std::vector<CheckRecord> verify_level(const PotentialParams& params,
                                             const QuantumNumbers& qn,
                                             MPrimeConvention conv,
                                             const VerifyTolerances& tol = {}) {
    params.validate();
    qn.validate();
    const double beta = params.beta();
    const double mp = m_prime(qn.m, beta, conv);
    const double ell = effective_ell(qn.n2, mp);
    std::vector<CheckRecord> records;

    // Radial eigenvalue against the closed form.
    {
        const double big_n = qn.n1 + ell + 1.0;
        const double analytic =
            radial_energy(params.A, ell, qn.n1, params.mu, params.hbar);
        double numeric = std::nan("");
        try {
            const EigensolveReport rep =
                radial_eigenvalue(params.A, ell, qn.n1,
                                  detail::radial_grid_for(big_n, params), params.mu,
                                  params.hbar);
            numeric = rep.numeric_value;
        } catch (const std::exception&) {
            // leave numeric as nan -> recorded failure
        }
        records.push_back(detail::make_record(qn, beta, conv, "radial_energy", analytic,
                                              numeric, tol.radial_rel, true));
    }

    // Polar eigenvalue against lambda = ell(ell+1).
    if (conv == MPrimeConvention::MSquared) {
        const double analytic = ell * (ell + 1.0);
        double numeric = std::nan("");
        try {
            GridSpec grid;
            grid.n_points = 2000;
            grid.lo = -1.0;
            grid.hi = 1.0;
            const EigensolveReport rep = angular_eigenvalue(qn.m, beta, qn.n2, grid);
            numeric = rep.numeric_value;
        } catch (const std::exception&) {
        }
        records.push_back(detail::make_record(qn, beta, conv, "angular_lambda", analytic,
                                              numeric, tol.angular_rel, true));
    }

    // Quadrature norms, re-measured with base rules different from the ones
    // the normalization itself used.
    {
        double numeric = std::nan("");
        try {
            const RadialWaveFunction g = make_radial_wavefunction(
                qn.n1, ell, params.A, params.mu, params.hbar);
            quad::AdaptOptions opt;
            opt.base_n = 128;
            // Gauss nodes are strictly interior, so r = 0 is never evaluated.
            numeric = quad::integrate_adaptive(
                [&](double r) {
                    const double v = g(r);
                    return v * v;
                },
                0.0, g.r_max, opt);
        } catch (const std::exception&) {
        }
        records.push_back(detail::make_record(qn, beta, conv, "radial_norm", 1.0, numeric,
                                              tol.norm_abs, false));
    }
    {
        double numeric = std::nan("");
        try {
            const PolarWaveFunction t = make_polar_wavefunction(qn.n2, mp);
            quad::AdaptOptions opt;
            opt.base_n = 96;
            numeric = quad::integrate_adaptive(
                [&](double x) {
                    const double v = t.at_x(x);
                    return v * v;
                },
                -1.0, 1.0, opt);
        } catch (const std::exception&) {
        }
        records.push_back(detail::make_record(qn, beta, conv, "polar_norm", 1.0, numeric,
                                              tol.norm_abs, false));
    }
    return records;
}

// JSON rendering of verification records: {"records": [...], "summary": {...}}.
inline std::string verification_report_json(const std::vector<CheckRecord>& records) {
    io::JsonWriter json;
    json.begin_object();
    json.key("records").begin_array();
    int failed = 0;
    for (const CheckRecord& rec : records) {
        if (!rec.pass) ++failed;
        json.begin_object();
        json.key("n1").value(rec.n1);
        json.key("n2").value(rec.n2);
        json.key("m").value(rec.m);
        json.key("beta").value(rec.beta);
        json.key("convention").value(rec.convention);
        json.key("check").value(rec.check);
        json.key("analytic").value(rec.analytic);
        json.key("numeric").value(rec.numeric);
        json.key("abs_err").value(rec.abs_err);
        json.key("rel_err").value(rec.rel_err);
        json.key("tol").value(rec.tol);
        json.key("pass").value(rec.pass);
        json.end_object();
    }
    json.end_array();
    json.key("summary").begin_object();
    json.key("checked").value(static_cast<int>(records.size()));
    json.key("failed").value(failed);
    json.end_object();
    json.end_object();
    return json.str();
}

}  // namespace hartmann::oracle
