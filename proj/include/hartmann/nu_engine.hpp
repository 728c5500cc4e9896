#pragma once

// Generic reduction of a second-order ODE of hypergeometric type,
//   psi'' + (tau_tilde / sigma) psi' + (sigma_tilde / sigma^2) psi = 0,
// to the self-adjoint polynomial form sigma y'' + tau y' + lambda y = 0.
//
// The reduction introduces a linear polynomial
//   pi(s) = (sigma' - tau_tilde)/2 +- sqrt(q(s; k)),
//   q(s; k) = ((sigma' - tau_tilde)/2)^2 - sigma_tilde + k sigma,
// where k is chosen so q is a perfect square (discriminant zero). Each
// admissible k yields two sign branches; the physical one has tau' < 0.
// Polynomial eigenvalues follow from lambda = lambda_n:
//   lambda = k + pi',   lambda_n = -n tau' - n(n-1) sigma''/2.
//
// All arithmetic is plain double with explicit tolerance contracts; the
// fixtures this engine must reproduce are exactly representable.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hartmann/poly2.hpp"

namespace hartmann::nu {

// --- problem statement ------------------------------------------------------

struct NUProblem {
    Poly2 tau_tilde;   // degree <= 1
    Poly2 sigma;       // degree <= 2, not identically zero
    Poly2 sigma_tilde; // degree <= 2

    void validate() const;
};

enum class BranchSign { Plus, Minus };

inline const char* branch_sign_name(BranchSign s) {
    return s == BranchSign::Plus ? "plus" : "minus";
}

struct NUBranch {
    double k = 0.0;
    Poly2 pi;      // linear
    Poly2 tau;     // tau_tilde + 2 pi, linear
    double lambda = 0.0;  // k + pi'
    BranchSign sign = BranchSign::Plus;

    double tau_prime() const { return tau.c1; }
};

// --- errors -----------------------------------------------------------------

struct NuError : std::runtime_error {
    explicit NuError(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidProblemError : NuError {
    explicit InvalidProblemError(const std::string& what) : NuError(what) {}
};

// k does not make q(s; k) a perfect square within tolerance.
struct InconsistentKError : NuError {
    explicit InconsistentKError(const std::string& what) : NuError(what) {}
};

struct NoPhysicalBranchError : NuError {
    explicit NoPhysicalBranchError(const std::string& what, std::vector<NUBranch> all)
        : NuError(what), branches(std::move(all)) {}
    std::vector<NUBranch> branches;
};

struct AmbiguousBranchError : NuError {
    explicit AmbiguousBranchError(const std::string& what, std::vector<NUBranch> ties)
        : NuError(what), branches(std::move(ties)) {}
    std::vector<NUBranch> branches;
};

// The weight/phi factorization cannot be expressed as powers of (s - root)
// times an exponential (complex sigma roots, or a non-removable double pole).
struct UnsupportedFormError : NuError {
    explicit UnsupportedFormError(const std::string& what) : NuError(what) {}
};

struct BracketError : NuError {
    explicit BracketError(const std::string& what) : NuError(what) {}
};

inline void NUProblem::validate() const {
    if (tau_tilde.c2 != 0.0)
        throw InvalidProblemError("NUProblem: tau_tilde must have degree <= 1");
    if (sigma.is_zero())
        throw InvalidProblemError("NUProblem: sigma must not be identically zero");
}

// --- internal helpers -------------------------------------------------------

namespace detail {

// h(s) = (sigma' - tau_tilde) / 2, always linear.
inline Poly2 half_gap(const NUProblem& p) {
    return (p.sigma.derivative() - p.tau_tilde).scaled(0.5);
}

// q(s; k) = h^2 - sigma_tilde + k sigma, quadratic in s.
inline Poly2 q_of_k(const NUProblem& p, double k) {
    const Poly2 h = half_gap(p);
    return Poly2{h.c0 * h.c0 - p.sigma_tilde.c0 + k * p.sigma.c0,
                 2.0 * h.c0 * h.c1 - p.sigma_tilde.c1 + k * p.sigma.c1,
                 h.c1 * h.c1 - p.sigma_tilde.c2 + k * p.sigma.c2};
}

// Exact linear square root r(s) with q = r^2, or throw InconsistentKError.
// Tolerances: degree classification at 1e-12 and discriminant flatness at
// 1e-10, both relative to the coefficient scale of q.
inline Poly2 linear_sqrt(const Poly2& q) {
    const double scale = std::max(q.max_abs_coeff(), 1e-300);
    if (std::abs(q.c2) > 1e-12 * scale) {
        if (q.c2 < 0.0)
            throw InconsistentKError("q(s; k) opens downward; square root not real");
        const double disc = discriminant(q);
        // The flatness scale must not collapse when c1 and one of c0/c2 are
        // roundoff residues of exact zeros: floor it at the squared overall
        // coefficient scale.
        const double disc_scale =
            std::max({q.c1 * q.c1, std::abs(4.0 * q.c2 * q.c0), scale * scale});
        if (std::abs(disc) > 1e-10 * disc_scale)
            throw InconsistentKError("q(s; k) is not a perfect square (discriminant " +
                                     std::to_string(disc) + ")");
        const double root = std::sqrt(q.c2);
        return Poly2{0.5 * q.c1 / root, root, 0.0};
    }
    // Degenerate: q must be a nonnegative constant.
    if (std::abs(q.c1) > 1e-12 * scale)
        throw InconsistentKError("q(s; k) is linear and cannot be a perfect square");
    if (q.c0 < -1e-12 * scale)
        throw InconsistentKError("q(s; k) is a negative constant");
    return Poly2{std::sqrt(std::max(q.c0, 0.0)), 0.0, 0.0};
}

inline bool is_perfect_square(const Poly2& q) {
    try {
        linear_sqrt(q);
        return true;
    } catch (const InconsistentKError&) {
        return false;
    }
}

}  // namespace detail

// --- k enumeration ----------------------------------------------------------

// All real k for which q(s; k) has zero discriminant (is a perfect square),
// in ascending order. The discriminant of q is itself a quadratic in k and is
// solved in closed form; candidates that fail the perfect-square check (e.g.
// negative-leading-coefficient squares) are filtered out.
inline std::vector<double> k_candidates(const NUProblem& p) {
    p.validate();
    const Poly2 h = detail::half_gap(p);

    // q(s; k) coefficients are affine in k: q_i = a_i + k * s_i with s_i the
    // sigma coefficients.
    const double a2 = h.c1 * h.c1 - p.sigma_tilde.c2;
    const double a1 = 2.0 * h.c0 * h.c1 - p.sigma_tilde.c1;
    const double a0 = h.c0 * h.c0 - p.sigma_tilde.c0;
    const double s2 = p.sigma.c2, s1 = p.sigma.c1, s0 = p.sigma.c0;

    // disc(k) = (a1 + k s1)^2 - 4 (a2 + k s2)(a0 + k s0), quadratic in k.
    const double qa = s1 * s1 - 4.0 * s2 * s0;  // = disc(sigma)
    const double qb = 2.0 * a1 * s1 - 4.0 * (a2 * s0 + a0 * s2);
    const double qc = a1 * a1 - 4.0 * a2 * a0;

    const double kscale = std::max({std::abs(qa), std::abs(qb), std::abs(qc)});
    std::vector<double> roots;
    if (kscale == 0.0) {
        // disc(k) vanishes identically: a one-parameter family of perfect
        // squares; there is no discrete candidate set to return.
        throw InvalidProblemError(
            "k_candidates: every k gives a perfect square; problem is underdetermined");
    }

    // Newton polish on the factored discriminant
    //   f(k) = (a1 + k s1)^2 - 4 (a2 + k s2)(a0 + k s0).
    // The expanded quadratic coefficients suffer catastrophic cancellation
    // when the two admissible k sit far apart on a large common offset; the
    // factored form evaluates f near a root to machine precision, so one or
    // two steps restore full accuracy. Near a double root Newton's step is a
    // contraction toward the root, so the polish is safe there too.
    auto polish = [&](double k) {
        for (int it = 0; it < 2; ++it) {
            const double c1 = a1 + k * s1;
            const double clo = a0 + k * s0;
            const double chi = a2 + k * s2;
            const double f = c1 * c1 - 4.0 * chi * clo;
            const double fp = 2.0 * s1 * c1 - 4.0 * (s2 * clo + s0 * chi);
            if (fp == 0.0 || !std::isfinite(f / fp)) break;
            k -= f / fp;
        }
        return k;
    };

    if (std::abs(qa) <= 1e-14 * kscale) {
        if (std::abs(qb) <= 1e-14 * kscale) {
            // Constant nonzero discriminant: never zero.
        } else {
            roots.push_back(polish(-qc / qb));
        }
    } else {
        const double disc_k = qb * qb - 4.0 * qa * qc;
        const double dscale = std::max(qb * qb, std::abs(4.0 * qa * qc));
        if (disc_k < -1e-12 * dscale) {
            // No real k.
        } else {
            const double d = std::sqrt(std::max(disc_k, 0.0));
            // Stable quadratic roots.
            const double u = -0.5 * (qb + (qb >= 0.0 ? d : -d));
            double r1 = u / qa;
            double r2 = (u != 0.0) ? qc / u : -qb / qa - r1;
            r1 = polish(r1);
            r2 = polish(r2);
            if (r1 > r2) std::swap(r1, r2);
            roots.push_back(r1);
            if (std::abs(r2 - r1) > 1e-12 * std::max({std::abs(r1), std::abs(r2), 1.0}))
                roots.push_back(r2);
        }
    }

    std::vector<double> result;
    for (double k : roots)
        if (detail::is_perfect_square(detail::q_of_k(p, k))) result.push_back(k);
    std::sort(result.begin(), result.end());
    return result;
}

// --- branch construction ----------------------------------------------------

// The two linear polynomials pi(s) = h(s) +- r(s) for an admissible k.
// Throws InconsistentKError when q(s; k) is not a perfect square.
inline std::pair<Poly2, Poly2> pi_branches(const NUProblem& p, double k) {
    p.validate();
    const Poly2 h = detail::half_gap(p);
    const Poly2 r = detail::linear_sqrt(detail::q_of_k(p, k));
    return {h + r, h - r};
}

inline NUBranch make_branch(const NUProblem& p, double k, const Poly2& pi, BranchSign sign) {
    NUBranch b;
    b.k = k;
    b.pi = pi;
    b.tau = p.tau_tilde + pi.scaled(2.0);
    b.lambda = k + pi.c1;
    b.sign = sign;
    return b;
}

// Every (k, sign) branch: k ascending, Plus before Minus.
inline std::vector<NUBranch> all_branches(const NUProblem& p) {
    std::vector<NUBranch> branches;
    for (double k : k_candidates(p)) {
        const auto [plus, minus] = pi_branches(p, k);
        branches.push_back(make_branch(p, k, plus, BranchSign::Plus));
        branches.push_back(make_branch(p, k, minus, BranchSign::Minus));
    }
    return branches;
}

// --- physical-branch selection ----------------------------------------------

// Strict selection: exactly one branch with tau' < 0, otherwise an error
// that carries the contenders so the caller can disambiguate.
inline NUBranch physical_branch(const NUProblem& p, const std::vector<NUBranch>& candidates) {
    p.validate();
    if (candidates.empty())
        throw NoPhysicalBranchError("physical_branch: no candidate branches", {});
    std::vector<NUBranch> negative;
    for (const NUBranch& b : candidates)
        if (b.tau_prime() < 0.0) negative.push_back(b);
    if (negative.empty())
        throw NoPhysicalBranchError("physical_branch: no branch has tau' < 0", candidates);
    if (negative.size() > 1)
        throw AmbiguousBranchError("physical_branch: " + std::to_string(negative.size()) +
                                       " branches have tau' < 0",
                                   negative);
    return negative.front();
}

// --- weight function and phi factor ------------------------------------------

// rho and phi are products of |s - root|^exponent terms and one exponential
// exp(c1 s + c2 s^2), obtained by partial-fraction integration of
//   rho'/rho = (tau - sigma') / sigma   and   phi'/phi = pi / sigma.
struct PowerFactor {
    double root = 0.0;
    double exponent = 0.0;
};

struct FactorProduct {
    std::vector<PowerFactor> powers;
    double exp_c1 = 0.0;
    double exp_c2 = 0.0;

    double operator()(double s) const {
        double value = std::exp(exp_c1 * s + exp_c2 * s * s);
        for (const PowerFactor& f : powers)
            value *= std::pow(std::abs(s - f.root), f.exponent);
        return value;
    }
};

struct WeightAndPhi {
    FactorProduct rho;
    FactorProduct phi;
};

namespace detail {

// Integrate numerator/sigma for a linear numerator u: the antiderivative is
// sum exponent_i * ln|s - root_i| + (linear or quadratic polynomial), i.e. a
// FactorProduct after exponentiation.
inline FactorProduct integrate_ratio(const Poly2& u, const Poly2& sigma) {
    FactorProduct out;
    const double scale = std::max(u.max_abs_coeff(), 1e-300);
    switch (sigma.degree()) {
        case 2: {
            const double disc = discriminant(sigma);
            const double dscale =
                std::max({sigma.c1 * sigma.c1, std::abs(4.0 * sigma.c2 * sigma.c0), 1e-300});
            if (disc < -1e-12 * dscale)
                throw UnsupportedFormError(
                    "weight_and_phi: sigma has complex roots; factor form unsupported");
            const double d = std::sqrt(std::max(disc, 0.0));
            const double v = -0.5 * (sigma.c1 + (sigma.c1 >= 0.0 ? d : -d));
            double r1 = (v != 0.0) ? v / sigma.c2 : 0.0;
            double r2 = (v != 0.0) ? sigma.c0 / v : 0.0;
            if (v == 0.0) {  // sigma.c1 == 0 and disc ~ 0: double root at 0... or +-sqrt
                r1 = -0.5 * sigma.c1 / sigma.c2;
                r2 = r1;
            }
            if (std::abs(r1 - r2) <=
                1e-10 * std::max({std::abs(r1), std::abs(r2), 1.0})) {
                // Double root: u/sigma = u1/c2 * 1/(s-r) + u(r)/c2 * 1/(s-r)^2.
                // The second term does not integrate to a power/exponential
                // factor unless u(r) = 0.
                const double at_root = u(r1);
                if (std::abs(at_root) > 1e-10 * std::max(scale, 1.0))
                    throw UnsupportedFormError(
                        "weight_and_phi: non-removable double pole at sigma's double root");
                out.powers.push_back({r1, u.c1 / sigma.c2});
            } else {
                // Distinct roots: residues u(r_i) / sigma'(r_i).
                const Poly2 ds = sigma.derivative();
                out.powers.push_back({r1, u(r1) / ds(r1)});
                out.powers.push_back({r2, u(r2) / ds(r2)});
                if (out.powers[0].root > out.powers[1].root)
                    std::swap(out.powers[0], out.powers[1]);
            }
            break;
        }
        case 1: {
            const double root = -sigma.c0 / sigma.c1;
            out.exp_c1 = u.c1 / sigma.c1;
            out.powers.push_back({root, u(root) / sigma.c1});
            break;
        }
        default: {  // constant sigma
            out.exp_c1 = u.c0 / sigma.c0;
            out.exp_c2 = 0.5 * u.c1 / sigma.c0;
            break;
        }
    }
    // Drop numerically-zero power factors for tidy output.
    std::vector<PowerFactor> kept;
    for (const PowerFactor& f : out.powers)
        if (std::abs(f.exponent) > 1e-14) kept.push_back(f);
    out.powers = kept;
    return out;
}

}  // namespace detail

inline WeightAndPhi weight_and_phi(const NUProblem& p, const NUBranch& branch) {
    p.validate();
    WeightAndPhi result;
    result.rho = detail::integrate_ratio(branch.tau - p.sigma.derivative(), p.sigma);
    result.phi = detail::integrate_ratio(branch.pi, p.sigma);
    return result;
}

// --- boundary-behavior disambiguation ----------------------------------------

namespace detail {

inline bool branches_equal(const NUBranch& a, const NUBranch& b) {
    const double scale = std::max({a.pi.max_abs_coeff(), b.pi.max_abs_coeff(), 1.0});
    return std::abs(a.k - b.k) <= 1e-12 * std::max(std::abs(a.k), 1.0) &&
           std::abs(a.pi.c0 - b.pi.c0) <= 1e-12 * scale &&
           std::abs(a.pi.c1 - b.pi.c1) <= 1e-12 * scale;
}

}  // namespace detail

// Selection rule used when tau' < 0 alone is ambiguous: keep branches whose
// phi stays bounded at every root of sigma (all power exponents >= 0), then
// prefer the branch vanishing fastest there (largest exponent sum). This is
// the normalizable-solution criterion stated as an explicit, testable rule.
inline NUBranch normalizable_branch(const NUProblem& p,
                                    const std::vector<NUBranch>& candidates) {
    p.validate();
    std::vector<NUBranch> negative;
    for (const NUBranch& b : candidates)
        if (b.tau_prime() < 0.0) negative.push_back(b);
    if (negative.empty())
        throw NoPhysicalBranchError("normalizable_branch: no branch has tau' < 0",
                                    candidates);

    // Deduplicate coincident branches (e.g. pi identical for both signs when
    // the square root collapses to zero).
    std::vector<NUBranch> unique;
    for (const NUBranch& b : negative) {
        bool seen = false;
        for (const NUBranch& u : unique)
            if (detail::branches_equal(u, b)) { seen = true; break; }
        if (!seen) unique.push_back(b);
    }
    if (unique.size() == 1) return unique.front();

    std::vector<NUBranch> bounded;
    std::vector<double> exponent_sum;
    for (const NUBranch& b : unique) {
        try {
            const FactorProduct phi = weight_and_phi(p, b).phi;
            bool ok = true;
            double sum = 0.0;
            for (const PowerFactor& f : phi.powers) {
                if (f.exponent < -1e-9) ok = false;
                sum += f.exponent;
            }
            if (ok) {
                bounded.push_back(b);
                exponent_sum.push_back(sum);
            }
        } catch (const UnsupportedFormError&) {
            // Cannot assess boundary behavior; treat as non-normalizable.
        }
    }
    if (bounded.empty())
        throw NoPhysicalBranchError(
            "normalizable_branch: no tau' < 0 branch has bounded phi at sigma's roots",
            unique);
    if (bounded.size() == 1) return bounded.front();

    std::size_t best = 0;
    for (std::size_t i = 1; i < bounded.size(); ++i)
        if (exponent_sum[i] > exponent_sum[best]) best = i;
    // A genuine tie means the rule cannot decide.
    for (std::size_t i = 0; i < bounded.size(); ++i) {
        if (i == best) continue;
        if (std::abs(exponent_sum[i] - exponent_sum[best]) <=
            1e-12 * std::max(1.0, std::abs(exponent_sum[best])))
            throw AmbiguousBranchError(
                "normalizable_branch: multiple branches equally bounded", bounded);
    }
    return bounded[best];
}

// Strict rule first; fall back to the boundary-behavior rule only when the
// strict rule reports an ambiguity.
inline NUBranch resolve_branch(const NUProblem& p, const std::vector<NUBranch>& candidates) {
    try {
        return physical_branch(p, candidates);
    } catch (const AmbiguousBranchError&) {
        return normalizable_branch(p, candidates);
    }
}

// --- quantization ------------------------------------------------------------

// lambda_n = -n tau' - n(n-1) sigma''/2.
inline double lambda_n(int n, const NUBranch& branch, const NUProblem& p) {
    if (n < 0) throw InvalidProblemError("lambda_n: n must be nonnegative");
    const double np = static_cast<double>(n);
    return -np * branch.tau.c1 - np * (np - 1.0) * p.sigma.c2;
}

using BranchSelector =
    std::function<NUBranch(const NUProblem&, const std::vector<NUBranch>&)>;

// A problem family over one real parameter t (monotone spectral parameter).
struct NUFamily {
    std::function<NUProblem(double)> at;
    BranchSelector select = [](const NUProblem& p, const std::vector<NUBranch>& c) {
        return resolve_branch(p, c);
    };
};

struct SolveOptions {
    double rel_tol = 1e-12;  // on |lambda - lambda_n| relative to its scale
    int max_iter = 200;
};

namespace detail {

struct QuantizationGap {
    double value = 0.0;  // lambda - lambda_n
    double scale = 1.0;  // normalization for the tolerance test
};

inline QuantizationGap gap_at(const NUFamily& family, int n, double t) {
    const NUProblem p = family.at(t);
    const NUBranch b = family.select(p, all_branches(p));
    QuantizationGap g;
    const double ln = lambda_n(n, b, p);
    g.value = b.lambda - ln;
    g.scale = std::max({std::abs(b.lambda), std::abs(ln), 1.0});
    return g;
}

}  // namespace detail

// Solve lambda(t) = lambda_n(t) for t in [lo, hi] by bisection with a
// secant acceleration step (deterministic iteration rule). Requires a sign
// change over the bracket; branch-selection failures propagate.
inline double solve_spectrum(const NUFamily& family, int n, double lo, double hi,
                             SolveOptions opt = {}) {
    if (!(lo < hi)) throw BracketError("solve_spectrum: require lo < hi");
    detail::QuantizationGap glo = detail::gap_at(family, n, lo);
    detail::QuantizationGap ghi = detail::gap_at(family, n, hi);
    if (glo.value == 0.0) return lo;
    if (ghi.value == 0.0) return hi;
    if ((glo.value > 0.0) == (ghi.value > 0.0))
        throw BracketError("solve_spectrum: lambda - lambda_n has no sign change over [" +
                           std::to_string(lo) + ", " + std::to_string(hi) + "]");

    double a = lo, b = hi;
    double fa = glo.value, fb = ghi.value;
    double t = 0.5 * (a + b);
    for (int iter = 0; iter < opt.max_iter; ++iter) {
        // Secant proposal clipped into the open bracket, else bisection.
        double proposal = b - fb * (b - a) / (fb - fa);
        const double width = b - a;
        if (!(proposal > a + 0.01 * width) || !(proposal < b - 0.01 * width))
            proposal = 0.5 * (a + b);
        t = proposal;
        const detail::QuantizationGap g = detail::gap_at(family, n, t);
        if (std::abs(g.value) <= opt.rel_tol * g.scale) return t;
        if ((g.value > 0.0) == (fa > 0.0)) {
            a = t;
            fa = g.value;
        } else {
            b = t;
            fb = g.value;
        }
        if (b - a <= 1e-15 * std::max({std::abs(a), std::abs(b), 1.0})) break;
    }
    const detail::QuantizationGap g = detail::gap_at(family, n, t);
    if (std::abs(g.value) <= 1e3 * opt.rel_tol * g.scale) return t;
    throw BracketError("solve_spectrum: did not converge to quantization tolerance");
}

}  // namespace hartmann::nu
