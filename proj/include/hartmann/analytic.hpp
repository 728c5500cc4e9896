#pragma once

// Closed-form bound-state spectrum and eigenfunctions of the ring-shaped
// potential. The 3D wavefunction separates as
//   Psi(r, theta, phi) = R(r) * Theta(theta) * Phi(phi),  R(r) = G(r)/r,
// with
//   G(r)     = N1 * r^(ell+1) * exp(-eps r) * L_{n1}^{(2 ell + 1)}(2 eps r),
//   Theta    = N2 * (sin theta)^{m'} * P_{n2}^{(m', m')}(cos theta),
//   Phi      = exp(i m phi) / sqrt(2 pi),
// where ell = n2 + m' is generally non-integer and eps = sqrt(-2 mu E)/hbar.
// Normalization constants are fixed by adaptive quadrature (integral of G^2
// over r and of Theta^2 sin(theta) over theta both equal 1); the closed-form
// constants conventionally quoted for these solutions are typo-suspect and
// are kept only for comparison (reference_*_norm_constant).

#include <cmath>
#include <complex>
#include <stdexcept>

#include "hartmann/core_model.hpp"
#include "hartmann/quadrature.hpp"
#include "hartmann/specfun.hpp"

namespace hartmann {

struct EnergyLevel {
    QuantumNumbers qn;
    double energy = 0.0;  // in `unit`
    UnitSystem unit;
    MPrimeConvention convention = MPrimeConvention::MSquared;
    double n_principal = 1.0;  // N = n1 + n2 + m' + 1
};

struct WaveFunctionSample {
    double r = 0.0;
    double theta = 0.0;
    double phi = 0.0;
    std::complex<double> value;  // = (parts.radial / r) * parts.polar * parts.azimuthal
    struct Parts {
        double radial = 0.0;  // G(r), normalized so integral of G^2 dr = 1
        double polar = 0.0;   // Theta(theta), normalized on the sin(theta) measure
        std::complex<double> azimuthal;
    } parts;
};

// E = -mu A^2 / (2 hbar^2 (n1 + ell + 1)^2); requires A > 0 to bind.
inline double radial_energy(double A, double ell, int n1, double mu = 1.0,
                            double hbar = 1.0) {
    if (!(A > 0.0))
        throw std::domain_error("radial_energy: A must be positive for bound states");
    if (ell < 0.0) throw std::domain_error("radial_energy: ell must be nonnegative");
    if (n1 < 0) throw std::domain_error("radial_energy: n1 must be nonnegative");
    const double n = n1 + ell + 1.0;
    return -(mu * A * A) / (2.0 * hbar * hbar * n * n);
}

// Combined energy for quantum numbers (n1, n2, m). The principal-like number
// is computed as (n1 + n2 + 1) + m' with the integer sum taken first, so the
// result is bit-identical under the n1 <-> n2 degeneracy swap.
inline EnergyLevel total_energy(const PotentialParams& params, const QuantumNumbers& qn,
                                MPrimeConvention conv,
                                const UnitSystem& unit = UnitSystem::atomic()) {
    params.validate();
    qn.validate();
    if (!(params.A > 0.0))
        throw std::domain_error("total_energy: A must be positive for bound states");
    const double mp = m_prime(qn.m, params.beta(), conv);
    const double big_n = static_cast<double>(qn.n1 + qn.n2 + 1) + mp;
    const double hartree =
        -(params.mu * params.A * params.A) /
        (2.0 * params.hbar * params.hbar * big_n * big_n);
    return EnergyLevel{qn, convert_energy(hartree, UnitSystem::atomic(), unit), unit,
                       conv, big_n};
}

// --- radial eigenfunction -----------------------------------------------------

struct RadialWaveFunction {
    int n1 = 0;
    double ell = 0.0;
    double A = 1.0, mu = 1.0, hbar = 1.0;
    double energy = 0.0;  // Hartree
    double eps = 1.0;     // sqrt(-2 mu E)/hbar = mu A / (hbar^2 (n1 + ell + 1))
    double norm = 1.0;    // quadrature normalization factor
    double r_max = 40.0;  // integration endpoint, 40 N^2 hbar^2 / (mu A)

    double unnormalized(double r) const {
        return std::pow(r, ell + 1.0) * std::exp(-eps * r) *
               specfun::assoc_laguerre(n1, 2.0 * ell + 1.0, 2.0 * eps * r);
    }
    double operator()(double r) const {
        if (!(r > 0.0))
            throw std::domain_error("radial_wavefunction: r must be positive");
        return norm * unnormalized(r);
    }
};

inline RadialWaveFunction make_radial_wavefunction(int n1, double ell, double A,
                                                   double mu = 1.0, double hbar = 1.0) {
    RadialWaveFunction g;
    g.n1 = n1;
    g.ell = ell;
    g.A = A;
    g.mu = mu;
    g.hbar = hbar;
    g.energy = radial_energy(A, ell, n1, mu, hbar);
    const double big_n = n1 + ell + 1.0;
    g.eps = mu * A / (hbar * hbar * big_n);
    g.r_max = 40.0 * big_n * big_n * hbar * hbar / (mu * A);
    const double raw = quad::integrate_adaptive(
        [&](double r) {
            const double v = g.unnormalized(r);
            return v * v;
        },
        0.0, g.r_max);
    if (!(raw > 0.0))
        throw std::runtime_error("make_radial_wavefunction: normalization integral failed");
    // Positive near r -> 0+ already (leading coefficient positive); keep sign.
    g.norm = 1.0 / std::sqrt(raw);
    return g;
}

// Convenience single-sample form; builds the normalized object per call.
inline double radial_wavefunction(int n1, double ell, double A, double mu, double hbar,
                                  double r) {
    return make_radial_wavefunction(n1, ell, A, mu, hbar)(r);
}

// --- polar eigenfunction ------------------------------------------------------

struct PolarWaveFunction {
    int n2 = 0;
    double m_prime = 0.0;
    double norm = 1.0;

    // In x = cos(theta): Theta = norm * (1 - x^2)^{m'/2} * P_{n2}^{(m',m')}(x).
    double at_x(double x) const {
        return norm * std::pow(std::max(1.0 - x * x, 0.0), 0.5 * m_prime) *
               specfun::jacobi(n2, m_prime, m_prime, x);
    }
    double operator()(double theta) const {
        if (theta < 0.0 || theta > M_PI)
            throw std::domain_error("polar_wavefunction: theta must lie in [0, pi]");
        const double s = std::sin(theta);
        return norm * std::pow(std::max(s, 0.0), m_prime) *
               specfun::jacobi(n2, m_prime, m_prime, std::cos(theta));
    }
};

inline PolarWaveFunction make_polar_wavefunction(int n2, double m_prime_value) {
    if (n2 < 0) throw std::domain_error("polar_wavefunction: n2 must be nonnegative");
    if (m_prime_value < 0.0)
        throw std::domain_error("polar_wavefunction: m' must be nonnegative");
    PolarWaveFunction t;
    t.n2 = n2;
    t.m_prime = m_prime_value;
    // integral of Theta^2 sin(theta) dtheta == integral of Theta(x)^2 dx.
    const double raw = quad::integrate_adaptive(
        [&](double x) {
            const double v = t.at_x(x);
            return v * v;
        },
        -1.0, 1.0);
    if (!(raw > 0.0))
        throw std::runtime_error("make_polar_wavefunction: normalization integral failed");
    // P_{n2}^{(m',m')}(1) > 0, so the function is already positive near
    // theta -> 0+; keep sign.
    t.norm = 1.0 / std::sqrt(raw);
    return t;
}

inline double polar_wavefunction(int n2, double m_prime_value, double theta) {
    return make_polar_wavefunction(n2, m_prime_value)(theta);
}

// Phi_m(phi) = exp(i m phi) / sqrt(2 pi).
inline std::complex<double> azimuthal_wavefunction(int m, double phi) {
    static const double inv_sqrt_two_pi = 0.39894228040143267794;
    return std::complex<double>(std::cos(m * phi), std::sin(m * phi)) * inv_sqrt_two_pi;
}

// --- combined wavefunction ----------------------------------------------------

struct FullWaveFunction {
    RadialWaveFunction radial;  // G(r)
    PolarWaveFunction polar;
    int m = 0;

    WaveFunctionSample operator()(double r, double theta, double phi) const {
        WaveFunctionSample s;
        s.r = r;
        s.theta = theta;
        s.phi = phi;
        s.parts.radial = radial(r);
        s.parts.polar = polar(theta);
        s.parts.azimuthal = azimuthal_wavefunction(m, phi);
        s.value = (s.parts.radial / r) * s.parts.polar * s.parts.azimuthal;
        return s;
    }
};

inline FullWaveFunction full_wavefunction(const PotentialParams& params,
                                          const QuantumNumbers& qn,
                                          MPrimeConvention conv) {
    params.validate();
    qn.validate();
    const double mp = m_prime(qn.m, params.beta(), conv);
    const double ell = effective_ell(qn.n2, mp);
    FullWaveFunction psi;
    psi.radial = make_radial_wavefunction(qn.n1, ell, params.A, params.mu, params.hbar);
    psi.polar = make_polar_wavefunction(qn.n2, mp);
    psi.m = qn.m;
    return psi;
}

// --- reference (closed-form) normalization constants --------------------------

// The normalization constants in the closed form conventionally quoted for
// this solution family. They disagree with direct quadrature for general
// parameters (the gamma-function arguments appear garbled in the source
// material); quadrature is authoritative everywhere in this artifact, and
// these evaluators exist so the disagreement can be measured.
inline double reference_radial_norm_constant(int n1, double ell) {
    if (n1 < 0 || ell < 0.0)
        throw std::domain_error("reference_radial_norm_constant: bad arguments");
    using specfun::log_gamma;
    const double log_value = log_gamma(n1 + 1.0) - std::log(2.0) -
                             std::log(n1 + 2.0 * ell + 1.0) -
                             log_gamma(n1 + 2.0 * ell + 2.0);
    return std::exp(0.5 * log_value);
}

inline double reference_polar_norm_constant(int n2, double m_prime_value) {
    if (n2 < 0 || m_prime_value < 0.0)
        throw std::domain_error("reference_polar_norm_constant: bad arguments");
    using specfun::log_gamma;
    const double mp = m_prime_value;
    const double log_value = std::log(2.0 * n2 + 2.0 * mp + 1.0) + log_gamma(n2 + 1.0) +
                             log_gamma(n2 + 2.0 * mp + 1.0) -
                             (2.0 * mp + 1.0) * std::log(2.0) -
                             log_gamma(2.0 * n2 + mp + 1.0) - log_gamma(n2 + mp + 1.0);
    return std::exp(0.5 * log_value);
}

}  // namespace hartmann
