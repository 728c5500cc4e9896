// End-to-end tour of the ring-shaped model: reduction-engine branch tables
// for the radial equation, the closed-form spectrum with a nonzero angular
// barrier, and a cross-validation record set from the numerical oracle.

#include <cstdio>

#include "hartmann/hartmann.hpp"

int main() {
    using namespace hartmann;

    // Radial equation at A = 1, l = 0, E = -1/2 in reduced form.
    const nu::NUProblem radial{{0.0, 0.0, 0.0},   // tau~ = 0
                               {0.0, 1.0, 0.0},   // sigma = r
                               {0.0, 2.0, -1.0}}; // sigma~ = -r^2 + 2r

    std::printf("Radial reduction at the ground-state energy:\n");
    std::printf("%10s %6s %8s %8s %8s %8s\n", "k", "sign", "pi0", "pi1", "lambda",
                "tau'");
    for (const nu::NUBranch& b : nu::all_branches(radial))
        std::printf("%10.4f %6s %8.3f %8.3f %8.3f %8.3f\n", b.k,
                    nu::branch_sign_name(b.sign), b.pi.c0, b.pi.c1, b.lambda,
                    b.tau_prime());
    const nu::NUBranch physical = nu::resolve_branch(radial, nu::all_branches(radial));
    std::printf("selected: k = %.4f, tau' = %.4f\n\n", physical.k,
                physical.tau_prime());

    // Ring model with eta = 1, potential strength 1 (A = 1, B = 1/2, beta = 1).
    const BenzeneModelParams ring{1.0, 1.0, 1.0, -0.5};
    const PotentialParams params = ring.to_potential();

    std::printf("Spectrum with the angular barrier on (atomic units):\n");
    std::printf("%4s %4s %4s %12s %14s\n", "n1", "n2", "m", "m_prime", "energy");
    for (int n1 = 0; n1 <= 1; ++n1)
        for (int n2 = 0; n2 <= 1; ++n2)
            for (int m = 0; m <= 1; ++m) {
                const QuantumNumbers qn{n1, n2, m};
                const EnergyLevel level =
                    total_energy(params, qn, MPrimeConvention::MSquared);
                std::printf("%4d %4d %4d %12.8f %14.10f\n", n1, n2, m,
                            m_prime(m, params.beta(), MPrimeConvention::MSquared),
                            level.energy);
            }

    std::printf("\nOracle cross-check for (n1=1, n2=1, m=1):\n");
    const auto records = oracle::verify_level(params, {1, 1, 1},
                                              MPrimeConvention::MSquared, {});
    for (const auto& rec : records)
        std::printf("  %-14s analytic %14.9f  numeric %14.9f  %s\n",
                    rec.check.c_str(), rec.analytic, rec.numeric,
                    rec.pass ? "pass" : "FAIL");
    return 0;
}
