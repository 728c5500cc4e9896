// Sanity walkthrough on the B = 0 limit, where the model collapses to the
// hydrogen atom: closed-form levels against the Bohr formula, an independent
// finite-difference eigenvalue, and a few wavefunction samples.

#include <cstdio>

#include "hartmann/hartmann.hpp"

int main() {
    using namespace hartmann;

    const PotentialParams hydrogen{1.0, 0.0, 1.0, 1.0};

    std::printf("Closed-form levels vs -1/(2 n^2) (atomic units):\n");
    std::printf("%4s %4s %4s %14s %14s\n", "n1", "n2", "m", "energy", "bohr");
    for (int n1 = 0; n1 <= 2; ++n1)
        for (int n2 = 0; n2 <= 1; ++n2) {
            const QuantumNumbers qn{n1, n2, 0};
            const EnergyLevel level =
                total_energy(hydrogen, qn, MPrimeConvention::MSquared);
            const double n = level.n_principal;
            std::printf("%4d %4d %4d %14.10f %14.10f\n", n1, n2, 0, level.energy,
                        -0.5 / (n * n));
        }

    std::printf("\nIndependent eigensolver check for the 2p level (n1=0, l=1):\n");
    const oracle::GridSpec grid{8000, 0.0, 160.0, oracle::GridScheme::Uniform};
    const oracle::EigensolveReport report =
        oracle::radial_eigenvalue(1.0, 1.0, 0, grid);
    std::printf("  analytic %.12f  numeric %.12f  rel_err %.3e  order %.2f\n",
                report.analytic_value, report.numeric_value, report.rel_err,
                report.richardson_order);

    std::printf("\nGround-state samples (value should equal e^{-r}/sqrt(pi)):\n");
    const FullWaveFunction psi =
        full_wavefunction(hydrogen, {0, 0, 0}, MPrimeConvention::MSquared);
    for (double r : {0.5, 1.0, 2.0}) {
        const WaveFunctionSample s = psi(r, 1.5707963267948966, 0.0);
        std::printf("  r = %.1f  psi = %.10f  reference = %.10f\n", r,
                    s.value.real(), std::exp(-r) / std::sqrt(M_PI));
    }
    return 0;
}
