#pragma once

// Physical model of the ring-shaped (Hartmann) potential
//   V(r, theta) = -A/r + B / (r^2 sin^2 theta),
// plus unit conventions, quantum numbers, and the two selectable definitions
// of the effective azimuthal parameter m'. Everything downstream consumes
// these value types; all of them are immutable after construction.

#include <cmath>
#include <cstdlib>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace hartmann {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class UnitKind { AtomicUnits, ElectronVolt };

// Energies are computed in Hartree (mu = hbar = e = 1, a0 = 1, ground-state
// reference -1/2) and optionally reported in eV. The default eV-per-Hartree
// factor 27.1920 (Rydberg 13.5960) is the value that reproduces the published
// reference energies; it is configurable because it is not the modern CODATA
// number.
struct UnitSystem {
    UnitKind kind = UnitKind::AtomicUnits;
    double hartree_to_ev = 27.1920;

    void validate() const {
        if (!(hartree_to_ev > 0.0))
            throw ConfigError("UnitSystem: hartree_to_ev must be positive");
    }
    static UnitSystem atomic() { return {UnitKind::AtomicUnits, 27.1920}; }
    static UnitSystem ev(double factor = 27.1920) { return {UnitKind::ElectronVolt, factor}; }
};

struct PotentialParams {
    double A = 1.0;   // Coulomb strength (Hartree * bohr); A > 0 binds
    double B = 0.0;   // angular barrier strength (Hartree * bohr^2); B >= 0
    double mu = 1.0;  // particle mass (a.u.)
    double hbar = 1.0;

    // Dimensionless barrier strength beta = 2 mu B / hbar^2.
    double beta() const { return 2.0 * mu * B / (hbar * hbar); }

    void validate() const {
        if (!(A > 0.0))
            throw ConfigError("PotentialParams: A must be positive (no bound states otherwise)");
        if (!(mu > 0.0) || !(hbar > 0.0))
            throw ConfigError("PotentialParams: mu and hbar must be positive");
        if (B < 0.0)
            throw ConfigError("PotentialParams: B must be nonnegative");
    }
};

// Parameterization used when the potential models a ring-shaped molecule:
// A = eta * sigma_strength^2 and B = eta^2 * sigma_strength^2 / 2 in atomic
// units, hence beta = eta^2 * sigma_strength^2. The potential-strength
// parameter is named sigma_strength because the reduction engine reserves
// sigma for its own polynomial.
struct BenzeneModelParams {
    double eta = 1.0;
    double sigma_strength = 1.0;
    double a0 = 1.0;     // length scale (bohr)
    double eps0 = -0.5;  // ground-state energy scale (Hartree)

    void validate() const {
        if (!(eta > 0.0) || !(sigma_strength > 0.0))
            throw ConfigError("BenzeneModelParams: eta and sigma_strength must be positive");
    }

    PotentialParams to_potential() const {
        validate();
        const double s2 = sigma_strength * sigma_strength;
        return PotentialParams{eta * s2, 0.5 * eta * eta * s2, 1.0, 1.0};
    }
};

struct QuantumNumbers {
    int n1 = 0;  // radial node count
    int n2 = 0;  // polar node count
    int m = 0;   // azimuthal quantum number; sign never enters energies

    void validate() const {
        if (n1 < 0 || n2 < 0)
            throw ConfigError("QuantumNumbers: n1 and n2 must be nonnegative");
    }
};

// Two definitions of m' are in circulation for this model:
//   MSquared: m' = sqrt(m^2 + beta)   (the closed-form derivation's convention)
//   AbsM:     m' = sqrt(|m| + beta)   (the convention the published energy
//                                      table is actually consistent with)
// Both are first-class; CLI names are "paper" (MSquared) and "table1" (AbsM).
enum class MPrimeConvention { MSquared, AbsM };

inline const char* convention_name(MPrimeConvention conv) {
    return conv == MPrimeConvention::MSquared ? "paper" : "table1";
}

inline MPrimeConvention convention_from_name(const std::string& name) {
    if (name == "paper") return MPrimeConvention::MSquared;
    if (name == "table1") return MPrimeConvention::AbsM;
    throw ConfigError("unknown convention '" + name + "' (expected paper or table1)");
}

inline double beta_of(const PotentialParams& params) {
    params.validate();
    return params.beta();
}

inline double m_prime(int m, double beta, MPrimeConvention conv) {
    if (beta < 0.0) throw ConfigError("m_prime: beta must be nonnegative");
    const double am = std::abs(static_cast<double>(m));
    return conv == MPrimeConvention::MSquared ? std::sqrt(am * am + beta)
                                              : std::sqrt(am + beta);
}

// Effective (generally non-integer) orbital quantum number ell = n2 + m',
// so that the polar separation constant is ell (ell + 1).
inline double effective_ell(int n2, double m_prime_value) {
    return static_cast<double>(n2) + m_prime_value;
}

inline double convert_energy(double value, const UnitSystem& from, const UnitSystem& to) {
    from.validate();
    to.validate();
    if (from.kind == to.kind && from.hartree_to_ev == to.hartree_to_ev) return value;
    const double hartree =
        from.kind == UnitKind::ElectronVolt ? value / from.hartree_to_ev : value;
    return to.kind == UnitKind::ElectronVolt ? hartree * to.hartree_to_ev : hartree;
}

// ---------------------------------------------------------------------------
// Plain-text configuration: one `key = value` per line, '#' comments, blank
// lines ignored. Recognized keys (exact): A, B, mu, hbar, eta, sigma_strength,
// units, hartree_to_ev, convention. Specifying eta/sigma_strength derives A
// and B; mixing that with explicit A or B is rejected as contradictory.
// ---------------------------------------------------------------------------

struct ModelConfig {
    PotentialParams potential{};
    UnitSystem unit = UnitSystem::atomic();
    MPrimeConvention convention = MPrimeConvention::MSquared;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

inline double parse_number(const std::string& key, const std::string& text) {
    char* tail = nullptr;
    const double value = std::strtod(text.c_str(), &tail);
    if (tail == text.c_str() || *tail != '\0')
        throw ConfigError("config: key '" + key + "' has non-numeric value '" + text + "'");
    return value;
}

}  // namespace detail

inline ModelConfig parse_config(std::istream& in) {
    ModelConfig config;
    std::optional<double> eta, sigma_strength;
    bool saw_A = false, saw_B = false;

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string entry = detail::trim(line);
        if (entry.empty()) continue;

        const auto eq = entry.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value'");
        const std::string key = detail::trim(entry.substr(0, eq));
        const std::string value = detail::trim(entry.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": empty key or value");

        if (key == "A") {
            config.potential.A = detail::parse_number(key, value);
            saw_A = true;
        } else if (key == "B") {
            config.potential.B = detail::parse_number(key, value);
            saw_B = true;
        } else if (key == "mu") {
            config.potential.mu = detail::parse_number(key, value);
        } else if (key == "hbar") {
            config.potential.hbar = detail::parse_number(key, value);
        } else if (key == "eta") {
            eta = detail::parse_number(key, value);
        } else if (key == "sigma_strength") {
            sigma_strength = detail::parse_number(key, value);
        } else if (key == "units") {
            if (value == "au")
                config.unit.kind = UnitKind::AtomicUnits;
            else if (value == "ev")
                config.unit.kind = UnitKind::ElectronVolt;
            else
                throw ConfigError("config: units must be 'au' or 'ev', got '" + value + "'");
        } else if (key == "hartree_to_ev") {
            config.unit.hartree_to_ev = detail::parse_number(key, value);
        } else if (key == "convention") {
            config.convention = convention_from_name(value);
        } else {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": unknown key '" + key + "'");
        }
    }

    if (eta.has_value() != sigma_strength.has_value())
        throw ConfigError("config: eta and sigma_strength must be given together");
    if (eta.has_value()) {
        if (saw_A || saw_B)
            throw ConfigError(
                "config: eta/sigma_strength and explicit A/B are mutually exclusive");
        BenzeneModelParams ring{*eta, *sigma_strength, 1.0, -0.5};
        config.potential = ring.to_potential();
    }

    config.potential.validate();
    config.unit.validate();
    return config;
}

}  // namespace hartmann
