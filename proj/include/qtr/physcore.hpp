#pragma once
// Physical constants, trap configuration, unit conversions and the
// flux-to-Aharonov-Bohm-phase convention shared by the other modules.

#include <cmath>
#include <numbers>
#include <string>

#include "qtr/error.hpp"

namespace qtr {

/// CODATA 2018 exact/recommended values.
struct PhysicalConstants {
    static constexpr double hbar = 1.054571817e-34;               // J s
    static constexpr double planck = 2.0 * std::numbers::pi * hbar; // J s
    static constexpr double elementary_charge = 1.602176634e-19;  // C
    static constexpr double vacuum_permittivity = 8.8541878128e-12; // F/m
    static constexpr double atomic_mass_unit = 1.66053906660e-27;   // kg

    /// e^2 / (4 pi eps0), J m.
    static constexpr double coulomb_constant_e2 =
        elementary_charge * elementary_charge / (4.0 * std::numbers::pi * vacuum_permittivity);
};

inline constexpr double kYb171MassU = 170.936;

/// Planar trap scenario. The y direction is frozen out and not represented.
struct TrapConfig {
    std::size_t n_ions = 3;
    double omega_z = 2.0 * std::numbers::pi * 1.5e6;  // rad/s
    double anisotropy = 1.001;                         // omega_x / omega_z
    double ion_mass = kYb171MassU * PhysicalConstants::atomic_mass_unit;  // kg

    double omega_x() const { return anisotropy * omega_z; }

    void validate() const {
        if (n_ions < 2) throw ConfigError("n_ions must be >= 2");
        if (!(std::isfinite(omega_z) && omega_z > 0)) throw ConfigError("omega_z must be > 0");
        if (!(std::isfinite(anisotropy) && anisotropy > 0))
            throw ConfigError("anisotropy must be > 0");
        if (!(std::isfinite(ion_mass) && ion_mass > 0)) throw ConfigError("ion_mass must be > 0");
    }

    /// Yb-171 at omega_z = 2 pi x 1.5 MHz.
    static TrapConfig ytterbium(std::size_t n_ions, double anisotropy) {
        TrapConfig c;
        c.n_ions = n_ions;
        c.anisotropy = anisotropy;
        return c;
    }
};

/// Length unit l = (e^2 / (4 pi eps0 m omega_z^2))^(1/3). Crystal coordinates are in units of l.
inline double characteristic_length(double ion_mass, double omega_z) {
    return std::cbrt(PhysicalConstants::coulomb_constant_e2 / (ion_mass * omega_z * omega_z));
}

inline double characteristic_length(const TrapConfig& config) {
    config.validate();
    return characteristic_length(config.ion_mass, config.omega_z);
}

/// Energy unit e^2 / (4 pi eps0 l) = m omega_z^2 l^2, in joules.
inline double energy_unit(const TrapConfig& config) {
    return PhysicalConstants::coulomb_constant_e2 / characteristic_length(config);
}

// Flux quantum phi0 = hbar / e; the AB phase is theta = pi Phi / phi0.
inline constexpr double kFluxQuantum =
    PhysicalConstants::hbar / PhysicalConstants::elementary_charge;

/// Aharonov-Bohm loop phase, stored reduced to [0, 2 pi).
class ABPhase {
public:
    ABPhase() = default;
    explicit ABPhase(double theta) {
        if (!std::isfinite(theta)) throw ConfigError("AB phase must be finite");
        constexpr double two_pi = 2.0 * std::numbers::pi;
        double r = std::fmod(theta, two_pi);
        if (r < 0) r += two_pi;
        if (r >= two_pi) r = 0.0;
        theta_ = r;
    }
    double value() const { return theta_; }

private:
    double theta_ = 0.0;
};

inline ABPhase flux_to_phase(double flux_wb) {
    if (!std::isfinite(flux_wb)) throw ConfigError("magnetic flux must be finite");
    return ABPhase(std::numbers::pi * flux_wb / kFluxQuantum);
}

/// Smallest non-negative flux producing the given phase.
inline double phase_to_flux(ABPhase phase) {
    return phase.value() * kFluxQuantum / std::numbers::pi;
}

}  // namespace qtr
