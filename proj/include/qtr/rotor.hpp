#pragma once
// Effective potential of the crystal's collective orientation angle on the reduced ring
// [0, 2 pi / N), which is the orientation space once rotations by 2 pi / N (a permutation of
// identical ions) are identified.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qtr/crystal.hpp"
#include "qtr/parallel.hpp"

namespace qtr {

enum class PotentialMethod { rigid, relaxed };

inline std::string to_string(PotentialMethod m) {
    return m == PotentialMethod::rigid ? "rigid" : "relaxed";
}

inline PotentialMethod parse_potential_method(const std::string& s) {
    if (s == "rigid") return PotentialMethod::rigid;
    if (s == "relaxed") return PotentialMethod::relaxed;
    throw ConfigError("unknown potential method '" + s + "' (expected rigid or relaxed)");
}

struct RotorPotential {
    std::size_t n_ions = 0;
    PotentialMethod method = PotentialMethod::relaxed;
    double period = 0;                 // rad; 2 pi / N on the reduced ring
    std::vector<double> theta_grid;    // rad, theta_k = k * period / size
    std::vector<double> values;        // dimensionless, relative to the up-equilibrium energy
    std::vector<double> values_joule;  // J, same reference
    double energy_unit = 0;            // J per dimensionless energy
    double inertia = 0;                // kg m^2, at the up equilibrium
    std::vector<double> inertia_trace; // kg m^2, of the shape at each grid angle
    IonConfiguration equilibrium;      // up equilibrium, theta = 0
    long double reference_energy = 0;  // dimensionless energy of the up equilibrium
    std::size_t minima_count = 0;
    bool two_well = false;
    std::string warning;

    std::size_t size() const { return theta_grid.size(); }
    double barrier_dimensionless() const {
        if (values.empty()) return 0;
        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        return *hi - *lo;
    }
};

inline double moment_of_inertia(const TrapConfig& config, const IonConfiguration& equilibrium) {
    const double l = characteristic_length(config);
    return config.ion_mass * l * l * equilibrium.sum_squared_radius();
}

inline double barrier_height(const RotorPotential& potential) {
    return potential.barrier_dimensionless() * potential.energy_unit;
}

namespace detail {

// Energy minimized over the 2N-1 coordinates orthogonal to the rotation generator at `ref`.
struct FixedAngleObjective {
    double rho;
    Eigen::VectorXd ref;
    Eigen::MatrixXd basis;
    Eigen::VectorXd point(const Eigen::VectorXd& d) const { return ref + basis * d; }
    long double value(const Eigen::VectorXd& d) const { return energy(rho, point(d)); }
    void derivatives(const Eigen::VectorXd& d, Eigen::VectorXd& g, Eigen::MatrixXd& H) const {
        Eigen::VectorXd gf;
        Eigen::MatrixXd Hf;
        detail::derivatives(rho, point(d), &gf, &Hf);
        g = basis.transpose() * gf;
        H = basis.transpose() * Hf * basis;
    }
};

inline Eigen::MatrixXd orthogonal_complement(const Eigen::VectorXd& u) {
    const Eigen::Index n = u.size();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(u);
    Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    return Q.rightCols(n - 1);
}

inline std::size_t count_periodic_minima(const std::vector<double>& v, double barrier) {
    if (barrier <= 1e-14) return 0;
    const std::size_t n = v.size();
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double prev = v[(i + n - 1) % n], next = v[(i + 1) % n];
        if (v[i] < prev && v[i] <= next) ++count;
    }
    return count;
}

}  // namespace detail

namespace detail {

/// Unit regular polygon with the labelling of `equilibrium`, each ion snapped to the nearest
/// vertex angle. Its rotation generator defines the collective angle (Eckart condition).
inline IonConfiguration reference_polygon(const IonConfiguration& equilibrium) {
    const double step = 2.0 * std::numbers::pi / static_cast<double>(equilibrium.size());
    IonConfiguration p = equilibrium;
    for (auto& ion : p.positions) {
        const double phi = step * std::round(std::atan2(ion.z, ion.x) / step);
        ion = {std::cos(phi), std::sin(phi)};
    }
    return p;
}

}  // namespace detail

/// Configuration minimizing the energy with the collective angle fixed at `angle` relative to
/// the reference equilibrium.
inline IonConfiguration relaxed_shape(double anisotropy, const IonConfiguration& equilibrium,
                                      double angle, const MinimizerOptions& options = {}) {
    Eigen::VectorXd u = rotation_generator(detail::reference_polygon(equilibrium).rotated(angle).coordinates());
    u.normalize();
    Eigen::VectorXd start = equilibrium.rotated(angle).coordinates();
    start -= u * u.dot(start);
    detail::FixedAngleObjective obj{anisotropy, start, detail::orthogonal_complement(u)};
    const MinimizerResult r =
        minimize_trust_region(obj, Eigen::VectorXd::Zero(start.size() - 1), options);
    return IonConfiguration::from_coordinates(obj.point(r.x));
}

struct RotorOptions {
    PotentialMethod method = PotentialMethod::relaxed;
    std::size_t grid_size = 256;
    /// Sample the full circle [0, 2 pi) with grid_size * N points instead of the reduced ring.
    bool full_circle = false;
};

inline RotorPotential effective_potential(const TrapConfig& config, const RotorOptions& options = {}) {
    config.validate();
    if (options.grid_size < 64) throw ConfigError("potential grid_size must be >= 64");
    const Equilibrium eq = find_equilibrium(config, NamedSeed::ring_up);
    const std::size_t n = config.n_ions;

    RotorPotential p;
    p.n_ions = n;
    p.method = options.method;
    p.period = 2.0 * std::numbers::pi / static_cast<double>(options.full_circle ? 1 : n);
    const std::size_t size = options.full_circle ? options.grid_size * n : options.grid_size;
    p.energy_unit = energy_unit(config);
    p.equilibrium = eq.ions;
    p.reference_energy = potential_energy_extended(config.anisotropy, eq.ions);
    p.inertia = moment_of_inertia(config, eq.ions);
    p.theta_grid.resize(size);
    p.values.resize(size);
    p.values_joule.resize(size);
    p.inertia_trace.resize(size);

    const double l = characteristic_length(config);
    parallel_for(size, [&](std::size_t k) {
        const double theta = p.period * static_cast<double>(k) / static_cast<double>(size);
        IonConfiguration shape;
        if (options.method == PotentialMethod::rigid) {
            shape = eq.ions.rotated(theta);
        } else {
            try {
                shape = relaxed_shape(config.anisotropy, eq.ions, theta);
            } catch (const NumericalError& e) {
                throw NumericalError("relaxed potential failed at theta = " +
                                     std::to_string(theta) + ": " + e.what());
            }
        }
        p.theta_grid[k] = theta;
        p.values[k] = static_cast<double>(potential_energy_extended(config.anisotropy, shape) -
                                          p.reference_energy);
        p.values_joule[k] = p.values[k] * p.energy_unit;
        p.inertia_trace[k] = config.ion_mass * l * l * shape.sum_squared_radius();
    });

    const std::size_t expected = options.full_circle ? 2 * n : 2;
    p.minima_count = detail::count_periodic_minima(p.values, p.barrier_dimensionless());
    p.two_well = p.minima_count == expected;
    if (!p.two_well)
        p.warning = "found " + std::to_string(p.minima_count) + " minima per period (expected " +
                    std::to_string(expected) + "): not in the two-orientation tunneling regime";
    return p;
}

inline RotorPotential effective_potential(const TrapConfig& config, PotentialMethod method,
                                          std::size_t grid_size) {
    return effective_potential(config, RotorOptions{method, grid_size, false});
}

}  // namespace qtr
