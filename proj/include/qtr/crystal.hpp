#pragma once
// Classical potential of N ions in the planar anisotropic trap, equilibrium search and
// normal-mode analysis.
//
// Dimensionless units: lengths in characteristic_length(), energies in energy_unit(),
// frequencies in omega_z. With rho = omega_x / omega_z,
//
//     V = sum_i (rho^2 x_i^2 + z_i^2) / 2 + sum_{i>j} 1 / r_ij.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qtr/error.hpp"
#include "qtr/physcore.hpp"
#include "qtr/trust_region.hpp"

namespace qtr {

struct Ion {
    double x = 0;
    double z = 0;
};

/// Ion positions in units of characteristic_length. Flat coordinate order (x0, z0, x1, z1, ...).
struct IonConfiguration {
    std::vector<Ion> positions;

    IonConfiguration() = default;
    explicit IonConfiguration(std::vector<Ion> p) : positions(std::move(p)) {}

    std::size_t size() const { return positions.size(); }

    Eigen::VectorXd coordinates() const {
        Eigen::VectorXd q(2 * size());
        for (std::size_t i = 0; i < size(); ++i) {
            q(2 * i) = positions[i].x;
            q(2 * i + 1) = positions[i].z;
        }
        return q;
    }

    static IonConfiguration from_coordinates(const Eigen::VectorXd& q) {
        IonConfiguration c;
        c.positions.resize(static_cast<std::size_t>(q.size() / 2));
        for (std::size_t i = 0; i < c.size(); ++i) c.positions[i] = {q(2 * i), q(2 * i + 1)};
        return c;
    }

    IonConfiguration rotated(double angle) const {
        const double c = std::cos(angle), s = std::sin(angle);
        IonConfiguration r = *this;
        for (auto& p : r.positions) p = {c * p.x - s * p.z, s * p.x + c * p.z};
        return r;
    }

    IonConfiguration scaled(double factor) const {
        IonConfiguration r = *this;
        for (auto& p : r.positions) p = {factor * p.x, factor * p.z};
        return r;
    }

    double sum_squared_radius() const {
        double s = 0;
        for (const auto& p : positions) s += p.x * p.x + p.z * p.z;
        return s;
    }
};

/// Generator of rigid rotation, (-z_i, x_i) per ion, not normalized.
inline Eigen::VectorXd rotation_generator(const Eigen::VectorXd& q) {
    Eigen::VectorXd g(q.size());
    for (Eigen::Index i = 0; i < q.size() / 2; ++i) {
        g(2 * i) = -q(2 * i + 1);
        g(2 * i + 1) = q(2 * i);
    }
    return g;
}

namespace detail {

inline void check_pair(long double r2, std::size_t i, std::size_t j) {
    if (!(r2 > 1e-24L)) throw SingularConfigurationError(j, i);
}

// Energies and derivatives accumulate in long double: the rotational barrier of a
// near-isotropic crystal is ~1e-10 of the total energy.
inline long double energy(double rho, const Eigen::VectorXd& q) {
    const Eigen::Index n = q.size() / 2;
    const long double r2w = static_cast<long double>(rho) * rho;
    long double trap = 0, coulomb = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const long double x = q(2 * i), z = q(2 * i + 1);
        trap += r2w * x * x + z * z;
        for (Eigen::Index j = 0; j < i; ++j) {
            const long double dx = x - q(2 * j), dz = z - q(2 * j + 1);
            const long double r2 = dx * dx + dz * dz;
            check_pair(r2, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            coulomb += 1.0L / std::sqrt(r2);
        }
    }
    return 0.5L * trap + coulomb;
}

inline void derivatives(double rho, const Eigen::VectorXd& q, Eigen::VectorXd* grad,
                        Eigen::MatrixXd* hess) {
    const Eigen::Index n = q.size() / 2;
    const long double r2w = static_cast<long double>(rho) * rho;
    std::vector<long double> g(static_cast<std::size_t>(2 * n), 0.0L);
    std::vector<long double> h(static_cast<std::size_t>(4 * n * n), 0.0L);
    const auto dim = static_cast<std::size_t>(2 * n);
    auto H = [&](Eigen::Index a, Eigen::Index b) -> long double& {
        return h[static_cast<std::size_t>(a) * dim + static_cast<std::size_t>(b)];
    };
    for (Eigen::Index i = 0; i < n; ++i) {
        g[2 * i] += r2w * q(2 * i);
        g[2 * i + 1] += static_cast<long double>(q(2 * i + 1));
        H(2 * i, 2 * i) += r2w;
        H(2 * i + 1, 2 * i + 1) += 1.0L;
        for (Eigen::Index j = 0; j < i; ++j) {
            const long double dx = static_cast<long double>(q(2 * i)) - q(2 * j);
            const long double dz = static_cast<long double>(q(2 * i + 1)) - q(2 * j + 1);
            const long double r2 = dx * dx + dz * dz;
            check_pair(r2, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            const long double r = std::sqrt(r2);
            const long double inv3 = 1.0L / (r2 * r);
            g[2 * i] -= dx * inv3;
            g[2 * i + 1] -= dz * inv3;
            g[2 * j] += dx * inv3;
            g[2 * j + 1] += dz * inv3;
            const long double inv5 = inv3 / r2;
            const long double d[2] = {dx, dz};
            for (int a = 0; a < 2; ++a) {
                for (int b = 0; b < 2; ++b) {
                    const long double blk = 3.0L * d[a] * d[b] * inv5 - (a == b ? inv3 : 0.0L);
                    H(2 * i + a, 2 * i + b) += blk;
                    H(2 * j + a, 2 * j + b) += blk;
                    H(2 * i + a, 2 * j + b) -= blk;
                    H(2 * j + a, 2 * i + b) -= blk;
                }
            }
        }
    }
    if (grad) {
        grad->resize(2 * n);
        for (Eigen::Index a = 0; a < 2 * n; ++a) (*grad)(a) = static_cast<double>(g[a]);
    }
    if (hess) {
        hess->resize(2 * n, 2 * n);
        for (Eigen::Index a = 0; a < 2 * n; ++a)
            for (Eigen::Index b = 0; b < 2 * n; ++b) (*hess)(a, b) = static_cast<double>(H(a, b));
    }
}

}  // namespace detail

/// Extended-precision energy, for differences between nearly degenerate configurations.
inline long double potential_energy_extended(double anisotropy, const IonConfiguration& ions) {
    return detail::energy(anisotropy, ions.coordinates());
}

inline double potential_energy(double anisotropy, const IonConfiguration& ions) {
    return static_cast<double>(potential_energy_extended(anisotropy, ions));
}
inline double potential_energy(const TrapConfig& config, const IonConfiguration& ions) {
    return potential_energy(config.anisotropy, ions);
}

inline Eigen::VectorXd gradient(double anisotropy, const IonConfiguration& ions) {
    Eigen::VectorXd g;
    detail::derivatives(anisotropy, ions.coordinates(), &g, nullptr);
    return g;
}
inline Eigen::VectorXd gradient(const TrapConfig& config, const IonConfiguration& ions) {
    return gradient(config.anisotropy, ions);
}

inline Eigen::MatrixXd hessian(double anisotropy, const IonConfiguration& ions) {
    Eigen::MatrixXd h;
    detail::derivatives(anisotropy, ions.coordinates(), nullptr, &h);
    return h;
}
inline Eigen::MatrixXd hessian(const TrapConfig& config, const IonConfiguration& ions) {
    return hessian(config.anisotropy, ions);
}

// ---------------------------------------------------------------------------------------
// Seeds

enum class NamedSeed { chain, ring_up, ring_down };

inline NamedSeed parse_seed(const std::string& name) {
    if (name == "chain") return NamedSeed::chain;
    if (name == "ring-up") return NamedSeed::ring_up;
    if (name == "ring-down") return NamedSeed::ring_down;
    throw ConfigError("unknown seed '" + name + "' (expected chain, ring-up or ring-down)");
}

inline std::string to_string(NamedSeed s) {
    switch (s) {
        case NamedSeed::chain: return "chain";
        case NamedSeed::ring_up: return "ring-up";
        case NamedSeed::ring_down: return "ring-down";
    }
    return "?";
}

/// Radius of N equal charges on a circle in the isotropic trap: R^3 = sum_k 1/sin(pi k/N) / 4.
inline double ring_radius(std::size_t n) {
    double s = 0;
    for (std::size_t k = 1; k < n; ++k) s += 1.0 / std::sin(std::numbers::pi * k / n);
    return std::cbrt(s / 4.0);
}

/// Regular polygon with one vertex at angle `offset` from the +x axis.
inline IonConfiguration regular_polygon(std::size_t n, double radius, double offset) {
    IonConfiguration c;
    for (std::size_t k = 0; k < n; ++k) {
        const double phi = offset + 2.0 * std::numbers::pi * k / n;
        c.positions.push_back({radius * std::cos(phi), radius * std::sin(phi)});
    }
    return c;
}

/// "ring-up" is the polygon with a vertex on +x, the stable orientation for omega_x > omega_z;
/// "ring-down" is the same polygon turned by pi/N (vertex on -x for odd N). Both carry a fixed
/// deterministic 1e-3 perturbation, expressed in the polygon's own frame.
inline IonConfiguration make_seed(NamedSeed seed, std::size_t n) {
    constexpr double amp = 1e-3;
    if (seed == NamedSeed::chain) {
        IonConfiguration c;
        const double spacing = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double z = spacing * (static_cast<double>(k) - 0.5 * static_cast<double>(n - 1));
            c.positions.push_back({amp * std::sin(1.3 + 2.1 * k), z + amp * std::cos(0.7 + 1.7 * k)});
        }
        return c;
    }
    IonConfiguration c = regular_polygon(n, ring_radius(n), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        c.positions[k].x += amp * std::sin(1.3 + 2.1 * k);
        c.positions[k].z += amp * std::cos(0.7 + 1.7 * k);
    }
    if (seed == NamedSeed::ring_down) c = c.rotated(std::numbers::pi / static_cast<double>(n));
    return c;
}

// ---------------------------------------------------------------------------------------
// Equilibrium

struct EquilibriumOptions {
    MinimizerOptions minimizer{};
    double saddle_tolerance = 1e-8;
};

struct Equilibrium {
    IonConfiguration ions;
    long double energy = 0;
    double gradient_norm = 0;
    double lowest_hessian_eigenvalue = 0;
    int iterations = 0;
};

namespace detail {

struct CrystalObjective {
    double rho;
    long double value(const Eigen::VectorXd& q) const { return energy(rho, q); }
    void derivatives(const Eigen::VectorXd& q, Eigen::VectorXd& g, Eigen::MatrixXd& H) const {
        detail::derivatives(rho, q, &g, &H);
    }
};

}  // namespace detail

inline Equilibrium find_equilibrium(double anisotropy, const IonConfiguration& seed,
                                    const EquilibriumOptions& options = {}) {
    if (seed.size() == 0) throw ConfigError("empty seed configuration");
    const detail::CrystalObjective obj{anisotropy};
    MinimizerResult r = minimize_trust_region(obj, seed.coordinates(), options.minimizer);
    const double lowest = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(
                              r.hessian, Eigen::EigenvaluesOnly)
                              .eigenvalues()(0);
    if (lowest < -options.saddle_tolerance) throw SaddlePointError(lowest);
    Equilibrium e;
    e.ions = IonConfiguration::from_coordinates(r.x);
    e.energy = r.value;
    e.gradient_norm = r.gradient_norm;
    e.lowest_hessian_eigenvalue = lowest;
    e.iterations = r.iterations;
    return e;
}

/// Average of a configuration with its z -> -z mirror image, ions paired by proximity.
/// Returns nothing when no consistent pairing within `tolerance` exists.
inline std::optional<IonConfiguration> mirror_symmetrized(const IonConfiguration& c, double tolerance = 0.1) {
    const std::size_t n = c.size();
    std::vector<std::size_t> partner(n);
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            const double d = std::hypot(c.positions[i].x - c.positions[j].x, c.positions[i].z + c.positions[j].z);
            if (d < best) {
                best = d;
                partner[i] = j;
            }
        }
        if (best > tolerance) return std::nullopt;
    }
    IonConfiguration out = c;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = partner[i];
        if (partner[j] != i) return std::nullopt;
        out.positions[i] = {0.5 * (c.positions[i].x + c.positions[j].x),
                            0.5 * (c.positions[i].z - c.positions[j].z)};
    }
    return out;
}

/// Equilibrium grown from a named seed. All named seeds are z -> -z symmetric, and the
/// result is projected back onto that symmetry before a final polish.
inline Equilibrium find_equilibrium(const TrapConfig& config, NamedSeed seed,
                                    const EquilibriumOptions& options = {}) {
    config.validate();
    Equilibrium e = find_equilibrium(config.anisotropy, make_seed(seed, config.n_ions), options);
    if (const auto sym = mirror_symmetrized(e.ions)) {
        Equilibrium s = find_equilibrium(config.anisotropy, *sym, options);
        if (s.energy <= e.energy + 1e-15L) e = std::move(s);
    }
    return e;
}

inline Equilibrium find_equilibrium(const TrapConfig& config, const IonConfiguration& seed,
                                    const EquilibriumOptions& options = {}) {
    config.validate();
    if (seed.size() != config.n_ions) throw ConfigError("seed size does not match n_ions");
    return find_equilibrium(config.anisotropy, seed, options);
}

// ---------------------------------------------------------------------------------------
// Normal modes

struct ModeSpectrum {
    std::vector<double> frequencies;        // omega_k / omega_z, ascending
    Eigen::MatrixXd eigenvectors;            // column k = orthonormal pattern (dx0, dz0, dx1, ...)
    std::vector<std::string> labels;         // "rotational", "com-x", "com-z", "mode-k"
    std::optional<std::size_t> rotational;   // index of the rotational mode

    std::size_t size() const { return frequencies.size(); }
    double rotational_frequency() const {
        if (!rotational) throw NumericalError("spectrum has no rotational mode");
        return frequencies[*rotational];
    }
};

inline ModeSpectrum normal_modes(double anisotropy, const IonConfiguration& equilibrium,
                                 double tolerance = 1e-8) {
    const Eigen::MatrixXd H = hessian(anisotropy, equilibrium);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success) throw NumericalError("Hessian eigensolve failed");
    const auto dim = static_cast<std::size_t>(H.rows());
    ModeSpectrum s;
    s.eigenvectors = es.eigenvectors();
    s.frequencies.resize(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        const double lam = es.eigenvalues()(static_cast<Eigen::Index>(k));
        if (lam < -tolerance)
            throw UnstableEquilibriumError("negative Hessian eigenvalue " + std::to_string(lam) +
                                           ": not a local minimum");
        s.frequencies[k] = std::sqrt(std::max(0.0, lam));
    }
    for (std::size_t k = 0; k < dim; ++k) s.labels.push_back("mode-" + std::to_string(k));

    std::vector<bool> taken(dim, false);
    auto best_overlap = [&](const Eigen::VectorXd& ref) -> std::optional<std::size_t> {
        const double nrm = ref.norm();
        if (nrm == 0) return std::nullopt;
        std::optional<std::size_t> best;
        double best_val = -1;
        for (std::size_t k = 0; k < dim; ++k) {
            if (taken[k]) continue;
            const double ov = std::fabs(s.eigenvectors.col(static_cast<Eigen::Index>(k)).dot(ref)) / nrm;
            if (ov > best_val + 1e-12) {
                best_val = ov;
                best = k;
            }
        }
        if (best) taken[*best] = true;
        return best;
    };
    const std::size_t n = equilibrium.size();
    Eigen::VectorXd ex = Eigen::VectorXd::Zero(2 * n), ez = Eigen::VectorXd::Zero(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        ex(2 * i) = 1;
        ez(2 * i + 1) = 1;
    }
    if (auto k = best_overlap(ex)) s.labels[*k] = "com-x";
    if (auto k = best_overlap(ez)) s.labels[*k] = "com-z";
    if (auto k = best_overlap(rotation_generator(equilibrium.coordinates()))) {
        s.labels[*k] = "rotational";
        s.rotational = *k;
    }
    return s;
}

inline ModeSpectrum normal_modes(const TrapConfig& config, const IonConfiguration& equilibrium) {
    return normal_modes(config.anisotropy, equilibrium);
}

// ---------------------------------------------------------------------------------------
// Mode scans

struct ModeScanPoint {
    double ratio = 0;
    Equilibrium equilibrium;
    ModeSpectrum spectrum;
    /// tracked[t] = index into spectrum of the mode carried by tracked label t.
    std::vector<std::size_t> tracked;
};

namespace detail {

// Greedy assignment by eigenvector overlap, ties broken by frequency proximity.
inline std::vector<std::size_t> track_modes(const ModeScanPoint& prev, const ModeSpectrum& cur) {
    const std::size_t dim = cur.size();
    std::vector<std::size_t> out(dim, 0);
    std::vector<bool> used_prev(dim, false), used_cur(dim, false);
    for (std::size_t round = 0; round < dim; ++round) {
        double best = -1, best_df = 0;
        std::size_t bt = 0, bc = 0;
        for (std::size_t t = 0; t < dim; ++t) {
            if (used_prev[t]) continue;
            const auto pk = static_cast<Eigen::Index>(prev.tracked[t]);
            const double pf = prev.spectrum.frequencies[prev.tracked[t]];
            for (std::size_t c = 0; c < dim; ++c) {
                if (used_cur[c]) continue;
                const double ov = std::fabs(
                    prev.spectrum.eigenvectors.col(pk).dot(cur.eigenvectors.col(static_cast<Eigen::Index>(c))));
                const double df = std::fabs(cur.frequencies[c] - pf);
                if (ov > best + 1e-9 || (std::fabs(ov - best) <= 1e-9 && df < best_df)) {
                    best = ov;
                    best_df = df;
                    bt = t;
                    bc = c;
                }
            }
        }
        used_prev[bt] = used_cur[bc] = true;
        out[bt] = bc;
    }
    return out;
}

}  // namespace detail

/// Spectra over an anisotropy grid, each equilibrium continued from the previous grid point.
inline std::vector<ModeScanPoint> scan_modes(const TrapConfig& config,
                                             const std::vector<double>& ratio_grid,
                                             NamedSeed seed = NamedSeed::ring_up) {
    config.validate();
    if (ratio_grid.empty()) throw ConfigError("empty anisotropy grid");
    std::vector<ModeScanPoint> out;
    out.reserve(ratio_grid.size());
    IonConfiguration start = make_seed(seed, config.n_ions);
    for (double ratio : ratio_grid) {
        if (!(std::isfinite(ratio) && ratio > 0)) throw ConfigError("anisotropy grid values must be > 0");
        ModeScanPoint p;
        p.ratio = ratio;
        try {
            p.equilibrium = find_equilibrium(ratio, start);
            p.spectrum = normal_modes(ratio, p.equilibrium.ions);
        } catch (const NumericalError& e) {
            throw NumericalError("at anisotropy " + std::to_string(ratio) + ": " + e.what());
        }
        if (out.empty()) {
            p.tracked.resize(p.spectrum.size());
            for (std::size_t k = 0; k < p.tracked.size(); ++k) p.tracked[k] = k;
        } else {
            p.tracked = detail::track_modes(out.back(), p.spectrum);
        }
        start = p.equilibrium.ions;
        out.push_back(std::move(p));
    }
    return out;
}

// ---------------------------------------------------------------------------------------
// Adiabaticity of the anisotropy ramp

struct AdiabaticityReport {
    std::vector<double> times;      // s
    std::vector<double> omega_rot;  // rad/s
    std::vector<double> eta;        // |d omega_rot/dt| / omega_rot^2
    double max_eta = 0;
};

/// Linear omega_x ramp between two anisotropy ratios, `samples` points over `duration`.
inline std::pair<std::vector<double>, std::vector<double>> linear_ramp(
    double omega_z, double ratio_start, double ratio_end, double duration, std::size_t samples) {
    if (samples < 2) throw ConfigError("ramp needs at least two samples");
    std::vector<double> t(samples), wx(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        const double f = static_cast<double>(k) / static_cast<double>(samples - 1);
        t[k] = duration * f;
        wx[k] = omega_z * (ratio_start + (ratio_end - ratio_start) * f);
    }
    return {t, wx};
}

inline AdiabaticityReport adiabaticity(const TrapConfig& config, const std::vector<double>& times,
                                       const std::vector<double>& omega_x) {
    config.validate();
    if (times.size() != omega_x.size() || times.size() < 2)
        throw ConfigError("ramp needs matching time and omega_x samples (at least two)");
    for (std::size_t k = 1; k < times.size(); ++k)
        if (!(times[k] > times[k - 1])) throw ConfigError("ramp times must be strictly increasing");
    for (double w : omega_x)
        if (!(w / config.omega_z > 1.0))
            throw ConfigError("ramp reaches omega_x/omega_z <= 1, where the rotational mode vanishes");

    AdiabaticityReport r;
    r.times = times;
    IonConfiguration start = make_seed(NamedSeed::ring_up, config.n_ions);
    for (double w : omega_x) {
        const double ratio = w / config.omega_z;
        Equilibrium eq = find_equilibrium(ratio, start);
        r.omega_rot.push_back(normal_modes(ratio, eq.ions).rotational_frequency() * config.omega_z);
        start = eq.ions;
    }
    const std::size_t n = times.size();
    for (std::size_t k = 0; k < n; ++k) {
        double d;
        if (k == 0)
            d = (r.omega_rot[1] - r.omega_rot[0]) / (times[1] - times[0]);
        else if (k == n - 1)
            d = (r.omega_rot[n - 1] - r.omega_rot[n - 2]) / (times[n - 1] - times[n - 2]);
        else
            d = (r.omega_rot[k + 1] - r.omega_rot[k - 1]) / (times[k + 1] - times[k - 1]);
        const double eta = std::fabs(d) / (r.omega_rot[k] * r.omega_rot[k]);
        r.eta.push_back(eta);
        r.max_eta = std::max(r.max_eta, eta);
    }
    return r;
}

}  // namespace qtr
