#pragma once
// Periodic rotor Schroedinger problem
//
//     H = -(hbar^2 / 2I) d^2/dtheta^2 + V(theta),   theta in [0, period), periodic,
//
// its tunneling doublet, and the full trap -> tunneling-rate pipeline.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qtr/rotor.hpp"

namespace qtr {

enum class RingMethod { fourier, finite_difference };

inline std::string to_string(RingMethod m) {
    return m == RingMethod::fourier ? "fourier" : "finite_difference";
}

inline RingMethod parse_ring_method(const std::string& s) {
    if (s == "fourier") return RingMethod::fourier;
    if (s == "finite_difference" || s == "finite-difference") return RingMethod::finite_difference;
    throw ConfigError("unknown ring solver '" + s + "' (expected fourier or finite_difference)");
}

// Tunneling rate j = splitting / (2 hbar), reported in Hz as j / 2 pi. The two-level model in
// cyclewalk couples the orientations with 2 hbar j_tb, so j_tb = rate_j / 2.
inline constexpr double kSplittingPerTunnelingRate = 2.0;

struct TunnelDoublet {
    double e0 = 0, e1 = 0;          // J, relative to the potential reference
    double splitting = 0;           // J
    double rate_j = 0;              // rad/s, splitting / (2 hbar)
    double rate_hz = 0;             // Hz, rate_j / 2 pi = splitting / (2h)
    double splitting_hz = 0;        // Hz, splitting / h
    std::vector<double> spectrum;   // J, lowest levels ascending
    std::vector<double> theta_grid; // rad
    std::vector<double> psi0, psi1, psi_up, psi_down;
    RingMethod method = RingMethod::fourier;
    std::size_t resolution = 0;
    bool converged = true;
    std::string warning;
};

struct RingSolverOptions {
    std::size_t resolution = 256;
    RingMethod method = RingMethod::fourier;
    /// finite_difference only: Richardson-extrapolate energies from resolution and resolution/2.
    bool extrapolate = true;
    std::size_t levels = 6;
    /// Re-solve at half resolution and flag splitting changes above 1%.
    bool check_convergence = true;
};

/// Builds a RotorPotential from samples on a uniform periodic grid (values in joules).
inline RotorPotential make_ring_potential(std::vector<double> values_joule, double period,
                                          double inertia, std::size_t n_ions = 1) {
    RotorPotential p;
    p.n_ions = n_ions;
    p.period = period;
    p.energy_unit = 1.0;
    p.inertia = inertia;
    const std::size_t n = values_joule.size();
    for (std::size_t k = 0; k < n; ++k)
        p.theta_grid.push_back(period * static_cast<double>(k) / static_cast<double>(n));
    p.values = values_joule;
    p.values_joule = std::move(values_joule);
    p.inertia_trace.assign(n, inertia);
    p.minima_count = detail::count_periodic_minima(p.values, p.barrier_dimensionless());
    p.two_well = p.minima_count == 2;
    return p;
}

namespace detail {

// Fourier coefficients c_k, |k| <= n/2, of samples on a uniform periodic grid, such that
// f(x) = sum_k c_k exp(i k 2 pi x / period). The Nyquist term is split evenly between +-n/2.
class TrigSeries {
public:
    explicit TrigSeries(const std::vector<double>& samples) : n_(samples.size()) {
        const long half = static_cast<long>(n_ / 2);
        coeff_.assign(static_cast<std::size_t>(2 * half + 1), 0.0);
        for (long k = -half; k <= half; ++k) {
            std::complex<double> s = 0;
            for (std::size_t j = 0; j < n_; ++j) {
                const double a = -2.0 * std::numbers::pi * static_cast<double>(k) *
                                 static_cast<double>(j) / static_cast<double>(n_);
                s += samples[j] * std::complex<double>(std::cos(a), std::sin(a));
            }
            s /= static_cast<double>(n_);
            if (n_ % 2 == 0 && (k == half || k == -half)) s *= 0.5;
            coeff_[static_cast<std::size_t>(k + half)] = s;
        }
    }
    long max_harmonic() const { return static_cast<long>(n_ / 2); }
    std::complex<double> operator[](long k) const {
        const long half = max_harmonic();
        if (k < -half || k > half) return 0.0;
        return coeff_[static_cast<std::size_t>(k + half)];
    }
    /// Value at fractional position x / period.
    double eval(double fraction) const {
        std::complex<double> s = 0;
        const long half = max_harmonic();
        for (long k = -half; k <= half; ++k) {
            const double a = 2.0 * std::numbers::pi * static_cast<double>(k) * fraction;
            s += (*this)[k] * std::complex<double>(std::cos(a), std::sin(a));
        }
        return s.real();
    }

private:
    std::size_t n_;
    std::vector<std::complex<double>> coeff_;
};

struct RawSolution {
    std::vector<double> energies;  // units of K = hbar^2 / 2I
    std::vector<std::complex<double>> psi0, psi1;  // on the output grid, unnormalized
};

inline RawSolution solve_fourier(const TrigSeries& v_over_k, double period, std::size_t resolution,
                                 std::size_t levels, const std::vector<double>& out_fractions) {
    const long m_max = static_cast<long>(resolution / 2);
    const Eigen::Index dim = 2 * m_max + 1;
    const double kappa = 2.0 * std::numbers::pi / period;
    Eigen::MatrixXcd H(dim, dim);
    for (long a = -m_max; a <= m_max; ++a) {
        for (long b = -m_max; b <= m_max; ++b) {
            std::complex<double> e = v_over_k[a - b];
            if (a == b) e += std::pow(kappa * static_cast<double>(a), 2);
            H(a + m_max, b + m_max) = e;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    if (es.info() != Eigen::Success) throw NumericalError("Fourier ring eigensolve failed");
    RawSolution s;
    for (Eigen::Index k = 0; k < std::min<Eigen::Index>(dim, static_cast<Eigen::Index>(levels)); ++k)
        s.energies.push_back(es.eigenvalues()(k));
    for (int which = 0; which < 2; ++which) {
        auto& out = which == 0 ? s.psi0 : s.psi1;
        for (double f : out_fractions) {
            std::complex<double> acc = 0;
            for (long m = -m_max; m <= m_max; ++m) {
                const double a = 2.0 * std::numbers::pi * static_cast<double>(m) * f;
                acc += es.eigenvectors()(m + m_max, which) * std::complex<double>(std::cos(a), std::sin(a));
            }
            out.push_back(acc);
        }
    }
    return s;
}

inline RawSolution solve_finite_difference(const TrigSeries& v_over_k, double period,
                                           std::size_t resolution, std::size_t levels,
                                           const std::vector<double>& out_fractions) {
    const auto n = static_cast<Eigen::Index>(resolution);
    const double h = period / static_cast<double>(resolution);
    const double off = 1.0 / (h * h);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        H(i, i) = 2.0 * off + v_over_k.eval(static_cast<double>(i) / static_cast<double>(n));
        H(i, (i + 1) % n) -= off;
        H(i, (i + n - 1) % n) -= off;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success) throw NumericalError("finite-difference ring eigensolve failed");
    RawSolution s;
    for (Eigen::Index k = 0; k < std::min<Eigen::Index>(n, static_cast<Eigen::Index>(levels)); ++k)
        s.energies.push_back(es.eigenvalues()(k));
    for (int which = 0; which < 2; ++which) {
        std::vector<double> col(static_cast<std::size_t>(n));
        for (Eigen::Index i = 0; i < n; ++i) col[static_cast<std::size_t>(i)] = es.eigenvectors()(i, which);
        const TrigSeries interp(col);
        auto& out = which == 0 ? s.psi0 : s.psi1;
        for (double f : out_fractions) out.push_back(interp.eval(f));
    }
    return s;
}

inline RawSolution solve_raw(const TrigSeries& v, double period, std::size_t resolution,
                             const RingSolverOptions& o, const std::vector<double>& fractions) {
    return o.method == RingMethod::fourier
               ? solve_fourier(v, period, resolution, o.levels, fractions)
               : solve_finite_difference(v, period, resolution, o.levels, fractions);
}

// Real, normalized wavefunctions with psi(theta_well) > 0.
inline std::vector<double> fix_phase(const std::vector<std::complex<double>>& psi, std::size_t well,
                                     double dtheta) {
    std::size_t anchor = well;
    if (std::abs(psi[anchor]) < 1e-8 * std::abs(*std::max_element(
                                            psi.begin(), psi.end(), [](auto a, auto b) {
                                                return std::abs(a) < std::abs(b);
                                            }))) {
        anchor = static_cast<std::size_t>(
            std::max_element(psi.begin(), psi.end(),
                             [](auto a, auto b) { return std::abs(a) < std::abs(b); }) -
            psi.begin());
    }
    const std::complex<double> phase = std::conj(psi[anchor]) / std::abs(psi[anchor]);
    std::vector<double> out(psi.size());
    double norm = 0;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        out[i] = (psi[i] * phase).real();
        norm += out[i] * out[i] * dtheta;
    }
    const double s = 1.0 / std::sqrt(norm);
    for (double& x : out) x *= s;
    return out;
}

}  // namespace detail

inline TunnelDoublet solve_ring(const RotorPotential& potential, const RingSolverOptions& options = {}) {
    if (!(potential.inertia > 0)) throw NumericalError("moment of inertia must be positive");
    if (options.resolution < 128) throw ConfigError("ring solver resolution must be >= 128");
    if (potential.size() < 4) throw ConfigError("potential has too few samples");
    const std::size_t levels = std::max<std::size_t>(options.levels, 2);
    RingSolverOptions opts = options;
    opts.levels = levels;

    const double hbar = PhysicalConstants::hbar;
    const double K = hbar * hbar / (2.0 * potential.inertia);
    std::vector<double> v_over_k(potential.size());
    for (std::size_t i = 0; i < potential.size(); ++i) v_over_k[i] = potential.values_joule[i] / K;
    const detail::TrigSeries series(v_over_k);

    std::vector<double> fractions(potential.size());
    for (std::size_t i = 0; i < potential.size(); ++i)
        fractions[i] = static_cast<double>(i) / static_cast<double>(potential.size());

    detail::RawSolution sol = detail::solve_raw(series, potential.period, options.resolution, opts, fractions);
    std::vector<double> energies = sol.energies;

    TunnelDoublet d;
    d.method = options.method;
    d.resolution = options.resolution;
    const bool need_half = options.check_convergence ||
                           (options.method == RingMethod::finite_difference && options.extrapolate);
    if (need_half) {
        const detail::RawSolution half =
            detail::solve_raw(series, potential.period, options.resolution / 2, opts, {});
        if (options.method == RingMethod::finite_difference && options.extrapolate) {
            // Second-order stencil with an even error series in h: two Romberg levels.
            const detail::RawSolution quarter =
                detail::solve_raw(series, potential.period, options.resolution / 4, opts, {});
            for (std::size_t k = 0; k < energies.size(); ++k) {
                const double r1 = (4.0 * sol.energies[k] - half.energies[k]) / 3.0;
                const double r2 = (4.0 * half.energies[k] - quarter.energies[k]) / 3.0;
                energies[k] = (16.0 * r1 - r2) / 15.0;
            }
        }
        const double s_full = sol.energies[1] - sol.energies[0];
        const double s_half = half.energies[1] - half.energies[0];
        if (std::fabs(s_full - s_half) > 0.01 * std::fabs(s_full)) {
            d.converged = false;
            d.warning = "doublet splitting changed by more than 1% between resolution " +
                        std::to_string(options.resolution / 2) + " and " +
                        std::to_string(options.resolution);
        }
    }

    for (double e : energies) d.spectrum.push_back(e * K);
    d.e0 = d.spectrum[0];
    d.e1 = d.spectrum[1];
    d.splitting = d.e1 - d.e0;
    d.rate_j = d.splitting / (kSplittingPerTunnelingRate * hbar);
    d.rate_hz = d.rate_j / (2.0 * std::numbers::pi);
    d.splitting_hz = d.splitting / PhysicalConstants::planck;

    const double dtheta = potential.period / static_cast<double>(potential.size());
    const double vmin = *std::min_element(potential.values.begin(), potential.values.end());
    const double tie = 1e-9 * std::max(potential.barrier_dimensionless(), 1e-300);
    std::size_t well = 0;
    while (potential.values[well] > vmin + tie) ++well;
    d.theta_grid = potential.theta_grid;
    d.psi0 = detail::fix_phase(sol.psi0, well, dtheta);
    d.psi1 = detail::fix_phase(sol.psi1, well, dtheta);
    const double r = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < d.psi0.size(); ++i) {
        d.psi_up.push_back(r * (d.psi0[i] + d.psi1[i]));
        d.psi_down.push_back(r * (d.psi0[i] - d.psi1[i]));
    }
    return d;
}

// ---------------------------------------------------------------------------------------

struct TunnelingOptions {
    std::size_t grid_size = 256;
    RingSolverOptions solver{};
};

struct TunnelingReport {
    RotorPotential relaxed_potential;
    RotorPotential rigid_potential;
    TunnelDoublet relaxed;
    TunnelDoublet rigid;

    double rate_hz() const { return relaxed.rate_hz; }
    double splitting_joule() const { return relaxed.splitting; }
};

/// Trap -> equilibrium -> relaxed potential -> ring eigenproblem -> tunneling rate. The rigid
/// potential is solved alongside as a cross-check.
inline TunnelingReport tunneling_analysis(const TrapConfig& config, const TunnelingOptions& options = {}) {
    TunnelingReport r;
    r.relaxed_potential = effective_potential(config, {PotentialMethod::relaxed, options.grid_size, false});
    if (!r.relaxed_potential.two_well) throw RegimeError(r.relaxed_potential.warning);
    r.rigid_potential = effective_potential(config, {PotentialMethod::rigid, options.grid_size, false});
    r.relaxed = solve_ring(r.relaxed_potential, options.solver);
    r.rigid = solve_ring(r.rigid_potential, options.solver);
    if (!r.rigid_potential.two_well) {
        r.rigid.warning = r.rigid.warning.empty() ? r.rigid_potential.warning
                                                  : r.rigid.warning + "; " + r.rigid_potential.warning;
    }
    return r;
}

inline double tunneling_rate(const TrapConfig& config, const TunnelingOptions& options = {}) {
    return tunneling_analysis(config, options).rate_hz();
}

}  // namespace qtr
