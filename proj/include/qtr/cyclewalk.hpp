#pragma once
// Tight-binding dynamics of the rotor.
//
// Two-level sector (all spins equal): basis {|up>, |down>}, both the clockwise and the
// counter-clockwise shift map up <-> down, so with the AB phase
//     H = hbar j (J_cw e^{i theta} + J_ccw e^{-i theta}) = 2 hbar j cos(theta) sigma_x.
//
// Cycle sector (one spin flipped): 2N sites, site n = 2k-1 is the up orientation with the
// flipped ion at position k, site 2k the down orientation. Hopping n -> n+1 carries e^{i theta}:
//     H(n+1, n) = hbar j e^{i theta},  H(n, n+1) = hbar j e^{-i theta},  site 2N+1 == 1.
//
// Public time arguments are normalized, tau = j t.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "qtr/error.hpp"
#include "qtr/physcore.hpp"

namespace qtr {

using cplx = std::complex<double>;

inline void require_normalized(double norm2, const char* what) {
    if (!(std::fabs(norm2 - 1.0) <= 1e-12))
        throw ConfigError(std::string(what) + " is not normalized (norm^2 = " +
                          std::to_string(norm2) + ")");
}

// ---------------------------------------------------------------------------------------
// Two-level sector

struct TwoLevelState {
    cplx alpha{1.0, 0.0};  // |psi_up>
    cplx beta{0.0, 0.0};   // |psi_down>

    double norm2() const { return std::norm(alpha) + std::norm(beta); }
    static TwoLevelState up() { return {{1.0, 0.0}, {0.0, 0.0}}; }
    static TwoLevelState down() { return {{0.0, 0.0}, {1.0, 0.0}}; }
};

inline double probability_up(const TwoLevelState& s) { return std::norm(s.alpha); }

/// Off-diagonal element of the two-level Hamiltonian in units of hbar j.
inline double two_level_coupling(ABPhase theta) { return 2.0 * std::cos(theta.value()); }

/// exp(-i H t / hbar) with H = 2 hbar j cos(theta) sigma_x; tau = j t.
inline TwoLevelState evolve_two_level(const TwoLevelState& s, ABPhase theta, double tau) {
    require_normalized(s.norm2(), "two-level state");
    if (!(tau >= 0)) throw ConfigError("evolution time must be >= 0");
    const double phi = two_level_coupling(theta) * tau;
    const double c = std::cos(phi), sn = std::sin(phi);
    const cplx mi(0.0, -sn);
    return {c * s.alpha + mi * s.beta, mi * s.alpha + c * s.beta};
}

/// SI-time overload: rate_j in rad/s, t in s.
inline TwoLevelState evolve_two_level(const TwoLevelState& s, double rate_j, ABPhase theta, double t) {
    return evolve_two_level(s, theta, rate_j * t);
}

struct InterferenceRow {
    double tau;
    double theta_ab;
    double p_up;
};

/// P_up(tau) starting from |psi_up>, rows ordered by theta then time.
inline std::vector<InterferenceRow> interference_scan(const std::vector<ABPhase>& thetas,
                                                      const std::vector<double>& tau_grid) {
    std::vector<InterferenceRow> rows;
    rows.reserve(thetas.size() * tau_grid.size());
    for (const ABPhase th : thetas)
        for (double tau : tau_grid)
            rows.push_back({tau, th.value(), probability_up(evolve_two_level(TwoLevelState::up(), th, tau))});
    return rows;
}

// ---------------------------------------------------------------------------------------
// Cycle sector

enum class Orientation { up, down };

/// up -> 2k - 1, down -> 2k (1-based, k in [1, N]).
inline std::size_t spin_site_label(Orientation o, std::size_t position, std::size_t n_ions) {
    if (position < 1 || position > n_ions)
        throw ConfigError("ion position " + std::to_string(position) + " outside [1, " +
                          std::to_string(n_ions) + "]");
    return o == Orientation::up ? 2 * position - 1 : 2 * position;
}

struct SiteLabel {
    Orientation orientation;
    std::size_t position;
};

inline SiteLabel site_to_label(std::size_t site, std::size_t n_ions) {
    if (site < 1 || site > 2 * n_ions)
        throw ConfigError("site " + std::to_string(site) + " outside [1, " +
                          std::to_string(2 * n_ions) + "]");
    return site % 2 == 1 ? SiteLabel{Orientation::up, (site + 1) / 2}
                         : SiteLabel{Orientation::down, site / 2};
}

/// Amplitudes gamma_n; amplitudes[0] is site 1.
struct CycleState {
    std::vector<cplx> amplitudes;

    std::size_t size() const { return amplitudes.size(); }
    double norm2() const {
        double s = 0;
        for (const auto& a : amplitudes) s += std::norm(a);
        return s;
    }
    double probability(std::size_t site) const { return std::norm(amplitudes.at(site - 1)); }
    static CycleState localized(std::size_t sites, std::size_t site) {
        if (site < 1 || site > sites) throw ConfigError("initial site outside [1, " + std::to_string(sites) + "]");
        CycleState s;
        s.amplitudes.assign(sites, 0.0);
        s.amplitudes[site - 1] = 1.0;
        return s;
    }
};

struct WalkHamiltonian {
    std::size_t size = 0;
    double rate_j = 1.0;  // rad/s
    ABPhase theta_ab{};

    /// Dense matrix in units of hbar j. Entries add up, so the two-site cycle (one ion)
    /// carries the two-level coupling 2 cos(theta).
    Eigen::MatrixXcd matrix() const {
        const auto n = static_cast<Eigen::Index>(size);
        Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
        const cplx ph = std::polar(1.0, theta_ab.value());
        for (Eigen::Index a = 0; a < n; ++a) {
            const Eigen::Index b = (a + 1) % n;
            H(b, a) += ph;
            H(a, b) += std::conj(ph);
        }
        return H;
    }

    /// Eigenvalue of Fourier mode m, in units of hbar j: 2 cos(2 pi m / size - theta).
    double mode_energy(std::size_t m) const {
        return 2.0 * std::cos(2.0 * std::numbers::pi * static_cast<double>(m) /
                                  static_cast<double>(size) -
                              theta_ab.value());
    }
};

inline WalkHamiltonian cycle_hamiltonian_for_sites(std::size_t sites, double rate_j, ABPhase theta) {
    if (sites < 2) throw ConfigError("a cycle needs at least two sites");
    return {sites, rate_j, theta};
}

inline WalkHamiltonian build_cycle_hamiltonian(std::size_t n_ions, double rate_j, ABPhase theta) {
    if (n_ions < 2) throw ConfigError("n_ions must be >= 2");
    return cycle_hamiltonian_for_sites(2 * n_ions, rate_j, theta);
}

/// exp(-i H tau) state in the circulant eigenbasis: Fourier modes e^{i 2 pi m n / size}.
inline CycleState evolve_cycle(const WalkHamiltonian& h, const CycleState& state, double tau) {
    require_normalized(state.norm2(), "cycle state");
    if (state.size() != h.size) throw ConfigError("state size does not match the Hamiltonian");
    const std::size_t n = h.size;
    const double w = 2.0 * std::numbers::pi / static_cast<double>(n);
    std::vector<cplx> modes(n);
    for (std::size_t m = 0; m < n; ++m) {
        cplx acc = 0;
        for (std::size_t s = 0; s < n; ++s)
            acc += state.amplitudes[s] * std::polar(1.0, -w * static_cast<double>((m * s) % n));
        modes[m] = acc * std::polar(1.0, -h.mode_energy(m) * tau);
    }
    CycleState out;
    out.amplitudes.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
        cplx acc = 0;
        for (std::size_t m = 0; m < n; ++m)
            acc += modes[m] * std::polar(1.0, w * static_cast<double>((m * s) % n));
        out.amplitudes[s] = acc / static_cast<double>(n);
    }
    return out;
}

struct WalkRow {
    double tau;
    std::vector<double> probabilities;  // index 0 is site 1
};

inline std::vector<WalkRow> walk_distribution(const WalkHamiltonian& h, std::size_t initial_site,
                                              const std::vector<double>& tau_grid) {
    const CycleState start = CycleState::localized(h.size, initial_site);
    std::vector<WalkRow> rows;
    rows.reserve(tau_grid.size());
    for (double tau : tau_grid) {
        const CycleState s = evolve_cycle(h, start, tau);
        WalkRow r{tau, {}};
        for (const auto& a : s.amplitudes) r.probabilities.push_back(std::norm(a));
        rows.push_back(std::move(r));
    }
    return rows;
}

/// Uniform normalized-time grid of `steps` intervals on [0, tau_max].
inline std::vector<double> time_grid(double tau_max, std::size_t steps) {
    if (!(tau_max >= 0) || steps == 0) throw ConfigError("time grid needs t_max >= 0 and t_steps >= 1");
    std::vector<double> t(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k)
        t[k] = tau_max * static_cast<double>(k) / static_cast<double>(steps);
    return t;
}

}  // namespace qtr
