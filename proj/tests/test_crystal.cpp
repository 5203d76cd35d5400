#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qtr/crystal.hpp"

using namespace qtr;

namespace {

IonConfiguration scattered(std::size_t n) {
    IonConfiguration c;
    for (std::size_t k = 0; k < n; ++k)
        c.positions.push_back({0.9 * std::cos(1.1 + 2.3 * k), 0.8 * std::sin(0.4 + 1.9 * k) + 0.1 * k});
    return c;
}

// Central differences of the energy, independent of the analytic derivatives.
Eigen::VectorXd numeric_gradient(double rho, const IonConfiguration& c, double h = 1e-6) {
    const Eigen::VectorXd q = c.coordinates();
    Eigen::VectorXd g(q.size());
    for (Eigen::Index i = 0; i < q.size(); ++i) {
        Eigen::VectorXd a = q, b = q;
        a(i) += h;
        b(i) -= h;
        g(i) = static_cast<double>((potential_energy_extended(rho, IonConfiguration::from_coordinates(a)) -
                                    potential_energy_extended(rho, IonConfiguration::from_coordinates(b))) /
                                   (2 * h));
    }
    return g;
}

double rotational_of(double rho, std::size_t n) {
    const Equilibrium eq = find_equilibrium(rho, make_seed(NamedSeed::ring_up, n));
    return normal_modes(rho, eq.ions).rotational_frequency();
}

}  // namespace

TEST(Potential, GradientMatchesFiniteDifferences) {
    for (std::size_t n : {2u, 3u, 5u}) {
        const auto c = scattered(n);
        const Eigen::VectorXd g = gradient(1.07, c), ng = numeric_gradient(1.07, c);
        EXPECT_LT((g - ng).cwiseAbs().maxCoeff(), 1e-7) << "n = " << n;
    }
}

TEST(Potential, HessianMatchesFiniteDifferencesOfGradient) {
    const auto c = scattered(4);
    const Eigen::MatrixXd H = hessian(1.3, c);
    const Eigen::VectorXd q = c.coordinates();
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < q.size(); ++i) {
        Eigen::VectorXd a = q, b = q;
        a(i) += h;
        b(i) -= h;
        const Eigen::VectorXd col = (gradient(1.3, IonConfiguration::from_coordinates(a)) -
                                     gradient(1.3, IonConfiguration::from_coordinates(b))) /
                                    (2 * h);
        EXPECT_LT((H.col(i) - col).cwiseAbs().maxCoeff(), 1e-6);
    }
    EXPECT_LT((H - H.transpose()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Potential, CoulombForcesCancelPairwise) {
    // Setting rho = 0 and z extent aside, the sum of Coulomb forces vanishes; the trap part
    // contributes rho^2 sum x and sum z.
    const auto c = scattered(5);
    const Eigen::VectorXd g = gradient(1.2, c);
    double fx = 0, fz = 0, sx = 0, sz = 0;
    for (std::size_t k = 0; k < c.size(); ++k) {
        fx += g(2 * k);
        fz += g(2 * k + 1);
        sx += c.positions[k].x;
        sz += c.positions[k].z;
    }
    EXPECT_NEAR(fx, 1.2 * 1.2 * sx, 1e-12);
    EXPECT_NEAR(fz, sz, 1e-12);
}

TEST(Potential, RotationInvariantWhenIsotropic) {
    const auto c = scattered(3);
    for (double a : {0.3, 1.0, 2.5})
        EXPECT_NEAR(potential_energy(1.0, c.rotated(a)), potential_energy(1.0, c), 1e-12);
}

TEST(Potential, MirrorInvariant) {
    auto c = scattered(4), m = c;
    for (auto& p : m.positions) p.x = -p.x;
    EXPECT_NEAR(potential_energy(1.01, m), potential_energy(1.01, c), 1e-12);
}

TEST(Potential, CoincidentIonsThrow) {
    IonConfiguration c;
    c.positions = {{0.1, 0.2}, {0.1, 0.2}};
    EXPECT_THROW(potential_energy(1.0, c), SingularConfigurationError);
}

TEST(Equilibrium, TwoIonsAnalytic) {
    // Two ions along x or z: separation d with 2 (d/2)^2 rho'^2 / 2 + 1/d minimal at (d/2)^3 = 1/(4 rho'^2).
    const double a = std::cbrt(0.25);
    const Equilibrium eq = find_equilibrium(1.2, make_seed(NamedSeed::chain, 2));
    EXPECT_NEAR(std::fabs(eq.ions.positions[0].z), a, 1e-9);
    EXPECT_NEAR(std::fabs(eq.ions.positions[1].z), a, 1e-9);
    EXPECT_NEAR(eq.ions.positions[0].x, 0.0, 1e-9);
    EXPECT_NEAR(static_cast<double>(eq.energy), a * a + 1.0 / (2 * a), 1e-12);
}

TEST(Equilibrium, RingUpAndDownAreMirrorImages) {
    for (auto [n, rho] : {std::pair<std::size_t, double>{3, 1.001}, {5, 1.01}}) {
        const Equilibrium up = find_equilibrium(rho, make_seed(NamedSeed::ring_up, n));
        const Equilibrium dn = find_equilibrium(rho, make_seed(NamedSeed::ring_down, n));
        EXPECT_NEAR(static_cast<double>(up.energy - dn.energy), 0.0, 1e-12);
        // Map down to up by x -> -x and match ion sets.
        for (const auto& p : dn.ions.positions) {
            double best = 1e9;
            for (const auto& q : up.ions.positions)
                best = std::min(best, std::hypot(-p.x - q.x, p.z - q.z));
            EXPECT_LT(best, 1e-9);
        }
    }
}

TEST(Equilibrium, RingUpHasVertexOnPositiveX) {
    const Equilibrium eq = find_equilibrium(1.001, make_seed(NamedSeed::ring_up, 3));
    const auto it = std::max_element(eq.ions.positions.begin(), eq.ions.positions.end(),
                                     [](const Ion& a, const Ion& b) { return a.x < b.x; });
    EXPECT_NEAR(it->z, 0.0, 1e-9);
    EXPECT_GT(it->x, 0.0);
    EXPECT_LT(eq.gradient_norm, 1e-10);
    EXPECT_GT(eq.lowest_hessian_eigenvalue, 0.0);
}

TEST(Equilibrium, ThreeIonChainStabilityThreshold) {
    // Transverse zig-zag instability of the linear chain at rho^2 = 12/5.
    IonConfiguration chain;
    const double a = std::cbrt(1.25);
    chain.positions = {{0.0, -a}, {0.0, 0.0}, {0.0, a}};
    EXPECT_LT(gradient(1.2, chain).norm(), 1e-12);
    EXPECT_LT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(hessian(1.2, chain)).eigenvalues()(0), -0.1);
    EXPECT_THROW(normal_modes(1.2, chain), UnstableEquilibriumError);
    const Equilibrium eq = find_equilibrium(2.0, make_seed(NamedSeed::chain, 3));
    for (const auto& p : eq.ions.positions) EXPECT_NEAR(p.x, 0.0, 1e-9);
    EXPECT_NEAR(std::fabs(eq.ions.positions[0].z), std::cbrt(1.25), 1e-9);
}

TEST(Modes, CentreOfMassModesExact) {
    for (std::size_t n : {3u, 5u}) {
        const double rho = 1.01;
        const Equilibrium eq = find_equilibrium(rho, make_seed(NamedSeed::ring_up, n));
        const ModeSpectrum s = normal_modes(rho, eq.ions);
        ASSERT_EQ(s.size(), 2 * n);
        const auto find = [&](const std::string& label) {
            return std::find(s.labels.begin(), s.labels.end(), label) - s.labels.begin();
        };
        EXPECT_NEAR(s.frequencies[find("com-x")] / rho, 1.0, 1e-9);
        EXPECT_NEAR(s.frequencies[find("com-z")], 1.0, 1e-9);
        ASSERT_TRUE(s.rotational.has_value());
        EXPECT_EQ(*s.rotational, 0u);
    }
}

TEST(Modes, RotationalModeVanishesWhenIsotropic) {
    const Equilibrium eq = find_equilibrium(1.0, make_seed(NamedSeed::ring_up, 3));
    EXPECT_LT(normal_modes(1.0, eq.ions).rotational_frequency(), 1e-5);
}

TEST(Modes, SingleIonHasTrapFrequencies) {
    IonConfiguration one;
    one.positions = {{0.0, 0.0}};
    const ModeSpectrum s = normal_modes(1.3, one);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_NEAR(s.frequencies[0], 1.0, 1e-12);
    EXPECT_NEAR(s.frequencies[1], 1.3, 1e-12);
}

TEST(Modes, RotationalModeGrowsWithAnisotropy) {
    double prev = 0;
    for (double rho : {1.0005, 1.001, 1.005, 1.02, 1.1}) {
        const double w = rotational_of(rho, 3);
        EXPECT_GT(w, prev);
        prev = w;
    }
}

TEST(Modes, RotationalModeRegression) {
    EXPECT_NEAR(rotational_of(1.001, 3), 8.163e-5, 1e-7);
}

TEST(Modes, ScanTracksEveryMode) {
    TrapConfig c = TrapConfig::ytterbium(3, 1.001);
    std::vector<double> grid;
    for (int k = 0; k <= 20; ++k) grid.push_back(1.0005 + 0.01 * k);
    const auto scan = scan_modes(c, grid);
    ASSERT_EQ(scan.size(), grid.size());
    for (const auto& p : scan) {
        std::vector<std::size_t> t = p.tracked;
        std::sort(t.begin(), t.end());
        for (std::size_t k = 0; k < t.size(); ++k) EXPECT_EQ(t[k], k);
    }
    EXPECT_THROW(scan_modes(c, {}), ConfigError);
}

TEST(Adiabaticity, StaticRampIsZero) {
    const TrapConfig c = TrapConfig::ytterbium(3, 1.01);
    const std::vector<double> t{0.0, 1e-3, 2e-3};
    const std::vector<double> w(3, 1.01 * c.omega_z);
    const auto r = adiabaticity(c, t, w);
    EXPECT_EQ(r.max_eta, 0.0);
}

TEST(Adiabaticity, HalvingDurationDoublesEta) {
    const TrapConfig c = TrapConfig::ytterbium(3, 1.01);
    const auto [t1, w1] = linear_ramp(c.omega_z, 1.1, 1.001, 0.01, 51);
    const auto [t2, w2] = linear_ramp(c.omega_z, 1.1, 1.001, 0.005, 51);
    EXPECT_NEAR(adiabaticity(c, t2, w2).max_eta / adiabaticity(c, t1, w1).max_eta, 2.0, 1e-9);
}

TEST(Adiabaticity, TenMillisecondRampRegression) {
    const TrapConfig c = TrapConfig::ytterbium(3, 1.01);
    const auto [t, w] = linear_ramp(c.omega_z, 1.1, 1.001, 0.01, 101);
    EXPECT_NEAR(adiabaticity(c, t, w).max_eta, 23.481876915298248, 1e-6);
}

TEST(Adiabaticity, RejectsIsotropicCrossing) {
    const TrapConfig c = TrapConfig::ytterbium(3, 1.01);
    const auto [t, w] = linear_ramp(c.omega_z, 1.01, 0.99, 0.01, 11);
    EXPECT_THROW(adiabaticity(c, t, w), ConfigError);
    EXPECT_THROW(adiabaticity(c, {0.0, 0.0}, {1.1 * c.omega_z, 1.1 * c.omega_z}), ConfigError);
}
