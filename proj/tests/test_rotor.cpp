#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qtr/rotor.hpp"

using namespace qtr;

namespace {

RotorPotential relaxed(std::size_t n, double rho, std::size_t grid = 128) {
    return effective_potential(TrapConfig::ytterbium(n, rho), PotentialMethod::relaxed, grid);
}

}  // namespace

TEST(Rotor, FlatWhenIsotropic) {
    const RotorPotential p = relaxed(3, 1.0, 64);
    for (double v : p.values) EXPECT_LT(std::fabs(v), 1e-12);
    EXPECT_FALSE(p.two_well);
    EXPECT_FALSE(p.warning.empty());
}

TEST(Rotor, WellsAtZeroAndHalfPeriod) {
    const RotorPotential p = relaxed(3, 1.001, 256);
    ASSERT_TRUE(p.two_well);
    EXPECT_NEAR(p.period, 2 * std::numbers::pi / 3, 1e-15);
    const double b = p.barrier_dimensionless();
    EXPECT_GT(b, 0);
    EXPECT_LT(std::fabs(p.values[0]), 1e-6 * b);
    EXPECT_LT(std::fabs(p.values[128]), 1e-6 * b);
    EXPECT_NEAR(p.values[64], b, 1e-6 * b);
    EXPECT_NEAR(p.values[192], b, 1e-6 * b);
}

TEST(Rotor, MirrorSymmetric) {
    const RotorPotential p = relaxed(3, 1.002, 128);
    const double b = p.barrier_dimensionless();
    for (std::size_t k = 1; k < p.size(); ++k) EXPECT_NEAR(p.values[k], p.values[p.size() - k], 1e-6 * b);
}

TEST(Rotor, RelaxedNeverAboveRigid) {
    const TrapConfig c = TrapConfig::ytterbium(3, 1.001);
    const auto r = effective_potential(c, PotentialMethod::relaxed, 64);
    const auto g = effective_potential(c, PotentialMethod::rigid, 64);
    for (std::size_t k = 0; k < r.size(); ++k) EXPECT_LE(r.values[k], g.values[k] + 1e-15);
    EXPECT_GT(barrier_height(g), 100 * barrier_height(r));
}

TEST(Rotor, FullCircleRepeatsReducedRing) {
    const TrapConfig c = TrapConfig::ytterbium(3, 1.002);
    const auto reduced = effective_potential(c, PotentialMethod::relaxed, 64);
    const auto full = effective_potential(c, RotorOptions{PotentialMethod::relaxed, 64, true});
    ASSERT_EQ(full.size(), 3 * reduced.size());
    EXPECT_TRUE(full.two_well);
    const double b = reduced.barrier_dimensionless();
    for (std::size_t k = 0; k < full.size(); ++k)
        EXPECT_NEAR(full.values[k], reduced.values[k % reduced.size()], 1e-6 * b);
}

TEST(Rotor, GridRefinementLeavesSamplesUnchanged) {
    const auto coarse = relaxed(3, 1.001, 128), fine = relaxed(3, 1.001, 256);
    const double b = coarse.barrier_dimensionless();
    for (std::size_t k = 0; k < coarse.size(); ++k) EXPECT_NEAR(coarse.values[k], fine.values[2 * k], 1e-6 * b);
}

TEST(Rotor, BarrierRegression) {
    const RotorPotential p = relaxed(3, 1.001, 256);
    EXPECT_NEAR(p.barrier_dimensionless() / 7.695e-10, 1.0, 1e-3);
    EXPECT_NEAR(barrier_height(p) / PhysicalConstants::planck, 128.09682231386773, 1e-3);
}

TEST(Rotor, BarrierGrowsWithAnisotropy) {
    double prev = 0;
    for (double rho : {1.0005, 1.001, 1.002, 1.005}) {
        const double b = relaxed(3, rho, 64).barrier_dimensionless();
        EXPECT_GT(b, prev);
        prev = b;
    }
}

TEST(Rotor, BarrierScalingNearIsotropy) {
    // Rigid rotation probes the quadratic anisotropy energy directly; relaxation cancels it to
    // leading order and leaves the cubic term.
    const TrapConfig a = TrapConfig::ytterbium(3, 1.0005), b = TrapConfig::ytterbium(3, 1.001);
    const double relaxed_ratio = barrier_height(effective_potential(b, PotentialMethod::relaxed, 64)) /
                                 barrier_height(effective_potential(a, PotentialMethod::relaxed, 64));
    const double rigid_ratio = barrier_height(effective_potential(b, PotentialMethod::rigid, 64)) /
                               barrier_height(effective_potential(a, PotentialMethod::rigid, 64));
    EXPECT_NEAR(relaxed_ratio, 8.0, 0.1);
    EXPECT_NEAR(rigid_ratio, 4.0, 0.05);
}

TEST(Rotor, EvenIonNumberBarrierIsMuchHigher) {
    const double b3 = barrier_height(relaxed(3, 1.005, 64));
    const double b4 = barrier_height(relaxed(4, 1.005, 64));
    EXPECT_GT(b4 / b3, 10.0);
    EXPECT_NEAR(b4 / b3, 417.0, 5.0);
}

TEST(Rotor, CurvatureMatchesRotationalMode) {
    const double rho = 1.001;
    const RotorPotential p = relaxed(3, rho, 256);
    const ModeSpectrum s = normal_modes(rho, p.equilibrium);
    // Harmonic well: V = (1/2) sum r^2 omega_rot^2 theta^2 in dimensionless units.
    const double dth = p.theta_grid[1];
    const double curvature = (p.values[1] + p.values[p.size() - 1] - 2 * p.values[0]) / (dth * dth);
    const double w = s.rotational_frequency();
    EXPECT_NEAR(curvature / (p.equilibrium.sum_squared_radius() * w * w), 1.0, 0.02);
}

TEST(Inertia, MatchesDefinitionAndScales) {
    const TrapConfig c = TrapConfig::ytterbium(3, 1.001);
    const Equilibrium eq = find_equilibrium(c, NamedSeed::ring_up);
    const double l = characteristic_length(c);
    double sum = 0;
    for (const auto& p : eq.ions.positions) sum += p.x * p.x + p.z * p.z;
    EXPECT_NEAR(moment_of_inertia(c, eq.ions) / (c.ion_mass * l * l * sum), 1.0, 1e-12);
    EXPECT_NEAR(moment_of_inertia(c, eq.ions), 2.5812652017472592e-36, 1e-47);

    TrapConfig heavy = c;
    heavy.ion_mass *= 2;
    EXPECT_NEAR(moment_of_inertia(heavy, eq.ions) / moment_of_inertia(c, eq.ions), std::cbrt(2.0), 1e-12);
}

TEST(Rotor, RejectsCoarseGrid) {
    EXPECT_THROW(effective_potential(TrapConfig::ytterbium(3, 1.001), PotentialMethod::relaxed, 32), ConfigError);
}
