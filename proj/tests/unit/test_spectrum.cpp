#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "spinwave/errors.hpp"
#include "spinwave/model.hpp"
#include "spinwave/spectrum.hpp"

using namespace spinwave;

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);
const CouplingParams base{};

// Closed form, written out independently of the library.
double expected_gc(const CouplingParams& p) {
  return (p.omega + 4.0 * p.kappa * p.n_atoms) / (p.n_atoms * (4.0 - kSqrt2));
}

}  // namespace

TEST(Dispersion, DecoupledIsFlat) {
  for (double kx : {0.0, 0.3, kPi}) {
    for (double ky : {-2.0, 0.0, 1.7}) {
      const auto d = dispersion(base, kx, ky);
      EXPECT_DOUBLE_EQ(d.v, 2.25e6);
      ASSERT_TRUE(d.omega_k.has_value());
      EXPECT_NEAR(*d.omega_k, 1500.0, 1e-9);
    }
  }
}

TEST(Dispersion, EvenInK) {
  CouplingParams p = base;
  p.g1 = 0.6;
  p.g2 = 1.4;
  for (double kx : {0.2, 1.1, 2.9}) {
    for (double ky : {0.4, 1.9}) EXPECT_DOUBLE_EQ(dispersion(p, kx, ky).v, dispersion(p, -kx, -ky).v);
  }
}

TEST(Dispersion, MatchesExplicitFormula) {
  CouplingParams p = base;
  p.g1 = 0.6;
  p.g2 = 1.4;
  const double n_omega = p.n_atoms * p.omega;
  for (double kx : {0.2, 1.1, 2.9}) {
    for (double ky : {0.4, 1.9, kPi}) {
      const double v = p.onsite() + 2.0 * n_omega *
                                        (p.g1 * std::cos(kx) + p.g2 * std::cos(ky) +
                                         p.g2 / std::pow(2.0, 1.5) * (std::cos(kx + ky) + std::cos(kx - ky)));
      EXPECT_NEAR(dispersion(p, kx, ky).v, v, 1e-9 * p.onsite());
    }
  }
}

TEST(Dispersion, VanishesAtCriticalCorner) {
  const auto p = base.with_equal_coupling(critical_g_equal(base));
  EXPECT_LT(std::abs(dispersion(p, kPi, kPi).v), 1e-6 * p.onsite());
}

TEST(Dispersion, GapIdentityAtOnePointFive) {
  const auto d = dispersion(base.with_equal_coupling(1.5), kPi, kPi);
  const double expected = base.omega * base.n_atoms * (4.0 - kSqrt2) * (expected_gc(base) - 1.5);
  EXPECT_NEAR(d.v, expected, 1e-9 * base.onsite());
  EXPECT_NEAR(d.v, 3.1066e5, 5.0);
  EXPECT_FALSE(dispersion(base.with_equal_coupling(1.8), kPi, kPi).omega_k.has_value());
}

TEST(CriticalG, DefaultParameters) {
  const double gc = critical_g_equal(base);
  EXPECT_NEAR(gc, 1.74028, 5e-6);
  EXPECT_NEAR(gc, expected_gc(base), 1e-14);
}

TEST(CriticalG, SmallOmegaAndLargeNLimits) {
  CouplingParams p = base;
  p.omega = 1e-9;
  EXPECT_NEAR(critical_g_equal(p), 4.0 / (4.0 - kSqrt2), 1e-9);
  EXPECT_NEAR(critical_g_equal(p), 1.54692, 1e-5);
  p = base;
  p.n_atoms = 1e12;
  EXPECT_NEAR(critical_g_equal(p), 4.0 / (4.0 - kSqrt2), 1e-9);
}

TEST(CriticalG2, DegeneratePointAndContinuity) {
  const double g1_switch = (4.0 * base.kappa + base.omega / base.n_atoms) / (2.0 * kSqrt2);
  const auto at = critical_g2(base, g1_switch);
  EXPECT_EQ(at.branch, Branch::degenerate);
  EXPECT_NEAR(at.g2_critical, 2.25, 1e-12);
  EXPECT_NEAR(at.g2_critical, kSqrt2 * g1_switch, 1e-12);
  // Both adjacent closed forms meet there.
  const double below = (4.0 - 2.0 * g1_switch + 0.5) / (2.0 - kSqrt2);
  const double above = (4.0 + 2.0 * g1_switch + 0.5) / (2.0 + kSqrt2);
  EXPECT_NEAR(below, 2.25, 1e-9);
  EXPECT_NEAR(above, 2.25, 1e-9);
}

TEST(CriticalG2, ZeroG1SitsOnTheUpperBranch) {
  // g2 = sqrt2 g1 = 0 cannot be the boundary, so the (0, pi) branch applies:
  // (4 + 0.5) / (2 + sqrt2) rather than (4 + 0.5) / (2 - sqrt2).
  const auto p = critical_g2(base, 0.0);
  EXPECT_EQ(p.branch, Branch::above);
  EXPECT_NEAR(p.g2_critical, 4.5 / (2.0 + kSqrt2), 1e-12);
  EXPECT_NEAR(p.kx, 0.0, 0.0);
  EXPECT_NEAR(p.ky, kPi, 1e-15);
  ASSERT_TRUE(p.g2_numeric.has_value());
  EXPECT_NEAR(*p.g2_numeric, p.g2_critical, 1e-6);
}

TEST(CriticalG2, BelowBranchMinimizerIsPiPi) {
  const auto p = critical_g2(base, 2.0);
  EXPECT_EQ(p.branch, Branch::below);
  EXPECT_NEAR(p.g2_critical, (4.0 - 4.0 + 0.5) / (2.0 - kSqrt2), 1e-12);
  EXPECT_NEAR(p.kx, kPi, 1e-15);
  EXPECT_NEAR(p.ky, kPi, 1e-15);
}

TEST(CriticalG2, ClosedFormMatchesBisectionWhereStable) {
  for (double g1 = 0.0; g1 <= 2.2; g1 += 0.1) {
    const auto p = critical_g2(base, g1);
    ASSERT_TRUE(p.g2_numeric.has_value()) << g1;
    EXPECT_NEAR(*p.g2_numeric, p.g2_critical, 1e-6) << g1;
  }
}

TEST(CriticalG2, NoRootWhenUnstableAtZeroG2) {
  // Horizontal coupling alone destabilises the lattice once 2 g1 > 4 kappa + omega / N.
  EXPECT_FALSE(numeric_critical_g2(base, 2.5).has_value());
  EXPECT_FALSE(critical_g2(base, 3.0).g2_numeric.has_value());
}

TEST(DispersionMinimum, AlwaysOnAZoneCorner) {
  for (double g1 : {0.0, 0.3, 0.9, 1.5}) {
    for (double g2 : {0.0, 0.4, 1.0, 1.6}) {
      CouplingParams p = base;
      p.g1 = g1;
      p.g2 = g2;
      // Dense scan independent of the library's search.
      double best = INFINITY;
      const int n = 128;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) best = std::min(best, potential_symbol(p, 2 * kPi * i / n, 2 * kPi * j / n));
      }
      const auto m = dispersion_minimum(p);
      EXPECT_LE(m.v, best + 1e-9 * p.onsite());
      double corner_min = INFINITY;
      for (auto c : kZoneCorners) corner_min = std::min(corner_min, corner_symbol(p, c));
      EXPECT_NEAR(m.v, corner_min, 1e-9 * p.onsite());
    }
  }
}

TEST(EnergyGap, DecoupledIs1500) {
  EXPECT_DOUBLE_EQ(energy_gap(base, LatticeSpec::infinite_lattice()), 1500.0);
  EXPECT_DOUBLE_EQ(energy_gap(base, LatticeSpec::periodic(8)), 1500.0);
}

TEST(EnergyGap, SquaredGapIsLinearInDistanceToCritical) {
  const double gc = expected_gc(base);
  const double slope = base.omega * base.n_atoms * (4.0 - kSqrt2);
  for (double g : {0.0, 0.5, 1.0, 1.5, 1.7, 1.74}) {
    const double gap = energy_gap(base.with_equal_coupling(g), LatticeSpec::infinite_lattice());
    EXPECT_NEAR(gap * gap / (slope * (gc - g)), 1.0, 1e-8) << g;
  }
}

TEST(EnergyGap, MonotoneDecreasing) {
  double previous = INFINITY;
  for (double g = 0.0; g < critical_g_equal(base); g += 0.05) {
    const double gap = energy_gap(base.with_equal_coupling(g), LatticeSpec::infinite_lattice());
    EXPECT_LT(gap, previous);
    previous = gap;
  }
}

TEST(EnergyGap, FiniteOddLatticeGapConvergesFromAbove) {
  const auto p = base.with_equal_coupling(1.5);
  const double inf = energy_gap(p, LatticeSpec::infinite_lattice());
  double previous = INFINITY;
  for (int m : {21, 41, 81}) {
    const double gap = energy_gap(p, LatticeSpec::periodic(m));
    EXPECT_GE(gap, inf);
    EXPECT_LT(gap - inf, previous);
    previous = gap - inf;
  }
}

TEST(EnergyGap, RefusesBeyondCritical) {
  try {
    energy_gap(base.with_equal_coupling(1.8), LatticeSpec::infinite_lattice());
    FAIL();
  } catch (const InstabilityError& e) {
    EXPECT_NE(std::string(e.what()).find("beyond critical coupling g_c = 1.74028"), std::string::npos) << e.what();
  }
}

TEST(GapScaling, AsymptoticWindow) {
  const double gc = critical_g_equal(base);
  const auto s = gap_scaling_exponent(base, 0.9 * gc, 0.999 * gc, 20);
  EXPECT_NEAR(s.exponent, 0.5, 0.005);
  EXPECT_NEAR(s.prefactor / std::sqrt(base.omega * base.n_atoms * (4.0 - kSqrt2)), 1.0, 1e-3);
  EXPECT_NEAR(s.prefactor, 1137.05, 0.01);
}

TEST(GapScaling, FiniteLatticeDeviatesAwayFromCriticality) {
  const double gc = critical_g_equal(base);
  // In the continuum the squared gap is exactly linear in g_c - g; the finite
  // odd lattice misses the (pi, pi) mode and bends the curve.
  const auto inf = gap_scaling_exponent(base, 0.1 * gc, 0.5 * gc, 10);
  EXPECT_NEAR(inf.exponent, 0.5, 1e-9);
  const auto finite = gap_scaling_exponent(base, 0.1 * gc, 0.5 * gc, 10, LatticeSpec::periodic(5));
  EXPECT_GT(std::abs(finite.exponent - 0.5), 0.01);
}

TEST(GapScaling, NeedsTwoSamples) {
  const double gc = critical_g_equal(base);
  EXPECT_THROW(gap_scaling_exponent(base, 0.9 * gc, 0.95 * gc, 1), std::invalid_argument);
  EXPECT_THROW(gap_scaling_exponent(base, 0.9 * gc, gc, 5), std::invalid_argument);
}
