#include <cmath>

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "spinwave/errors.hpp"
#include "spinwave/groundstate.hpp"
#include "spinwave/spectrum.hpp"

using namespace spinwave;

namespace {

const CouplingParams base{};

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

double max_table_difference(const CovariancePair& dense, const CorrelationTable& table) {
  const auto& lat = dense.lattice;
  double worst = 0.0;
  for (int i = 0; i < lat.sites(); ++i) {
    for (int j = 0; j < lat.sites(); ++j) {
      const Displacement r{lat.x_of(j) - lat.x_of(i), lat.y_of(j) - lat.y_of(i)};
      worst = std::max({worst, std::abs(dense.Q(i, j) - table.qq(r)), std::abs(dense.P(i, j) - table.pp(r))});
    }
  }
  return worst;
}

}  // namespace

TEST(CovarianceDense, DecoupledClosedForm) {
  const auto s = covariance_dense(build_potential(LatticeSpec::open(3), base));
  EXPECT_TRUE(s.Q.isApprox(Eigen::MatrixXd::Identity(9, 9) / 3000.0, 1e-14));
  EXPECT_TRUE(s.P.isApprox(750.0 * Eigen::MatrixXd::Identity(9, 9), 1e-14));
}

TEST(CovarianceDense, PureStateAndPositivity) {
  for (const auto& lat : {LatticeSpec::open(4), LatticeSpec::periodic(4)}) {
    for (double g : {0.5, 1.2, 1.7}) {
      const auto s = covariance_dense(build_potential(lat, base.with_equal_coupling(g)));
      EXPECT_EQ(s.Q, s.Q.transpose());
      EXPECT_EQ(s.P, s.P.transpose());
      EXPECT_EQ(s.Q.llt().info(), Eigen::Success);
      EXPECT_EQ(s.P.llt().info(), Eigen::Success);
      const Eigen::MatrixXd qp = 4.0 * s.Q * s.P;
      EXPECT_LT(max_abs(qp - Eigen::MatrixXd::Identity(16, 16)), 1e-10);
    }
  }
}

TEST(CovarianceDense, RefusesUnstablePotential) {
  EXPECT_THROW(covariance_dense(build_potential(LatticeSpec::periodic(4), base.with_equal_coupling(1.8))),
               InstabilityError);
}

TEST(CovarianceFft, MatchesDenseOnSmallTori) {
  for (int m : {4, 5, 6, 8}) {
    for (double g1 : {0.0, 0.7, 1.3}) {
      for (double g2 : {0.0, 0.9, 1.6}) {
        CouplingParams p = base;
        p.g1 = g1;
        p.g2 = g2;
        const auto lat = LatticeSpec::periodic(m);
        if (!stability_check(build_potential(lat, p)).stable) continue;
        const auto dense = covariance_dense(build_potential(lat, p));
        EXPECT_LT(max_table_difference(dense, covariance_pbc_fft(lat, p)), 1e-10) << m << " " << g1 << " " << g2;
      }
    }
  }
}

TEST(CovarianceFft, DecoupledAndSumRule) {
  const auto t0 = covariance_pbc_fft(LatticeSpec::periodic(6), base);
  EXPECT_NEAR(t0.qq({0, 0}), 1.0 / 3000.0, 1e-16);
  EXPECT_NEAR(t0.qq({1, 2}), 0.0, 1e-16);

  const int m = 7;
  const auto p = base.with_equal_coupling(1.3);
  const auto t = covariance_pbc_fft(LatticeSpec::periodic(m), p);
  double sum = 0.0;
  for (int x = 0; x < m; ++x) {
    for (int y = 0; y < m; ++y) sum += t.qq({x, y});
  }
  EXPECT_NEAR(sum, 0.5 / std::sqrt(potential_symbol(p, 0.0, 0.0)), 1e-15);
}

TEST(CorrelationTable, SymmetricUnderReflection) {
  CouplingParams p = base;
  p.g1 = 0.8;
  p.g2 = 1.4;
  const auto t = covariance_pbc_fft(LatticeSpec::periodic(9), p);
  for (int dx = -3; dx <= 3; ++dx) {
    for (int dy = -3; dy <= 3; ++dy) {
      EXPECT_EQ(t.qq({dx, dy}), t.qq({-dx, -dy}));
      EXPECT_EQ(t.qq({dx, dy}), t.qq({-dx, dy}));
      EXPECT_EQ(t.pp({dx, dy}), t.pp({dx, -dy}));
      EXPECT_EQ(t.qq({dx, dy}), t.qq({dx + 9, dy - 9}));
    }
  }
  const auto inf = covariance_infinite(p, 2);
  EXPECT_THROW(inf.qq({3, 0}), std::out_of_range);
  EXPECT_FALSE(inf.contains({0, -3}));
  EXPECT_TRUE(inf.contains({-2, 1}));
}

TEST(CovarianceInfinite, DecoupledClosedForm) {
  const auto t = covariance_infinite(base, 2);
  EXPECT_NEAR(t.qq({0, 0}), 1.0 / 3000.0, 1e-18);
  EXPECT_NEAR(t.pp({0, 0}), 750.0, 1e-10);
  EXPECT_NEAR(t.qq({1, 1}), 0.0, 1e-18);
}

TEST(CovarianceInfinite, AgreesWithLargeTorus) {
  const auto p = base.with_equal_coupling(1.25);
  const auto fft = covariance_pbc_fft(LatticeSpec::periodic(160), p);
  const auto inf = covariance_infinite(p, 3);
  for (int dx = 0; dx <= 3; ++dx) {
    for (int dy = 0; dy <= 3; ++dy) {
      EXPECT_NEAR(inf.qq({dx, dy}) / fft.qq({dx, dy}), 1.0, 1e-8);
      EXPECT_NEAR(inf.pp({dx, dy}) / fft.pp({dx, dy}), 1.0, 1e-8);
    }
  }
}

TEST(CovarianceInfinite, TorusDifferenceShrinksWithSize) {
  // Far from criticality the torus converges exponentially fast, so the
  // difference either halves per doubling or is already at round-off.
  const auto p = base.with_equal_coupling(1.25);
  const auto inf = covariance_infinite(p, 1);
  double previous = INFINITY;
  for (int m : {40, 80, 160}) {
    const auto t = covariance_pbc_fft(LatticeSpec::periodic(m), p);
    const double diff = std::abs(t.qq({1, 0}) - inf.qq({1, 0})) / std::abs(inf.qq({1, 0}));
    EXPECT_TRUE(diff <= 0.5 * previous || diff < 1e-12) << m << " " << diff;
    previous = diff;
  }
}

TEST(CovarianceInfinite, ConvergesNearCriticality) {
  const double gc = critical_g_equal(base);
  const auto t = covariance_infinite(base.with_equal_coupling(gc * (1.0 - 1e-4)), 1);
  EXPECT_GT(t.quadrature_order(), 64);
  EXPECT_TRUE(std::isfinite(t.qq({1, 0})));
  // Pure-state bound on-site: <q^2><p^2> >= 1/4.
  EXPECT_GE(4.0 * t.qq({0, 0}) * t.pp({0, 0}), 1.0);
}

TEST(CovarianceInfinite, CorrelationsGrowTowardsCriticality) {
  double previous = 0.0;
  for (double g : {0.5, 1.0, 1.5, 1.7, 1.74}) {
    const double q = std::abs(covariance_infinite(base.with_equal_coupling(g), 1).qq({1, 0}));
    EXPECT_GT(q, previous) << g;
    previous = q;
  }
}

TEST(CovarianceInfinite, GuardAndConvergenceErrors) {
  const double gc = critical_g_equal(base);
  EXPECT_THROW(covariance_infinite(base.with_equal_coupling(gc * (1.0 - 1e-14)), 1), InstabilityError);
  EXPECT_THROW(covariance_infinite(base.with_equal_coupling(1.8), 1), InstabilityError);
  QuadratureSpec tight{16, 1e-15, 32};
  try {
    covariance_infinite(base.with_equal_coupling(gc * (1.0 - 1e-6)), 1, tight);
    FAIL();
  } catch (const ConvergenceError& e) {
    EXPECT_NE(e.last(), e.previous());
  }
}

TEST(ExcitationDensity, DecoupledIsOneOver3000) {
  for (const auto& lat : {LatticeSpec::open(3), LatticeSpec::periodic(4), LatticeSpec::infinite_lattice()}) {
    EXPECT_NEAR(excitation_density(base, lat, default_engine(lat)), 1.0 / 3000.0, 1e-15);
  }
}

TEST(ExcitationDensity, SmallInTheSpinWaveRegime) {
  for (double g : {0.5, 1.0, 1.25, 1.5}) {
    EXPECT_LT(excitation_density(base.with_equal_coupling(g), LatticeSpec::infinite_lattice(), Engine::infinite),
              1e-2);
  }
}

TEST(ExcitationDensity, StaysFiniteAtTheTransition) {
  // In two dimensions the k^{-1} singularity of <q^2> is integrable, so the
  // density approaches a finite limit instead of diverging.
  const double gc = critical_g_equal(base);
  const double near = excitation_density(base.with_equal_coupling(gc * (1.0 - 1e-11)),
                                         LatticeSpec::infinite_lattice(), Engine::infinite);
  const double closer = excitation_density(base.with_equal_coupling(gc * (1.0 - 1e-4)),
                                           LatticeSpec::infinite_lattice(), Engine::infinite);
  EXPECT_TRUE(std::isfinite(near));
  EXPECT_LT(near, 1e-2);
  EXPECT_NEAR(near, closer, 1e-2 * near);
}

TEST(SolveGroundState, DispatchesOnEngine) {
  const auto p = base.with_equal_coupling(1.0);
  EXPECT_TRUE(std::holds_alternative<CovariancePair>(solve_ground_state(p, LatticeSpec::open(4), Engine::dense)));
  EXPECT_TRUE(std::holds_alternative<CorrelationTable>(solve_ground_state(p, LatticeSpec::periodic(4), Engine::fft)));
  EXPECT_THROW(solve_ground_state(p, LatticeSpec::open(4), Engine::fft), std::invalid_argument);
  EXPECT_THROW(solve_ground_state(p, LatticeSpec::periodic(4), Engine::infinite), std::invalid_argument);
}
