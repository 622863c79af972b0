#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "spinwave/entanglement.hpp"
#include "spinwave/errors.hpp"
#include "spinwave/spectrum.hpp"

using namespace spinwave;

namespace {

const CouplingParams base{};

// Entropy of either mode of a two-mode squeezed vacuum with e^{-2r} = zeta,
// summed over its Fock-basis Schmidt coefficients (1 - l^2) l^{2n}, l = tanh r.
double squeezed_vacuum_entropy(double zeta) {
  const double r = -0.5 * std::log(zeta);
  const double l2 = std::tanh(r) * std::tanh(r);
  double s = 0.0;
  for (int n = 0; n < 4000; ++n) {
    const double p = (1.0 - l2) * std::pow(l2, n);
    if (p < 1e-300) break;
    s -= p * std::log2(p);
  }
  return s;
}

CovariancePair squeezed_vacuum(double r) {
  CovariancePair s;
  s.Q.resize(2, 2);
  s.P.resize(2, 2);
  const double c = 0.5 * std::cosh(2 * r), sh = 0.5 * std::sinh(2 * r);
  s.Q << c, sh, sh, c;
  s.P << c, -sh, -sh, c;
  s.lattice = LatticeSpec::open(2);
  return s;
}

double entropy_of(const BlockCovariance& b, EntropyMode mode = EntropyMode::count_all) {
  return block_entropy(symplectic_spectrum(b.Q, b.P), mode);
}

}  // namespace

TEST(BlockRegion, CenteredAndValidated) {
  const auto r = BlockRegion::centered(LatticeSpec::periodic(80), 20);
  EXPECT_EQ(r.x0, 30);
  EXPECT_EQ(r.y0, 30);
  EXPECT_THROW((BlockRegion{5, 5, 3}.validate(LatticeSpec::open(6))), std::invalid_argument);
  EXPECT_NO_THROW((BlockRegion{5, 5, 3}.validate(LatticeSpec::periodic(6))));
  EXPECT_THROW((BlockRegion{0, 0, 7}.validate(LatticeSpec::periodic(6))), std::invalid_argument);
  const auto coords = BlockRegion{1, 2, 2}.coordinates();
  ASSERT_EQ(coords.size(), 4u);
  EXPECT_EQ(coords[1], std::make_pair(2, 2));
}

TEST(ReduceBlock, WholeSystemSingleSiteAndDecoupled) {
  const auto lat = LatticeSpec::open(4);
  const auto full = covariance_dense(build_potential(lat, base.with_equal_coupling(1.0)));
  const auto whole = reduce_block(full, BlockRegion{0, 0, 4});
  EXPECT_EQ(whole.Q, full.Q);
  EXPECT_EQ(whole.P, full.P);

  const auto one = reduce_block(full, BlockRegion{1, 2, 1});
  ASSERT_EQ(one.Q.rows(), 1);
  EXPECT_EQ(one.Q(0, 0), full.Q(lat.index(1, 2), lat.index(1, 2)));

  const auto free = covariance_dense(build_potential(lat, base));
  const auto b = reduce_block(free, BlockRegion{1, 1, 2});
  EXPECT_TRUE(b.Q.isApprox(Eigen::MatrixXd::Identity(4, 4) / 3000.0));
  EXPECT_TRUE(b.P.isApprox(750.0 * Eigen::MatrixXd::Identity(4, 4)));
}

TEST(ReduceBlock, TableAndDenseAgreeOnTheTorus) {
  const auto p = base.with_equal_coupling(1.4);
  const auto lat = LatticeSpec::periodic(6);
  const auto dense = covariance_dense(build_potential(lat, p));
  const auto table = covariance_pbc_fft(lat, p);
  const BlockRegion wrap{4, 5, 3};
  const auto a = reduce_block(dense, wrap);
  const auto b = reduce_block(table, wrap);
  EXPECT_LT((a.Q - b.Q).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((a.P - b.P).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(SymplecticSpectrum, PureAndVacuum) {
  const auto s = covariance_dense(build_potential(LatticeSpec::periodic(5), base.with_equal_coupling(1.5)));
  for (double nu : symplectic_spectrum(s.Q, s.P).values) EXPECT_NEAR(nu, 1.0, 1e-9);
  Eigen::MatrixXd q(1, 1), p(1, 1);
  q << 1.0 / 3000.0;
  p << 750.0;
  EXPECT_NEAR(symplectic_spectrum(q, p).values[0], 1.0, 1e-15);
}

TEST(SymplecticSpectrum, MixedSingleSite) {
  const auto t = covariance_infinite(base.with_equal_coupling(1.5), 0);
  Eigen::MatrixXd q(1, 1), p(1, 1);
  q << t.qq({0, 0});
  p << t.pp({0, 0});
  const auto s = symplectic_spectrum(q, p);
  ASSERT_EQ(s.values.size(), 1u);
  EXPECT_GT(s.values[0], 1.0);
  EXPECT_NEAR(s.values[0], 2.0 * std::sqrt(q(0, 0) * p(0, 0)), 1e-12);
}

TEST(SymplecticSpectrum, RejectsUnphysicalInput) {
  Eigen::MatrixXd q(1, 1), p(1, 1);
  q << 0.1;
  p << 0.1;
  EXPECT_THROW(symplectic_spectrum(q, p), std::domain_error);
  q << -1.0;
  EXPECT_THROW(symplectic_spectrum(q, p), std::invalid_argument);
}

TEST(BlockEntropy, HandValues) {
  EXPECT_DOUBLE_EQ(mode_entropy(1.0), 0.0);
  EXPECT_NEAR(mode_entropy(3.0), 2.0, 1e-15);
  const SymplecticSpectrum twice{{3.0, 3.0}, {2}};
  EXPECT_NEAR(block_entropy(twice, EntropyMode::count_all), 4.0, 1e-14);
  EXPECT_NEAR(block_entropy(twice, EntropyMode::degenerate_once), 2.0, 1e-14);
  const SymplecticSpectrum ones{{1.0, 1.0, 1.0}, {3}};
  EXPECT_EQ(block_entropy(ones, EntropyMode::count_all), 0.0);
}

TEST(BlockEntropy, Multiplicities) {
  const std::vector<double> v{3.0, 3.0 * (1 + 1e-10), 2.0, 1.5, 1.5};
  const auto m = degeneracy_multiplicities(v, 1e-8);
  EXPECT_EQ(m, (std::vector<int>{2, 1, 2}));
}

TEST(BlockEntropy, CountAllDominatesDegenerateOnce) {
  const auto state = covariance_pbc_fft(LatticeSpec::periodic(12), base.with_equal_coupling(1.5));
  for (int L = 1; L <= 6; ++L) {
    const auto s = reduce_block(state, BlockRegion::centered(state.lattice(), L));
    const auto spec = symplectic_spectrum(s.Q, s.P);
    EXPECT_GE(block_entropy(spec, EntropyMode::count_all), block_entropy(spec, EntropyMode::degenerate_once));
    EXPECT_GE(block_entropy(spec, EntropyMode::count_all), 0.0);
  }
}

TEST(EntropyVsL, ProductStateHasNoEntropy) {
  const std::vector<int> Ls{1, 2, 3, 4};
  for (const auto& p : entropy_vs_L(base, LatticeSpec::periodic(8), Engine::fft, Ls)) EXPECT_EQ(p.entropy, 0.0);
}

TEST(EntropyVsL, IncreasingAndRejectsOversizedBlocks) {
  const std::vector<int> Ls{2, 4, 6, 8, 10};
  const auto curve = entropy_vs_L(base.with_equal_coupling(1.25), LatticeSpec::periodic(40), Engine::fft, Ls);
  for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_GT(curve[i].entropy, curve[i - 1].entropy);
  const std::vector<int> bad{9};
  EXPECT_THROW(entropy_vs_L(base, LatticeSpec::periodic(8), Engine::fft, bad), std::invalid_argument);
}

TEST(EntropyVsL, SerialAndParallelAgree) {
  const std::vector<int> Ls{1, 3, 5, 7};
  const auto p = base.with_equal_coupling(1.5);
  const auto state = solve_ground_state(p, LatticeSpec::periodic(20), Engine::fft);
  const auto a = entropy_vs_L(state, Ls, {});
  std::vector<EntropyPoint> b;
  for (int L : Ls) {
    const std::vector<int> one{L};
    b.push_back(entropy_vs_L(state, one, {}).front());
  }
  for (std::size_t i = 0; i < Ls.size(); ++i) EXPECT_EQ(a[i].entropy, b[i].entropy);
}

TEST(EntropyInvariants, ComplementDuality) {
  const auto lat = LatticeSpec::open(8);
  const auto s = covariance_dense(build_potential(lat, base.with_equal_coupling(1.2)));
  for (int L = 1; L < 8; ++L) {
    const auto region = BlockRegion::centered(lat, L);
    std::vector<int> inside, outside;
    for (auto [x, y] : region.coordinates()) inside.push_back(lat.index(x, y));
    for (int i = 0; i < lat.sites(); ++i) {
      if (std::find(inside.begin(), inside.end(), i) == inside.end()) outside.push_back(i);
    }
    EXPECT_NEAR(entropy_of(reduce_sites(s, inside)), entropy_of(reduce_sites(s, outside)), 1e-8) << L;
  }
}

TEST(EntropyInvariants, PermutationInvariance) {
  const auto lat = LatticeSpec::open(6);
  const auto s = covariance_dense(build_potential(lat, base.with_equal_coupling(1.5)));
  std::vector<int> sites;
  for (auto [x, y] : BlockRegion{1, 1, 3}.coordinates()) sites.push_back(lat.index(x, y));
  const double e = entropy_of(reduce_sites(s, sites));
  std::mt19937 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(sites.begin(), sites.end(), rng);
    EXPECT_NEAR(entropy_of(reduce_sites(s, sites)), e, 1e-10);
  }
}

TEST(EntropyInvariants, DecoupledRowsAreAdditive) {
  CouplingParams p = base;
  p.g1 = 1.5;  // g2 = 0 removes vertical and diagonal bonds
  const auto lat = LatticeSpec::open(6);
  const auto s = covariance_dense(build_potential(lat, p));
  for (int L = 1; L <= 4; ++L) {
    std::vector<int> segment;
    for (int x = 1; x < 1 + L; ++x) segment.push_back(lat.index(x, 2));
    const double row = entropy_of(reduce_sites(s, segment));
    const double block = entropy_of(reduce_block(s, BlockRegion{1, 1, L}));
    EXPECT_NEAR(block, L * row, 1e-9) << L;
  }
}

TEST(TwoSite, DecoupledIsSeparable) {
  const auto t = covariance_infinite(base, 1);
  const auto p = two_site_params(t, {1, 0});
  EXPECT_NEAR(p.n, 1.0, 1e-12);
  EXPECT_EQ(p.c, 0.0);
  EXPECT_NEAR(p.zeta, 1.0, 1e-12);
  EXPECT_TRUE(p.separable);
  EXPECT_EQ(p.eof, 0.0);
}

TEST(TwoSite, SqueezedVacuumOracle) {
  for (double r : {0.05, 0.3, 0.6931471805599453, 1.2}) {
    const auto p = two_site_params(squeezed_vacuum(r), 0, 1);
    EXPECT_NEAR(p.zeta, std::exp(-2 * r), 1e-12);
    EXPECT_NEAR(p.eof, squeezed_vacuum_entropy(p.zeta), 1e-10) << r;
    EXPECT_FALSE(p.separable);
  }
}

TEST(TwoSite, EofHandValuesAndMonotone) {
  EXPECT_EQ(eof_symmetric(1.0), 0.0);
  EXPECT_NEAR(eof_symmetric(0.25), squeezed_vacuum_entropy(0.25), 1e-12);
  EXPECT_NEAR(eof_symmetric(0.25), 1.47294, 1e-5);
  double previous = INFINITY;
  for (double z = 0.01; z < 1.0; z += 0.01) {
    const double f = eof_symmetric(z);
    EXPECT_LT(f, previous);
    previous = f;
  }
  EXPECT_THROW(eof_symmetric(0.0), std::invalid_argument);
}

TEST(TwoSite, OnlyNearestNeighboursEntangled) {
  const auto t = covariance_infinite(base.with_equal_coupling(1.5), 2);
  const auto nearest = two_site_params(t, {1, 0});
  const auto diagonal = two_site_params(t, {1, 1});
  const auto second = two_site_params(t, {2, 0});
  EXPECT_LT(nearest.zeta, 1.0);
  EXPECT_GE(diagonal.zeta, 1.0);
  EXPECT_GE(second.zeta, 1.0);
  EXPECT_TRUE(diagonal.sign_anomaly);
  EXPECT_EQ(diagonal.c, 0.0);
  EXPECT_FALSE(nearest.sign_anomaly);
}

TEST(TwoSite, FiniteTorusConvergesToInfinite) {
  const auto p = base.with_equal_coupling(1.5);
  const double inf = two_site_params(covariance_infinite(p, 1), {1, 0}).zeta;
  double previous = INFINITY;
  for (int m : {10, 20, 40}) {
    const double d = std::abs(two_site_params(covariance_pbc_fft(LatticeSpec::periodic(m), p), {1, 0}).zeta - inf);
    EXPECT_TRUE(d < previous || d < 1e-12) << m;
    previous = d;
  }
  EXPECT_LT(previous, 1e-9);
}

TEST(TwoSite, RejectsAsymmetricDensePairs) {
  const auto lat = LatticeSpec::open(5);
  const auto s = covariance_dense(build_potential(lat, base.with_equal_coupling(1.5)));
  try {
    two_site_params(s, lat.index(0, 0), lat.index(1, 0));
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("symmetric"), std::string::npos);
  }
  EXPECT_NO_THROW(two_site_params(s, lat.index(1, 2), lat.index(3, 2)));
  EXPECT_THROW(two_site_params(s, 3, 3), std::invalid_argument);
}
