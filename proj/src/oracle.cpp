#include "spinwave/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "spinwave/errors.hpp"
#include "spinwave/groundstate.hpp"
#include "spinwave/spectrum.hpp"

namespace spinwave {

namespace {

// J_x for spin j = N/2 in the J_z basis m = -j..j (index a = m + j).
Eigen::MatrixXd spin_x(int n_atoms) {
  const int d = n_atoms + 1;
  const double j = 0.5 * n_atoms;
  Eigen::MatrixXd jx = Eigen::MatrixXd::Zero(d, d);
  for (int a = 0; a + 1 < d; ++a) {
    const double m = a - j;
    const double up = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
    jx(a + 1, a) = 0.5 * up;
    jx(a, a + 1) = 0.5 * up;
  }
  return jx;
}

Eigen::MatrixXd single_site_hamiltonian(int n_atoms, double omega, double kappa,
                                        const Eigen::MatrixXd& jx) {
  const int d = n_atoms + 1;
  Eigen::MatrixXd h = 4.0 * kappa * jx * jx;
  for (int a = 0; a < d; ++a) h(a, a) += omega * (a - 0.5 * n_atoms);
  return h;
}

double coupling_multiplier(PairConvention c) { return c == PairConvention::full ? 2.0 : 1.0; }

struct SectorSolution {
  Eigen::VectorXd energies;
  Eigen::MatrixXd vectors;
  std::vector<std::pair<int, int>> basis;
};

SectorSolution solve_sector(const SpinSystemSpec& spec, int parity, const Eigen::MatrixXd& h1,
                            const Eigen::MatrixXd& jx) {
  const int d = spec.n_atoms + 1;
  SectorSolution s;
  std::vector<int> index(static_cast<std::size_t>(d) * d, -1);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      if ((a + b) % 2 != parity) continue;
      index[a * d + b] = static_cast<int>(s.basis.size());
      s.basis.emplace_back(a, b);
    }
  }
  const auto n = static_cast<Eigen::Index>(s.basis.size());
  const double lambda = coupling_multiplier(spec.convention) * spec.g;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto [a, b] = s.basis[r];
    for (int a2 = std::max(0, a - 2); a2 <= std::min(d - 1, a + 2); ++a2) {
      for (int b2 = std::max(0, b - 2); b2 <= std::min(d - 1, b + 2); ++b2) {
        const int c = index[a2 * d + b2];
        if (c < 0) continue;
        double e = lambda * jx(a, a2) * jx(b, b2);
        if (b == b2) e += h1(a, a2);
        if (a == a2) e += h1(b, b2);
        h(r, c) += e;
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed in exact_two_site");
  s.energies = solver.eigenvalues();
  s.vectors = solver.eigenvectors();
  return s;
}

}  // namespace

void SpinSystemSpec::validate_parameters() const {
  if (n_sites != 2) throw std::invalid_argument("only two-site spin systems are supported");
  if (n_atoms < 1) throw std::invalid_argument("n_atoms must be at least 1");
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  if (!(kappa >= 0.0)) throw std::invalid_argument("kappa must be non-negative");
}

void SpinSystemSpec::validate() const {
  validate_parameters();
  if (dimension() > kMaxDimension) {
    throw std::invalid_argument("Hilbert dimension " + std::to_string(dimension()) +
                                " exceeds the dense bound " + std::to_string(kMaxDimension));
  }
}

double SpinSystemSpec::harmonic_critical_g() const {
  const double onsite = omega * (omega + 4.0 * kappa * n_atoms);
  return onsite / (pair_factor(convention) * n_atoms * omega);
}

TwoSiteResult exact_two_site(const SpinSystemSpec& spec) {
  spec.validate();
  const Eigen::MatrixXd jx = spin_x(spec.n_atoms);
  const Eigen::MatrixXd h1 = single_site_hamiltonian(spec.n_atoms, spec.omega, spec.kappa, jx);

  const std::array<SectorSolution, 2> sectors{solve_sector(spec, 0, h1, jx), solve_sector(spec, 1, h1, jx)};

  // Two lowest levels over both sectors.
  struct Level {
    double e;
    int sector;
    Eigen::Index k;
  };
  std::vector<Level> levels;
  for (int p = 0; p < 2; ++p) {
    for (Eigen::Index k = 0; k < std::min<Eigen::Index>(2, sectors[p].energies.size()); ++k) {
      levels.push_back({sectors[p].energies(k), p, k});
    }
  }
  std::sort(levels.begin(), levels.end(), [](const Level& l, const Level& r) { return l.e < r.e; });

  const auto& ground = sectors[levels[0].sector];
  const Eigen::VectorXd psi = ground.vectors.col(levels[0].k);
  double corr = 0.0;
  for (std::size_t r = 0; r < ground.basis.size(); ++r) {
    const auto [a, b] = ground.basis[r];
    for (std::size_t c = 0; c < ground.basis.size(); ++c) {
      const auto [a2, b2] = ground.basis[c];
      if (std::abs(a - a2) != 1 || std::abs(b - b2) != 1) continue;
      corr += psi(static_cast<Eigen::Index>(r)) * jx(a, a2) * jx(b, b2) * psi(static_cast<Eigen::Index>(c));
    }
  }
  return {levels[1].e - levels[0].e, corr, levels[0].e};
}

double exact_single_site_gap(int n_atoms, double omega, double kappa) {
  const Eigen::MatrixXd jx = spin_x(n_atoms);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(single_site_hamiltonian(n_atoms, omega, kappa, jx),
                                                        Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(1) - solver.eigenvalues()(0);
}

TwoSiteResult harmonic_two_site_prediction(const SpinSystemSpec& spec) {
  spec.validate_parameters();
  const double n = spec.n_atoms;
  const double onsite = spec.omega * (spec.omega + 4.0 * spec.kappa * n);
  const double b = pair_factor(spec.convention) * n * spec.omega * spec.g;
  if (!(onsite - std::abs(b) > 0.0)) {
    throw InstabilityError("harmonic two-site model is unstable at g = " + std::to_string(spec.g));
  }
  const double w_plus = std::sqrt(onsite + b);
  const double w_minus = std::sqrt(onsite - b);
  const double q12 = 0.25 * (1.0 / w_plus - 1.0 / w_minus);
  // H ~ -N omega - omega + (zero-point energies of the two normal modes).
  const double e0 = -n * spec.omega - spec.omega + 0.5 * (w_plus + w_minus);
  return {std::min(w_plus, w_minus), 0.5 * n * spec.omega * q12, e0};
}

SymplecticSpectrum symplectic_bruteforce(const Eigen::MatrixXd& Q, const Eigen::MatrixXd& P,
                                         double pairing_tol) {
  if (Q.llt().info() != Eigen::Success || P.llt().info() != Eigen::Success) {
    throw std::invalid_argument("symplectic_bruteforce needs positive-definite Q and P");
  }
  const auto n = Q.rows();
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  gamma.topLeftCorner(n, n) = 2.0 * Q;
  gamma.bottomRightCorner(n, n) = 2.0 * P;
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  j.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);

  Eigen::EigenSolver<Eigen::MatrixXd> solver(j * gamma, false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed in symplectic_bruteforce");
  std::vector<double> moduli;
  for (Eigen::Index i = 0; i < 2 * n; ++i) moduli.push_back(std::abs(solver.eigenvalues()(i)));
  std::sort(moduli.begin(), moduli.end(), std::greater<>());

  SymplecticSpectrum out;
  for (std::size_t i = 0; i < moduli.size(); i += 2) {
    const double nu = 0.5 * (moduli[i] + moduli[i + 1]);
    if (nu < 1.0 - 1e-9) throw std::domain_error("symplectic eigenvalue below 1 in symplectic_bruteforce");
    out.values.push_back(std::max(nu, 1.0));
  }
  out.multiplicities = degeneracy_multiplicities(out.values, pairing_tol);
  return out;
}

std::vector<OracleCheck> run_oracle_battery(const OracleBatteryOptions& options) {
  std::vector<OracleCheck> checks;

  {
    SpinSystemSpec spec{.n_atoms = 10, .omega = 3.0, .kappa = 0.0, .g = 0.0};
    const double gap = exact_two_site(spec).gap;
    checks.push_back({"free_spins_gap", std::abs(gap - spec.omega) < 1e-10,
                      {{"gap", gap}, {"omega", spec.omega}}, "g = 0, kappa = 0"});
  }
  {
    SpinSystemSpec spec{.n_atoms = 20, .omega = 20.0, .kappa = 1.0, .g = 0.0};
    const double two = exact_two_site(spec).gap;
    const double one = exact_single_site_gap(spec.n_atoms, spec.omega, spec.kappa);
    checks.push_back({"tensor_product_gap", std::abs(two - one) < 1e-9 * one,
                      {{"two_site_gap", two}, {"single_site_gap", one}}, "N = 20, omega = 20 kappa, g = 0"});
  }
  {
    OracleCheck trend{"harmonic_convergence_trend", true, {}, "omega = kappa N, g = half the harmonic critical value"};
    double previous = std::numeric_limits<double>::infinity();
    double last = 0.0;
    for (int n : options.trend_sizes) {
      SpinSystemSpec spec{.n_atoms = n, .omega = static_cast<double>(n), .kappa = 1.0};
      spec.g = 0.5 * spec.harmonic_critical_g();
      const double exact = exact_two_site(spec).gap;
      const double harmonic = harmonic_two_site_prediction(spec).gap;
      const double err = std::abs(exact - harmonic) / harmonic;
      trend.values["relative_gap_error_N" + std::to_string(n)] = err;
      if (!(err < previous)) trend.passed = false;
      previous = err;
      last = err;
    }
    if (!(last < 0.05)) trend.passed = false;
    checks.push_back(trend);
  }
  {
    SpinSystemSpec spec{.n_atoms = 10, .omega = 10.0, .kappa = 1.0};
    spec.g = 0.1 * spec.harmonic_critical_g();
    const double exact = exact_two_site(spec).ground_corr;
    const double harmonic = harmonic_two_site_prediction(spec).ground_corr;
    checks.push_back({"correlation_sign", (exact < 0.0) == (harmonic < 0.0),
                      {{"exact", exact}, {"harmonic", harmonic}}, "small g"});
  }
  {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> frac(0.05, 0.95);
    std::uniform_int_distribution<int> pick(0, 24);
    const CouplingParams base{};
    const double gc = critical_g_equal(base);
    double worst = 0.0;
    for (int trial = 0; trial < options.random_blocks; ++trial) {
      CouplingParams p = base;
      p.g1 = frac(rng) * gc;
      p.g2 = frac(rng) * gc;
      // Keep the sample inside the stable region.
      while (dispersion_minimum(p, 5).v <= 1e-3 * p.onsite()) {
        p.g1 *= 0.5;
        p.g2 *= 0.5;
      }
      const auto state = covariance_dense(build_potential(LatticeSpec::periodic(5), p));
      std::vector<int> sites;
      while (sites.size() < 3) {
        const int s = pick(rng);
        if (std::find(sites.begin(), sites.end(), s) == sites.end()) sites.push_back(s);
      }
      const auto block = reduce_sites(state, sites);
      const auto a = symplectic_spectrum(block.Q, block.P).values;
      const auto b = symplectic_bruteforce(block.Q, block.P).values;
      for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    checks.push_back({"symplectic_cross_route", worst < 1e-9,
                      {{"max_abs_difference", worst}, {"blocks", static_cast<double>(options.random_blocks)}},
                      "random 3-site blocks of a 5x5 periodic lattice"});
  }
  {
    const auto params = CouplingParams{}.with_equal_coupling(1.5);
    const auto lattice = LatticeSpec::periodic(6);
    const auto dense = covariance_dense(build_potential(lattice, params));
    const auto table = covariance_pbc_fft(lattice, params);
    double worst = 0.0;
    for (int i = 0; i < lattice.sites(); ++i) {
      for (int j = 0; j < lattice.sites(); ++j) {
        const Displacement r{lattice.x_of(j) - lattice.x_of(i), lattice.y_of(j) - lattice.y_of(i)};
        worst = std::max({worst, std::abs(dense.Q(i, j) - table.qq(r)), std::abs(dense.P(i, j) - table.pp(r))});
      }
    }
    checks.push_back({"dense_vs_fft", worst < 1e-10, {{"max_abs_difference", worst}}, "periodic M = 6, g = 1.5 kappa"});

    const auto full = symplectic_spectrum(dense.Q, dense.P);
    double dev = 0.0;
    for (double nu : full.values) dev = std::max(dev, std::abs(nu - 1.0));
    checks.push_back({"full_system_purity", dev < 1e-9, {{"max_abs_nu_minus_1", dev}}, "periodic M = 6, g = 1.5 kappa"});
  }
  return checks;
}

}  // namespace spinwave
