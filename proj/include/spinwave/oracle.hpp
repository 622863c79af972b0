#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spinwave/entanglement.hpp"
#include "spinwave/model.hpp"

namespace spinwave {

/// Two sites, each a spin N/2 built from N two-level atoms:
///   H = sum_i (omega J_z^i + 4 kappa (J_x^i)^2) + lambda g J_x^1 J_x^2
/// with lambda = 2 for the `full` pair convention (the ordered-pair sum the
/// lattice uses) and lambda = 1 for `half`.
struct SpinSystemSpec {
  int n_atoms = 20;
  double omega = 20.0;
  double kappa = 1.0;
  double g = 0.0;
  PairConvention convention = PairConvention::full;
  int n_sites = 2;

  static constexpr int kMaxDimension = 4000;

  /// Parameter checks plus the dense dimension bound.
  void validate() const;
  void validate_parameters() const;
  int dimension() const { return (n_atoms + 1) * (n_atoms + 1); }

  /// g at which the lower harmonic normal mode goes soft.
  double harmonic_critical_g() const;
};

struct TwoSiteResult {
  double gap;
  double ground_corr;  // <J_x^1 J_x^2> in the ground state
  double ground_energy;
};

/// Dense diagonalisation in the product J_z basis, split into the two
/// sectors of total parity (-1)^{(J_z^1 + J_z^2 + N)}.
TwoSiteResult exact_two_site(const SpinSystemSpec& spec);

/// Lowest gap of a single site omega J_z + 4 kappa J_x^2.
double exact_single_site_gap(int n_atoms, double omega, double kappa);

/// Harmonic (Holstein-Primakoff) prediction: normal modes
/// sqrt(omega(omega + 4 kappa N) +- B), B = N omega g (full) or N omega g / 2
/// (half), and J_x ~ sqrt(N)(c^dagger + c)/2 for the correlation.
TwoSiteResult harmonic_two_site_prediction(const SpinSystemSpec& spec);

/// Independent route to the symplectic spectrum: eigenvalues of J gamma with
/// gamma = 2 diag(Q, P) and J the standard symplectic form. They come in
/// pairs +- i nu; each nu is reported once.
SymplecticSpectrum symplectic_bruteforce(const Eigen::MatrixXd& Q, const Eigen::MatrixXd& P,
                                         double pairing_tol = 1e-8);

struct OracleCheck {
  std::string name;
  bool passed;
  std::map<std::string, double> values;
  std::string note;
};

struct OracleBatteryOptions {
  std::vector<int> trend_sizes{10, 20, 40};
  int random_blocks = 50;
  unsigned long long seed = 20240611ULL;
};

/// Full validation battery behind the `oracle-check` subcommand.
std::vector<OracleCheck> run_oracle_battery(const OracleBatteryOptions& options = {});

}  // namespace spinwave
