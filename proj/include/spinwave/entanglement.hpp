#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spinwave/groundstate.hpp"

namespace spinwave {

/// L x L block of sites anchored at (x0, y0). Wraps around periodic
/// lattices; must fit inside open ones.
struct BlockRegion {
  int x0 = 0;
  int y0 = 0;
  int side = 1;

  /// Block placed at the lattice centre, x0 = y0 = (M - L) / 2.
  static BlockRegion centered(const LatticeSpec& lattice, int side);

  void validate(const LatticeSpec& lattice) const;
  /// Site coordinates in row-major order within the block.
  std::vector<std::pair<int, int>> coordinates() const;
};

struct BlockCovariance {
  Eigen::MatrixXd Q;
  Eigen::MatrixXd P;
};

BlockCovariance reduce_block(const GroundState& state, const BlockRegion& region);
BlockCovariance reduce_block(const CovariancePair& state, const BlockRegion& region);
BlockCovariance reduce_block(const CorrelationTable& state, const BlockRegion& region);

/// Principal submatrices for an arbitrary site set (e.g. a block complement).
BlockCovariance reduce_sites(const CovariancePair& state, std::span<const int> sites);

/// Symplectic eigenvalues, sorted descending, grouped into degeneracy
/// multiplets (values within a relative tolerance of the multiplet's first
/// member). sum(multiplicities) == values.size().
struct SymplecticSpectrum {
  std::vector<double> values;
  std::vector<int> multiplicities;
};

/// nu_i = sqrt(eig(4 Q P)), computed as 2 sqrt(eig(R P R)) with R = Q^{1/2}
/// so the eigenproblem stays symmetric. Values below 1 - 1e-9 are rejected,
/// the rest are clamped to >= 1.
SymplecticSpectrum symplectic_spectrum(const Eigen::MatrixXd& Q, const Eigen::MatrixXd& P,
                                       double pairing_tol = 1e-8);

/// Groups sorted-descending values into multiplets.
std::vector<int> degeneracy_multiplicities(std::span<const double> values, double pairing_tol);

enum class EntropyMode { count_all, degenerate_once };

const char* to_string(EntropyMode m);

/// Von Neumann entropy contribution of one symplectic eigenvalue, in bits.
double mode_entropy(double nu);

double block_entropy(const SymplecticSpectrum& spectrum, EntropyMode mode);

struct EntropyOptions {
  EntropyMode mode = EntropyMode::count_all;
  double pairing_tol = 1e-8;
  QuadratureSpec quad{};
};

struct EntropyPoint {
  int L;
  double entropy;
};

/// Entropy of the centred L x L block for each L (strictly increasing).
std::vector<EntropyPoint> entropy_vs_L(const CouplingParams& params, const LatticeSpec& lattice,
                                       Engine engine, std::span<const int> L_list,
                                       const EntropyOptions& options = {});

/// Same, reusing an existing ground state.
std::vector<EntropyPoint> entropy_vs_L(const GroundState& state, std::span<const int> L_list,
                                       const EntropyOptions& options = {});

struct TwoSiteParams {
  double n;
  double c;
  double zeta;
  double eof;  // bits
  bool separable;
  bool sign_anomaly;  // <q_i q_j><p_i p_j> > 0; c was set to 0
};

/// Standard-form parameters of the two-site reduced state,
/// n = 2 sqrt(<q_i^2><p_i^2>), c = 2 sqrt(-<q_i q_j><p_i p_j>), zeta = n - c.
/// The on-site moments of i and j must agree to `symmetry_tol` (relative).
TwoSiteParams two_site_params(const CovariancePair& state, int site_i, int site_j,
                              double symmetry_tol = 1e-6);

TwoSiteParams two_site_params(const CorrelationTable& state, Displacement r);

/// Entanglement of formation of a symmetric two-mode Gaussian state with
/// parameter zeta: zero for zeta >= 1, otherwise
/// c+ log2 c+ - c- log2 c-, c+- = (zeta^{-1/2} +- zeta^{1/2})^2 / 4.
double eof_symmetric(double zeta);

}  // namespace spinwave
