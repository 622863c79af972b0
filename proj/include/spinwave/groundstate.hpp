#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "spinwave/model.hpp"

namespace spinwave {

enum class Engine { dense, fft, infinite };

const char* to_string(Engine e);

/// dense for open lattices, fft for periodic ones, infinite for the
/// continuum zone.
Engine default_engine(const LatticeSpec& lattice);

/// Second moments of the Gaussian ground state: Q = V^{-1/2} / 2 and
/// P = V^{1/2} / 2. First moments vanish and are not stored.
struct CovariancePair {
  Eigen::MatrixXd Q;
  Eigen::MatrixXd P;
  Engine engine = Engine::dense;
  CouplingParams params;
  LatticeSpec lattice;
};

struct Displacement {
  int dx;
  int dy;
  bool operator==(const Displacement&) const = default;
};

std::string to_string(Displacement r);

/// Translation-invariant covariances <q_0 q_r>, <p_0 p_r> keyed by the
/// displacement r. The symbol is even in kx and ky separately, so only
/// |dx|, |dy| are stored; on a periodic lattice displacements wrap modulo
/// the side.
class CorrelationTable {
 public:
  CorrelationTable(Engine engine, LatticeSpec lattice, CouplingParams params, int extent_x,
                   int extent_y, std::vector<double> qq, std::vector<double> pp,
                   int quadrature_order = 0);

  double qq(Displacement r) const { return qq_[slot(r)]; }
  double pp(Displacement r) const { return pp_[slot(r)]; }
  bool contains(Displacement r) const;

  int extent_x() const { return extent_x_; }
  int extent_y() const { return extent_y_; }
  Engine engine() const { return engine_; }
  const LatticeSpec& lattice() const { return lattice_; }
  const CouplingParams& params() const { return params_; }
  /// Nodes per axis of the converged quadrature (infinite engine only).
  int quadrature_order() const { return order_; }

 private:
  std::size_t slot(Displacement r) const;
  Displacement canonical(Displacement r) const;

  Engine engine_;
  LatticeSpec lattice_;
  CouplingParams params_;
  int extent_x_;
  int extent_y_;
  std::vector<double> qq_;
  std::vector<double> pp_;
  int order_;
};

struct QuadratureSpec {
  int base_order = 64;      // nodes per axis on the first level, >= 16
  double tolerance = 1e-10; // relative change between successive doublings
  int max_order = 4096;

  void validate() const;
  bool operator==(const QuadratureSpec&) const = default;
};

/// Refuse inputs with (min v_k) / (omega(omega + 4 kappa N)) below this; on the
/// line g1 = g2 the ratio equals (g_c - g) / g_c.
inline constexpr double kNearCriticalGuard = 1e-12;

/// Dense engine via the symmetric eigendecomposition V = U D U^T.
CovariancePair covariance_dense(const PotentialMatrix& V);

/// Periodic engine: inverse 2D FFT of v_k^{-1/2} and v_k^{1/2} on the M x M
/// discrete zone.
CorrelationTable covariance_pbc_fft(const LatticeSpec& spec, const CouplingParams& params);

/// Infinite-lattice engine: product trapezoidal rule over the zone after a
/// sin^4 periodizing change of variables centred on the dispersion minimum,
/// doubling the order until successive estimates agree.
CorrelationTable covariance_infinite(const CouplingParams& params,
                                     std::span<const Displacement> displacements,
                                     const QuadratureSpec& quad = {});

/// Same, for all |dx|, |dy| <= extent.
CorrelationTable covariance_infinite(const CouplingParams& params, int extent,
                                     const QuadratureSpec& quad = {});

using GroundState = std::variant<CovariancePair, CorrelationTable>;

/// Runs the requested engine. `extent` is the largest displacement the
/// infinite engine has to provide; the finite engines ignore it.
GroundState solve_ground_state(const CouplingParams& params, const LatticeSpec& lattice,
                               Engine engine, int extent = 1, const QuadratureSpec& quad = {});

/// <q_i^2>, <p_i^2> of a representative site (site-averaged for the dense
/// engine).
struct OnsiteMoments {
  double qq;
  double pp;
};

OnsiteMoments onsite_moments(const GroundState& state);

/// <c^dagger c> / N per site, (omega <q^2> + <p^2>/omega - 1) / (2N).
double excitation_density(const CouplingParams& params, const LatticeSpec& lattice,
                          Engine engine, const QuadratureSpec& quad = {});

}  // namespace spinwave
