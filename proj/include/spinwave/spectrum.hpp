#pragma once

#include <optional>
#include <string>

#include "spinwave/model.hpp"

namespace spinwave {

struct DispersionPoint {
  double kx;
  double ky;
  double v;                       // Fourier symbol of V (energy^2)
  std::optional<double> omega_k;  // sqrt(v) when v >= 0

  bool stable() const { return v >= 0.0; }
};

DispersionPoint dispersion(const CouplingParams& params, double kx, double ky);

enum class Branch { below, degenerate, above };

const char* to_string(Branch b);

struct PhasePoint {
  double g1;
  double g2_critical;   // closed form
  Branch branch;        // below: g2 < sqrt(2) g1 at criticality, minimum at (pi, pi)
  double kx;            // minimizing wavevector at criticality
  double ky;
  /// Bisection root of min_k v_k(g2) = 0 over g2 >= 0. Empty when the lattice
  /// is already unstable at g2 = 0 (g1 >= (4 kappa + omega/N) / 2).
  std::optional<double> g2_numeric;
};

/// Critical vertical coupling for a given horizontal coupling (params.g2 is
/// ignored). The closed form comes from the zeros of the symbol at (pi, pi)
/// and (0, pi); the numeric root is computed independently from the full
/// zone minimum.
PhasePoint critical_g2(const CouplingParams& params, double g1);

/// g_c = (omega + 4 kappa N) / (N (4 - sqrt 2)), the critical coupling on the
/// line g1 = g2.
double critical_g_equal(const CouplingParams& params);

struct DispersionMinimum {
  double kx;
  double ky;
  double v;
};

/// Minimum of the symbol over the continuous zone: the four corner
/// candidates, a coarse grid scan, then Nelder-Mead refinement.
DispersionMinimum dispersion_minimum(const CouplingParams& params);

/// Minimum over the discrete zone k = 2 pi (m, n) / side of a periodic lattice.
DispersionMinimum dispersion_minimum(const CouplingParams& params, int side);

/// Smallest g2 >= 0 with min_k v_k = 0, by bisection (tolerance 1e-10 kappa).
std::optional<double> numeric_critical_g2(const CouplingParams& params, double g1);

/// Lowest excitation energy sqrt(min v). Throws InstabilityError when the
/// minimum is negative.
double energy_gap(const CouplingParams& params, const LatticeSpec& lattice);

struct GapScaling {
  double exponent;
  double prefactor;  // exp(intercept) of log gap vs log(g_c - g)
  int samples;
};

/// Least-squares fit of log gap against log(g_c - g) on the line g1 = g2 = g,
/// with samples spaced geometrically in g_c - g over [g_lo, g_hi].
GapScaling gap_scaling_exponent(const CouplingParams& params, double g_lo, double g_hi,
                                int n_samples,
                                const LatticeSpec& lattice = LatticeSpec::infinite_lattice());

/// "instability: beyond critical coupling g_c = ..." for error reporting.
std::string instability_message(const CouplingParams& params, double min_symbol);

}  // namespace spinwave
