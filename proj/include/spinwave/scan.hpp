#pragma once

#include <span>
#include <string>
#include <vector>

#include "spinwave/entanglement.hpp"
#include "spinwave/groundstate.hpp"
#include "spinwave/model.hpp"

namespace spinwave {

/// Sweep along g1 = g2 = g.
struct SweepSpec {
  CouplingParams params;
  std::vector<double> g_values;
  LatticeSpec lattice;
  Engine engine = Engine::fft;
  std::vector<int> blocks;
  EntropyOptions entropy{};
  int workers = 0;  // 0: OpenMP default

  void validate() const;
};

struct SweepRow {
  double g;
  double gap;
  std::vector<double> entropies;  // one per block size, NaN on failure
  double zeta1;
  double eof1;
  std::string status;  // "ok" or the error message of this row
};

/// Rows are computed concurrently but stored at their sample index.
std::vector<SweepRow> sweep_g(const SweepSpec& spec);

struct FitResult {
  double slope;
  double intercept;
  double max_relative_residual;
  int samples;
};

/// Least squares E ~ slope L + intercept; residuals are relative to E.
FitResult area_law_fit(std::span<const double> L, std::span<const double> E);
FitResult area_law_fit(std::span<const EntropyPoint> curve);

/// Two-site parameters for sites separated by r. Dense states use the pair
/// placed symmetrically about the lattice centre.
TwoSiteParams pair_params(const GroundState& state, Displacement r);

/// zeta of the nearest-neighbour pair: displacement (1,0) for translation-invariant
/// engines, the centre horizontal pair for dense.
TwoSiteParams nearest_pair(const CouplingParams& params, const LatticeSpec& lattice, Engine engine,
                           const QuadratureSpec& quad = {});

struct Derivative {
  double raw;         // central difference with step h
  double richardson;  // (4 D(h/2) - D(h)) / 3
};

inline constexpr double kDefaultDerivativeStep = 1e-4;

/// d zeta_1 / dg along g1 = g2 = g. Throws InstabilityError when g + h is not stable.
Derivative derivative_zeta(const CouplingParams& params, const LatticeSpec& lattice, Engine engine,
                           double g, double h = kDefaultDerivativeStep, const QuadratureSpec& quad = {});

struct DerivativeRow {
  double g;
  double zeta1;
  Derivative d;
  std::string status;
};

/// derivative_zeta over a grid; with `cap_step` the step shrinks to (g_c - g) / 2
/// where h would cross the infinite-lattice critical coupling.
std::vector<DerivativeRow> derivative_scan(const CouplingParams& params, const LatticeSpec& lattice,
                                           Engine engine, std::span<const double> g_grid, double h,
                                           const QuadratureSpec& quad = {}, int workers = 0,
                                           bool cap_step = false);

struct PeakResult {
  int side;
  double peak;    // max |d zeta_1 / dg| over the grid
  double argmax;
};

/// Periodic odd lattices, FFT engine, Richardson derivative.
std::vector<PeakResult> finite_size_peak(const CouplingParams& params, std::span<const int> sides,
                                         std::span<const double> g_grid,
                                         double h = kDefaultDerivativeStep, int workers = 0);

std::vector<double> linspace(double lo, double hi, int n);

}  // namespace spinwave
