#include "spinwave/scan.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>

#include <omp.h>

#include "spinwave/errors.hpp"
#include "spinwave/spectrum.hpp"

namespace spinwave {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int thread_count(int workers) { return workers > 0 ? workers : omp_get_max_threads(); }

int table_extent(std::span<const int> blocks) {
  int extent = 1;
  for (int L : blocks) extent = std::max(extent, L - 1);
  return extent;
}

SweepRow sweep_row(const SweepSpec& spec, double g) {
  SweepRow row{g, kNaN, std::vector<double>(spec.blocks.size(), kNaN), kNaN, kNaN, "ok"};
  try {
    const auto params = spec.params.with_equal_coupling(g);
    row.gap = energy_gap(params, spec.lattice);
    const auto state = solve_ground_state(params, spec.lattice, spec.engine, table_extent(spec.blocks),
                                          spec.entropy.quad);
    const auto two = pair_params(state, {1, 0});
    row.zeta1 = two.zeta;
    row.eof1 = two.eof;
    const auto curve = entropy_vs_L(state, spec.blocks, spec.entropy);
    for (std::size_t i = 0; i < curve.size(); ++i) row.entropies[i] = curve[i].entropy;
  } catch (const std::exception& e) {
    row.status = e.what();
  }
  return row;
}

}  // namespace

void SweepSpec::validate() const {
  params.validate();
  lattice.validate();
  if (g_values.empty()) throw std::invalid_argument("sweep has no sample points");
  for (int L : blocks) {
    if (L < 1) throw std::invalid_argument("block sizes must be positive");
    if (!lattice.infinite && L > lattice.side) throw std::invalid_argument("block larger than the lattice");
  }
  entropy.quad.validate();
}

std::vector<SweepRow> sweep_g(const SweepSpec& spec) {
  spec.validate();
  std::vector<SweepRow> rows(spec.g_values.size());
  const auto n = static_cast<long>(rows.size());
#pragma omp parallel for schedule(dynamic) num_threads(thread_count(spec.workers))
  for (long i = 0; i < n; ++i) rows[i] = sweep_row(spec, spec.g_values[i]);
  return rows;
}

FitResult area_law_fit(std::span<const double> L, std::span<const double> E) {
  if (L.size() != E.size()) throw std::invalid_argument("area_law_fit: L and E differ in length");
  const auto n = static_cast<int>(L.size());
  if (n < 3) throw std::invalid_argument("area_law_fit needs at least 3 points");
  double mean_l = 0.0, mean_e = 0.0;
  for (int i = 0; i < n; ++i) {
    mean_l += L[i];
    mean_e += E[i];
  }
  mean_l /= n;
  mean_e /= n;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sxx += (L[i] - mean_l) * (L[i] - mean_l);
    sxy += (L[i] - mean_l) * (E[i] - mean_e);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("area_law_fit: degenerate L values");
  FitResult fit{sxy / sxx, 0.0, 0.0, n};
  fit.intercept = mean_e - fit.slope * mean_l;
  for (int i = 0; i < n; ++i) {
    const double r = std::abs(E[i] - (fit.slope * L[i] + fit.intercept));
    fit.max_relative_residual = std::max(fit.max_relative_residual, E[i] != 0.0 ? r / std::abs(E[i]) : r);
  }
  return fit;
}

FitResult area_law_fit(std::span<const EntropyPoint> curve) {
  std::vector<double> L, E;
  for (const auto& p : curve) {
    L.push_back(p.L);
    E.push_back(p.entropy);
  }
  return area_law_fit(L, E);
}

TwoSiteParams pair_params(const GroundState& state, Displacement r) {
  if (const auto* table = std::get_if<CorrelationTable>(&state)) return two_site_params(*table, r);
  const auto& pair = std::get<CovariancePair>(state);
  const int m = pair.lattice.side;
  const int x0 = (m - 1 - r.dx) / 2;
  const int y0 = (m - 1 - r.dy) / 2;
  const int x1 = x0 + r.dx;
  const int y1 = y0 + r.dy;
  if (x0 < 0 || y0 < 0 || x1 < 0 || y1 < 0 || x1 >= m || y1 >= m) {
    throw std::out_of_range("displacement " + to_string(r) + " does not fit in the lattice");
  }
  return two_site_params(pair, pair.lattice.index(x0, y0), pair.lattice.index(x1, y1));
}

TwoSiteParams nearest_pair(const CouplingParams& params, const LatticeSpec& lattice, Engine engine,
                           const QuadratureSpec& quad) {
  return pair_params(solve_ground_state(params, lattice, engine, 1, quad), {1, 0});
}

Derivative derivative_zeta(const CouplingParams& params, const LatticeSpec& lattice, Engine engine,
                           double g, double h, const QuadratureSpec& quad) {
  if (!(h > 0.0)) throw std::invalid_argument("derivative step must be positive");
  auto zeta = [&](double x) { return nearest_pair(params.with_equal_coupling(x), lattice, engine, quad).zeta; };
  const double d_h = (zeta(g + h) - zeta(g - h)) / (2.0 * h);
  const double d_h2 = (zeta(g + 0.5 * h) - zeta(g - 0.5 * h)) / h;
  return {d_h, (4.0 * d_h2 - d_h) / 3.0};
}

std::vector<DerivativeRow> derivative_scan(const CouplingParams& params, const LatticeSpec& lattice,
                                           Engine engine, std::span<const double> g_grid, double h,
                                           const QuadratureSpec& quad, int workers, bool cap_step) {
  const double gc = critical_g_equal(params);
  std::vector<DerivativeRow> rows(g_grid.size());
  const auto n = static_cast<long>(g_grid.size());
#pragma omp parallel for schedule(dynamic) num_threads(thread_count(workers))
  for (long i = 0; i < n; ++i) {
    const double g = g_grid[i];
    DerivativeRow row{g, kNaN, {kNaN, kNaN}, "ok"};
    try {
      const double step = cap_step && g < gc ? std::min(h, 0.5 * (gc - g)) : h;
      row.zeta1 = nearest_pair(params.with_equal_coupling(g), lattice, engine, quad).zeta;
      row.d = derivative_zeta(params, lattice, engine, g, step, quad);
    } catch (const std::exception& e) {
      row.status = e.what();
    }
    rows[i] = std::move(row);
  }
  return rows;
}

std::vector<PeakResult> finite_size_peak(const CouplingParams& params, std::span<const int> sides,
                                         std::span<const double> g_grid, double h, int workers) {
  if (g_grid.empty()) throw std::invalid_argument("finite_size_peak needs a non-empty g grid");
  for (int m : sides) {
    if (m < 5 || m % 2 == 0) throw std::invalid_argument("finite_size_peak needs odd sides >= 5");
  }
  std::vector<PeakResult> out;
  for (int m : sides) {
    const auto lattice = LatticeSpec::periodic(m);
    std::vector<double> mag(g_grid.size());
    std::exception_ptr failure;
    const auto n = static_cast<long>(g_grid.size());
#pragma omp parallel for schedule(dynamic) num_threads(thread_count(workers))
    for (long i = 0; i < n; ++i) {
      try {
        mag[i] = std::abs(derivative_zeta(params, lattice, Engine::fft, g_grid[i], h).richardson);
      } catch (...) {
#pragma omp critical(spinwave_peak_error)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
    const auto it = std::max_element(mag.begin(), mag.end());
    out.push_back({m, *it, g_grid[static_cast<std::size_t>(it - mag.begin())]});
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 1) throw std::invalid_argument("linspace needs at least one point");
  if (n == 1) return {lo};
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  out.back() = hi;
  return out;
}

}  // namespace spinwave
