#include "spinwave/spectrum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "spinwave/errors.hpp"

namespace spinwave {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

double wrap_angle(double k) {
  k = std::fmod(k + kPi, 2.0 * kPi);
  if (k < 0.0) k += 2.0 * kPi;
  return k - kPi;
}

// Plain Nelder-Mead on the 2D zone. The symbol is periodic, so no bounds.
template <class F>
DispersionMinimum nelder_mead(F&& f, double kx0, double ky0, double step, double tol) {
  std::array<std::array<double, 2>, 3> x{{{kx0, ky0}, {kx0 + step, ky0}, {kx0, ky0 + step}}};
  std::array<double, 3> fx{f(x[0][0], x[0][1]), f(x[1][0], x[1][1]), f(x[2][0], x[2][1])};

  for (int iter = 0; iter < 2000; ++iter) {
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fx[a] < fx[b]; });
    const int best = order[0], mid = order[1], worst = order[2];

    double diameter = 0.0;
    for (int i = 1; i < 3; ++i) {
      diameter = std::max(diameter, std::hypot(x[order[i]][0] - x[best][0], x[order[i]][1] - x[best][1]));
    }
    if (diameter < tol) break;

    const std::array<double, 2> c{0.5 * (x[best][0] + x[mid][0]), 0.5 * (x[best][1] + x[mid][1])};
    auto along = [&](double t) {
      return std::array<double, 2>{c[0] + t * (x[worst][0] - c[0]), c[1] + t * (x[worst][1] - c[1])};
    };

    const auto xr = along(-1.0);
    const double fr = f(xr[0], xr[1]);
    if (fr < fx[best]) {
      const auto xe = along(-2.0);
      const double fe = f(xe[0], xe[1]);
      if (fe < fr) {
        x[worst] = xe;
        fx[worst] = fe;
      } else {
        x[worst] = xr;
        fx[worst] = fr;
      }
    } else if (fr < fx[mid]) {
      x[worst] = xr;
      fx[worst] = fr;
    } else {
      const auto xc = fr < fx[worst] ? along(-0.5) : along(0.5);
      const double fc = f(xc[0], xc[1]);
      if (fc < std::min(fr, fx[worst])) {
        x[worst] = xc;
        fx[worst] = fc;
      } else {
        for (int i : {mid, worst}) {
          x[i] = {0.5 * (x[i][0] + x[best][0]), 0.5 * (x[i][1] + x[best][1])};
          fx[i] = f(x[i][0], x[i][1]);
        }
      }
    }
  }
  const auto it = std::min_element(fx.begin(), fx.end());
  const auto i = static_cast<std::size_t>(it - fx.begin());
  return {wrap_angle(x[i][0]), wrap_angle(x[i][1]), *it};
}

}  // namespace

DispersionPoint dispersion(const CouplingParams& params, double kx, double ky) {
  const double v = potential_symbol(params, kx, ky);
  DispersionPoint p{kx, ky, v, std::nullopt};
  if (v >= 0.0) p.omega_k = std::sqrt(v);
  return p;
}

const char* to_string(Branch b) {
  switch (b) {
    case Branch::below: return "below";
    case Branch::degenerate: return "degenerate";
    case Branch::above: return "above";
  }
  return "?";
}

double critical_g_equal(const CouplingParams& params) {
  return (params.omega + 4.0 * params.kappa * params.n_atoms) / (params.n_atoms * (4.0 - kSqrt2));
}

PhasePoint critical_g2(const CouplingParams& params, double g1) {
  if (!(g1 >= 0.0)) throw std::invalid_argument("critical_g2 needs g1 >= 0");
  const double base = 4.0 * params.kappa + params.omega / params.n_atoms;
  // The (pi, pi) and (0, pi) roots cross where g2 = sqrt(2) g1, i.e. at
  // g1 = base / (2 sqrt 2).
  const double g1_switch = base / (2.0 * kSqrt2);

  PhasePoint p{};
  p.g1 = g1;
  if (std::abs(g1 - g1_switch) <= 1e-12 * base) {
    p.branch = Branch::degenerate;
    p.g2_critical = base / 2.0;
    p.kx = kPi;
    p.ky = kPi;
  } else if (g1 > g1_switch) {
    p.branch = Branch::below;
    p.g2_critical = (base - 2.0 * g1) / (2.0 - kSqrt2);
    p.kx = kPi;
    p.ky = kPi;
  } else {
    p.branch = Branch::above;
    p.g2_critical = (base + 2.0 * g1) / (2.0 + kSqrt2);
    p.kx = 0.0;
    p.ky = kPi;
  }
  p.g2_numeric = numeric_critical_g2(params, g1);
  return p;
}

DispersionMinimum dispersion_minimum(const CouplingParams& params) {
  auto f = [&](double kx, double ky) { return potential_symbol(params, kx, ky); };

  DispersionMinimum best{0.0, 0.0, std::numeric_limits<double>::infinity()};
  for (const auto& c : kZoneCorners) {
    const double v = corner_symbol(params, c);
    if (v < best.v) best = {c.kx(), c.ky(), v};
  }
  // Coarse scan guards against minima that migrate off the corners.
  constexpr int kScan = 64;
  DispersionMinimum scan{0.0, 0.0, std::numeric_limits<double>::infinity()};
  for (int a = 0; a < kScan; ++a) {
    for (int b = 0; b < kScan; ++b) {
      const double kx = -kPi + 2.0 * kPi * a / kScan;
      const double ky = -kPi + 2.0 * kPi * b / kScan;
      const double v = f(kx, ky);
      if (v < scan.v) scan = {kx, ky, v};
    }
  }
  const auto refined = nelder_mead(f, scan.kx, scan.ky, 2.0 * kPi / kScan, 1e-12);
  if (refined.v < best.v) best = refined;
  return best;
}

DispersionMinimum dispersion_minimum(const CouplingParams& params, int side) {
  if (side < 1) throw std::invalid_argument("grid side must be positive");
  const ZoneCorner corner = minimizing_corner(params);
  DispersionMinimum best{0.0, 0.0, std::numeric_limits<double>::infinity()};
  for (int a = 0; a < side; ++a) {
    const double kx = 2.0 * kPi * a / side;
    const double ax = 2.0 * std::pow(std::sin(0.5 * (kx - corner.kx())), 2);
    for (int b = 0; b < side; ++b) {
      const double ky = 2.0 * kPi * b / side;
      const double ay = 2.0 * std::pow(std::sin(0.5 * (ky - corner.ky())), 2);
      const double v = symbol_near_corner(params, corner, ax, ay);
      if (v < best.v) best = {kx, ky, v};
    }
  }
  return best;
}

std::optional<double> numeric_critical_g2(const CouplingParams& params, double g1) {
  auto min_symbol = [&](double g2) {
    CouplingParams p = params;
    p.g1 = g1;
    p.g2 = g2;
    return dispersion_minimum(p).v;
  };
  double lo = 0.0;
  if (min_symbol(lo) <= 0.0) return std::nullopt;
  double hi = 10.0 * params.kappa;
  while (min_symbol(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e8 * params.kappa) return std::nullopt;
  }
  const double tol = 1e-10 * params.kappa;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (min_symbol(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::string instability_message(const CouplingParams& params, double min_symbol) {
  char buf[256];
  if (params.g1 == params.g2) {
    std::snprintf(buf, sizeof buf,
                  "instability: beyond critical coupling g_c = %.11g (g = %.11g, min v_k = %.6g)",
                  critical_g_equal(params), params.g1, min_symbol);
  } else {
    const auto phase = critical_g2(params, params.g1);
    std::snprintf(buf, sizeof buf,
                  "instability: beyond critical coupling g2_c = %.11g for g1 = %.11g (g2 = %.11g, "
                  "min v_k = %.6g)",
                  phase.g2_critical, params.g1, params.g2, min_symbol);
  }
  return buf;
}

double energy_gap(const CouplingParams& params, const LatticeSpec& lattice) {
  lattice.validate();
  double lowest;
  if (lattice.infinite) {
    lowest = dispersion_minimum(params).v;
  } else if (lattice.boundary == Boundary::periodic) {
    lowest = dispersion_minimum(params, lattice.side).v;
  } else {
    lowest = stability_check(build_potential(lattice, params)).min_eigenvalue;
  }
  if (lowest < 0.0) throw InstabilityError(instability_message(params, lowest));
  return std::sqrt(lowest);
}

GapScaling gap_scaling_exponent(const CouplingParams& params, double g_lo, double g_hi,
                                int n_samples, const LatticeSpec& lattice) {
  if (n_samples < 2) throw std::invalid_argument("gap scaling fit needs at least 2 samples");
  const double gc = critical_g_equal(params);
  if (!(g_lo < g_hi)) throw std::invalid_argument("gap scaling window must satisfy g_lo < g_hi");
  if (!(g_hi < gc)) throw std::invalid_argument("gap scaling window must lie strictly below g_c");

  const double d_far = std::log(gc - g_lo);
  const double d_near = std::log(gc - g_hi);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double log_d = d_far + (d_near - d_far) * i / (n_samples - 1);
    const double g = gc - std::exp(log_d);
    const double log_gap = std::log(energy_gap(params.with_equal_coupling(g), lattice));
    sx += log_d;
    sy += log_gap;
    sxx += log_d * log_d;
    sxy += log_d * log_gap;
  }
  const double n = n_samples;
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  return {slope, std::exp(intercept), n_samples};
}

}  // namespace spinwave
