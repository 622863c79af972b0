#pragma once

// Data-parallel inner loops over wavevector grids. Every kernel exists twice:
// `serial` is the reference used by the tests, `omp` is the OpenMP version
// the engines call. Both perform the same floating-point operations in the
// same order per output element, so their results are bitwise identical.

#include <span>
#include <vector>

#include "spinwave/model.hpp"

namespace spinwave::kernels {

/// One axis of a product rule over the Brillouin zone. Wavevectors are
/// stored as offsets u from a zone corner; `a` caches 1 - cos(u).
struct AxisNodes {
  std::vector<double> k;  // absolute wavevector, corner + u
  std::vector<double> a;  // 1 - cos(u), computed as 2 sin^2(u / 2)
  std::vector<double> w;  // weight (1 for plain grids)

  std::size_t size() const { return k.size(); }
};

/// Uniform grid k_m = 2 pi m / n, m = 0..n-1, unit weights.
AxisNodes uniform_axis(int n, double corner_k);

struct MomentSums {
  std::vector<double> qq;  // (max_dx + 1) x (max_dy + 1), row-major in dx
  std::vector<double> pp;
  double min_symbol;       // smallest symbol value met on the grid
};

namespace serial {

/// out[i * ny + j] = v(kx_i, ky_j), evaluated relative to `corner`.
void symbol_grid(const CouplingParams& params, ZoneCorner corner, const AxisNodes& x,
                 const AxisNodes& y, std::span<double> out);

/// out[dx * (max_dy + 1) + dy] = sum_ij f_ij cos(kx_i dx) cos(ky_j dy).
void cosine_transform(std::span<const double> f, const AxisNodes& x, const AxisNodes& y,
                      int max_dx, int max_dy, std::span<double> out);

/// Weighted sums of v^{-1/2} and v^{1/2} against cos(kx dx) cos(ky dy), fused
/// so the full grid is never stored. Non-positive symbol values contribute
/// nothing; callers inspect `min_symbol`.
MomentSums moment_sums(const CouplingParams& params, ZoneCorner corner, const AxisNodes& x,
                       const AxisNodes& y, int max_dx, int max_dy);

}  // namespace serial

namespace omp {

void symbol_grid(const CouplingParams& params, ZoneCorner corner, const AxisNodes& x,
                 const AxisNodes& y, std::span<double> out);

void cosine_transform(std::span<const double> f, const AxisNodes& x, const AxisNodes& y,
                      int max_dx, int max_dy, std::span<double> out);

MomentSums moment_sums(const CouplingParams& params, ZoneCorner corner, const AxisNodes& x,
                       const AxisNodes& y, int max_dx, int max_dy);

}  // namespace omp

}  // namespace spinwave::kernels
