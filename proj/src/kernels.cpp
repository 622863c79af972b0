#include "spinwave/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace spinwave::kernels {

AxisNodes uniform_axis(int n, double corner_k) {
  AxisNodes nodes;
  nodes.k.resize(n);
  nodes.a.resize(n);
  nodes.w.assign(n, 1.0);
  for (int m = 0; m < n; ++m) {
    const double k = 2.0 * std::numbers::pi * m / n;
    const double u = k - corner_k;
    nodes.k[m] = k;
    nodes.a[m] = 2.0 * std::pow(std::sin(0.5 * u), 2);
  }
  return nodes;
}

namespace {

std::vector<double> cos_table(const AxisNodes& nodes, int max_d) {
  const std::size_t n = nodes.size();
  std::vector<double> table(static_cast<std::size_t>(max_d + 1) * n);
  for (int d = 0; d <= max_d; ++d) {
    for (std::size_t i = 0; i < n; ++i) table[d * n + i] = std::cos(nodes.k[i] * d);
  }
  return table;
}

// Inner row of the two-pass transform: row_out[dy] = sum_j f_j cos(ky_j dy).
inline void row_transform(const double* f, const double* cy, std::size_t ny, int max_dy,
                          double* row_out) {
  for (int dy = 0; dy <= max_dy; ++dy) {
    const double* c = cy + dy * ny;
    double s = 0.0;
    for (std::size_t j = 0; j < ny; ++j) s += f[j] * c[j];
    row_out[dy] = s;
  }
}

// Outer pass: out[dx][dy] = sum_i wx_i cos(kx_i dx) rows[i][dy].
inline void column_reduce(const double* rows, const double* cx, const double* wx,
                          std::size_t nx, int max_dy, int dx, double* out) {
  const double* c = cx + dx * nx;
  for (int dy = 0; dy <= max_dy; ++dy) {
    double s = 0.0;
    for (std::size_t i = 0; i < nx; ++i) s += wx[i] * c[i] * rows[i * (max_dy + 1) + dy];
    out[dx * (max_dy + 1) + dy] = s;
  }
}

inline void moment_row(const CouplingParams& params, ZoneCorner corner, const AxisNodes& y,
                       double ax, const double* cy, int max_dy, double* q_row, double* p_row,
                       double* fq, double* fp, double& min_symbol) {
  const std::size_t ny = y.size();
  for (std::size_t j = 0; j < ny; ++j) {
    const double v = symbol_near_corner(params, corner, ax, y.a[j]);
    min_symbol = std::min(min_symbol, v);
    if (v > 0.0) {
      const double root = std::sqrt(v);
      fq[j] = y.w[j] / root;
      fp[j] = y.w[j] * root;
    } else {
      fq[j] = 0.0;
      fp[j] = 0.0;
    }
  }
  row_transform(fq, cy, ny, max_dy, q_row);
  row_transform(fp, cy, ny, max_dy, p_row);
}

}  // namespace

namespace serial {

void symbol_grid(const CouplingParams& params, ZoneCorner corner, const AxisNodes& x,
                 const AxisNodes& y, std::span<double> out) {
  const std::size_t ny = y.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < ny; ++j) out[i * ny + j] = symbol_near_corner(params, corner, x.a[i], y.a[j]);
  }
}

void cosine_transform(std::span<const double> f, const AxisNodes& x, const AxisNodes& y,
                      int max_dx, int max_dy, std::span<double> out) {
  const std::size_t nx = x.size();
  const std::size_t ny = y.size();
  const auto cx = cos_table(x, max_dx);
  const auto cy = cos_table(y, max_dy);
  std::vector<double> rows(nx * (max_dy + 1));
  for (std::size_t i = 0; i < nx; ++i) row_transform(f.data() + i * ny, cy.data(), ny, max_dy, rows.data() + i * (max_dy + 1));
  for (int dx = 0; dx <= max_dx; ++dx) column_reduce(rows.data(), cx.data(), x.w.data(), nx, max_dy, dx, out.data());
}

MomentSums moment_sums(const CouplingParams& params, ZoneCorner corner, const AxisNodes& x,
                       const AxisNodes& y, int max_dx, int max_dy) {
  const std::size_t nx = x.size();
  const std::size_t ny = y.size();
  const std::size_t stride = max_dy + 1;
  const auto cx = cos_table(x, max_dx);
  const auto cy = cos_table(y, max_dy);
  std::vector<double> q_rows(nx * stride), p_rows(nx * stride);
  std::vector<double> fq(ny), fp(ny);
  double min_symbol = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nx; ++i) {
    moment_row(params, corner, y, x.a[i], cy.data(), max_dy, q_rows.data() + i * stride,
               p_rows.data() + i * stride, fq.data(), fp.data(), min_symbol);
  }
  MomentSums out{std::vector<double>((max_dx + 1) * stride), std::vector<double>((max_dx + 1) * stride),
                 min_symbol};
  for (int dx = 0; dx <= max_dx; ++dx) {
    column_reduce(q_rows.data(), cx.data(), x.w.data(), nx, max_dy, dx, out.qq.data());
    column_reduce(p_rows.data(), cx.data(), x.w.data(), nx, max_dy, dx, out.pp.data());
  }
  return out;
}

}  // namespace serial

namespace omp {

void symbol_grid(const CouplingParams& params, ZoneCorner corner, const AxisNodes& x,
                 const AxisNodes& y, std::span<double> out) {
  const long nx = static_cast<long>(x.size());
  const std::size_t ny = y.size();
#pragma omp parallel for schedule(static)
  for (long i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) out[i * ny + j] = symbol_near_corner(params, corner, x.a[i], y.a[j]);
  }
}

void cosine_transform(std::span<const double> f, const AxisNodes& x, const AxisNodes& y,
                      int max_dx, int max_dy, std::span<double> out) {
  const long nx = static_cast<long>(x.size());
  const std::size_t ny = y.size();
  const auto cx = cos_table(x, max_dx);
  const auto cy = cos_table(y, max_dy);
  std::vector<double> rows(nx * (max_dy + 1));
#pragma omp parallel for schedule(static)
  for (long i = 0; i < nx; ++i) row_transform(f.data() + i * ny, cy.data(), ny, max_dy, rows.data() + i * (max_dy + 1));
#pragma omp parallel for schedule(static)
  for (int dx = 0; dx <= max_dx; ++dx) column_reduce(rows.data(), cx.data(), x.w.data(), nx, max_dy, dx, out.data());
}

MomentSums moment_sums(const CouplingParams& params, ZoneCorner corner, const AxisNodes& x,
                       const AxisNodes& y, int max_dx, int max_dy) {
  const long nx = static_cast<long>(x.size());
  const std::size_t ny = y.size();
  const std::size_t stride = max_dy + 1;
  const auto cx = cos_table(x, max_dx);
  const auto cy = cos_table(y, max_dy);
  std::vector<double> q_rows(nx * stride), p_rows(nx * stride);
  double min_symbol = std::numeric_limits<double>::infinity();
#pragma omp parallel reduction(min : min_symbol)
  {
    std::vector<double> fq(ny), fp(ny);
#pragma omp for schedule(static)
    for (long i = 0; i < nx; ++i) {
      moment_row(params, corner, y, x.a[i], cy.data(), max_dy, q_rows.data() + i * stride,
                 p_rows.data() + i * stride, fq.data(), fp.data(), min_symbol);
    }
  }
  MomentSums out{std::vector<double>((max_dx + 1) * stride), std::vector<double>((max_dx + 1) * stride),
                 min_symbol};
#pragma omp parallel for schedule(static)
  for (int dx = 0; dx <= max_dx; ++dx) {
    column_reduce(q_rows.data(), cx.data(), x.w.data(), nx, max_dy, dx, out.qq.data());
    column_reduce(p_rows.data(), cx.data(), x.w.data(), nx, max_dy, dx, out.pp.data());
  }
  return out;
}

}  // namespace omp

}  // namespace spinwave::kernels
