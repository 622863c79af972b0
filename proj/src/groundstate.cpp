#include "spinwave/groundstate.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <fftw3.h>

#include "spinwave/errors.hpp"
#include "spinwave/kernels.hpp"
#include "spinwave/spectrum.hpp"

namespace spinwave {

namespace {

constexpr double kPi = std::numbers::pi;

void guard_near_critical(const CouplingParams& params, double min_symbol) {
  if (!(min_symbol > 0.0)) throw InstabilityError(instability_message(params, min_symbol));
  if (min_symbol / params.onsite() < kNearCriticalGuard) {
    throw InstabilityError("refusing to compute covariances within 1e-12 of the critical coupling; " +
                           instability_message(params, min_symbol));
  }
}

// FFTW planning is not thread-safe.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

// Nodes of the sin^4 periodizing transform on one axis. With t = j/n and
// T = 2 pi t, psi(t) = t - (8 sin T - sin 2T) / (12 pi) maps [0, 1) onto
// [0, 1) with psi'(t) = (2/3)(1 - cos T)^2, which vanishes to fourth order at
// the corner, flattening the v^{-1/2} cusp there.
kernels::AxisNodes sidi_axis(int n, double corner_k) {
  kernels::AxisNodes nodes;
  nodes.k.resize(n);
  nodes.a.resize(n);
  nodes.w.resize(n);
  auto psi = [](double t) {
    const double T = 2.0 * kPi * t;
    return t - (8.0 * std::sin(T) - std::sin(2.0 * T)) / (12.0 * kPi);
  };
  for (int j = 0; j < n; ++j) {
    const double t = static_cast<double>(j) / n;
    // u in (-pi, pi], taken from the nearer end of the interval.
    const double u = 2 * j <= n ? 2.0 * kPi * psi(t) : -2.0 * kPi * psi(1.0 - t);
    const double c = 1.0 - std::cos(2.0 * kPi * t);
    nodes.k[j] = corner_k + u;
    nodes.a[j] = 2.0 * std::pow(std::sin(0.5 * u), 2);
    nodes.w[j] = (2.0 / 3.0) * c * c / n;  // psi'(t) dt, measure dk / 2 pi
  }
  return nodes;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

const char* to_string(Engine e) {
  switch (e) {
    case Engine::dense: return "dense";
    case Engine::fft: return "fft";
    case Engine::infinite: return "infinite";
  }
  return "?";
}

Engine default_engine(const LatticeSpec& lattice) {
  if (lattice.infinite) return Engine::infinite;
  return lattice.boundary == Boundary::periodic ? Engine::fft : Engine::dense;
}

std::string to_string(Displacement r) {
  return "(" + std::to_string(r.dx) + ", " + std::to_string(r.dy) + ")";
}

CorrelationTable::CorrelationTable(Engine engine, LatticeSpec lattice, CouplingParams params,
                                   int extent_x, int extent_y, std::vector<double> qq,
                                   std::vector<double> pp, int quadrature_order)
    : engine_(engine), lattice_(lattice), params_(params), extent_x_(extent_x),
      extent_y_(extent_y), qq_(std::move(qq)), pp_(std::move(pp)), order_(quadrature_order) {
  const auto expected = static_cast<std::size_t>(extent_x + 1) * (extent_y + 1);
  if (qq_.size() != expected || pp_.size() != expected) {
    throw std::invalid_argument("correlation table size does not match its extents");
  }
}

Displacement CorrelationTable::canonical(Displacement r) const {
  if (!lattice_.infinite && lattice_.boundary == Boundary::periodic) {
    const int m = lattice_.side;
    auto fold = [m](int d) {
      d = ((d % m) + m) % m;
      return std::min(d, m - d);
    };
    return {fold(r.dx), fold(r.dy)};
  }
  return {std::abs(r.dx), std::abs(r.dy)};
}

bool CorrelationTable::contains(Displacement r) const {
  const auto c = canonical(r);
  return c.dx <= extent_x_ && c.dy <= extent_y_;
}

std::size_t CorrelationTable::slot(Displacement r) const {
  const auto c = canonical(r);
  if (c.dx > extent_x_ || c.dy > extent_y_) {
    throw std::out_of_range("correlation table has no entry for displacement " + to_string(r));
  }
  return static_cast<std::size_t>(c.dx) * (extent_y_ + 1) + c.dy;
}

void QuadratureSpec::validate() const {
  if (base_order < 16) throw std::invalid_argument("quadrature base order must be at least 16");
  if (max_order < base_order) throw std::invalid_argument("quadrature max order below base order");
  if (!(tolerance > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");
}

CovariancePair covariance_dense(const PotentialMatrix& V) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(V.dense());
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("symmetric eigensolver failed on the potential matrix");
  }
  const Eigen::VectorXd& d = solver.eigenvalues();
  guard_near_critical(V.params(), d(0));
  const Eigen::MatrixXd& U = solver.eigenvectors();
  const Eigen::VectorXd root = d.array().sqrt();

  CovariancePair out;
  out.Q = U * (0.5 / root.array()).matrix().asDiagonal() * U.transpose();
  out.P = U * (0.5 * root.array()).matrix().asDiagonal() * U.transpose();
  // Round-off leaves the products slightly asymmetric.
  out.Q = 0.5 * (out.Q + out.Q.transpose()).eval();
  out.P = 0.5 * (out.P + out.P.transpose()).eval();
  out.engine = Engine::dense;
  out.params = V.params();
  out.lattice = V.lattice();
  return out;
}

CorrelationTable covariance_pbc_fft(const LatticeSpec& spec, const CouplingParams& params) {
  spec.validate();
  params.validate();
  if (spec.infinite || spec.boundary != Boundary::periodic) {
    throw std::invalid_argument("the FFT engine needs a finite periodic lattice");
  }
  const int m = spec.side;
  const ZoneCorner corner = minimizing_corner(params);
  const auto x = kernels::uniform_axis(m, corner.kx());
  const auto y = kernels::uniform_axis(m, corner.ky());

  std::vector<double> symbol(static_cast<std::size_t>(m) * m);
  kernels::omp::symbol_grid(params, corner, x, y, symbol);
  guard_near_critical(params, *std::min_element(symbol.begin(), symbol.end()));

  const int half = m / 2;
  const int cols = half + 1;
  std::unique_ptr<double, FftwFree> in(fftw_alloc_real(static_cast<std::size_t>(m) * m));
  std::unique_ptr<fftw_complex, FftwFree> out(fftw_alloc_complex(static_cast<std::size_t>(m) * cols));
  fftw_plan plan;
  {
    std::lock_guard lock(fftw_planner_mutex());
    plan = fftw_plan_dft_r2c_2d(m, m, in.get(), out.get(), FFTW_ESTIMATE);
  }

  const double norm = 1.0 / (2.0 * m * m);
  auto transform = [&](bool momentum) {
    for (std::size_t i = 0; i < symbol.size(); ++i) {
      const double root = std::sqrt(symbol[i]);
      in.get()[i] = momentum ? root : 1.0 / root;
    }
    fftw_execute(plan);
    std::vector<double> table(static_cast<std::size_t>(half + 1) * cols);
    for (int dx = 0; dx <= half; ++dx) {
      for (int dy = 0; dy <= half; ++dy) table[dx * cols + dy] = norm * out.get()[dx * cols + dy][0];
    }
    return table;
  };
  auto qq = transform(false);
  auto pp = transform(true);
  {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  return CorrelationTable(Engine::fft, spec, params, half, half, std::move(qq), std::move(pp));
}

CorrelationTable covariance_infinite(const CouplingParams& params, int extent,
                                     const QuadratureSpec& quad) {
  params.validate();
  quad.validate();
  if (extent < 0) throw std::invalid_argument("displacement extent must be non-negative");
  const ZoneCorner corner = minimizing_corner(params);
  guard_near_critical(params, corner_symbol(params, corner));

  kernels::MomentSums previous;
  double before_last = 0.0;
  for (int n = quad.base_order; n <= quad.max_order; n *= 2) {
    const auto x = sidi_axis(n, corner.kx());
    const auto y = sidi_axis(n, corner.ky());
    auto sums = kernels::omp::moment_sums(params, corner, x, y, extent, extent);
    if (!(sums.min_symbol > 0.0)) throw InstabilityError(instability_message(params, sums.min_symbol));
    for (auto* v : {&sums.qq, &sums.pp}) {
      for (double& e : *v) e *= 0.5;
    }
    if (!previous.qq.empty()) {
      const bool q_ok = max_abs_diff(sums.qq, previous.qq) <= quad.tolerance * max_abs(sums.qq);
      const bool p_ok = max_abs_diff(sums.pp, previous.pp) <= quad.tolerance * max_abs(sums.pp);
      if (q_ok && p_ok) {
        return CorrelationTable(Engine::infinite, LatticeSpec::infinite_lattice(), params, extent,
                                extent, std::move(sums.qq), std::move(sums.pp), n);
      }
    }
    if (!previous.qq.empty()) before_last = previous.qq.front();
    previous = std::move(sums);
    if (n > quad.max_order / 2) break;
  }
  throw ConvergenceError("Brillouin-zone quadrature did not converge up to order " +
                             std::to_string(quad.max_order) + " (<q0 q0> estimates " +
                             std::to_string(previous.qq.front()) + ", " +
                             std::to_string(before_last) + ")",
                         previous.qq.front(), before_last);
}

CorrelationTable covariance_infinite(const CouplingParams& params,
                                     std::span<const Displacement> displacements,
                                     const QuadratureSpec& quad) {
  int extent = 0;
  for (const auto& r : displacements) extent = std::max({extent, std::abs(r.dx), std::abs(r.dy)});
  return covariance_infinite(params, extent, quad);
}

GroundState solve_ground_state(const CouplingParams& params, const LatticeSpec& lattice,
                               Engine engine, int extent, const QuadratureSpec& quad) {
  lattice.validate();
  switch (engine) {
    case Engine::dense:
      if (lattice.infinite) throw std::invalid_argument("the dense engine needs a finite lattice");
      return covariance_dense(build_potential(lattice, params));
    case Engine::fft:
      return covariance_pbc_fft(lattice, params);
    case Engine::infinite:
      if (!lattice.infinite) throw std::invalid_argument("the infinite engine needs boundary = infinite");
      return covariance_infinite(params, extent, quad);
  }
  throw std::invalid_argument("unknown engine");
}

OnsiteMoments onsite_moments(const GroundState& state) {
  if (const auto* pair = std::get_if<CovariancePair>(&state)) {
    return {pair->Q.diagonal().mean(), pair->P.diagonal().mean()};
  }
  const auto& table = std::get<CorrelationTable>(state);
  return {table.qq({0, 0}), table.pp({0, 0})};
}

double excitation_density(const CouplingParams& params, const LatticeSpec& lattice, Engine engine,
                          const QuadratureSpec& quad) {
  const auto m = onsite_moments(solve_ground_state(params, lattice, engine, 0, quad));
  return (params.omega * m.qq + m.pp / params.omega - 1.0) / (2.0 * params.n_atoms);
}

}  // namespace spinwave
