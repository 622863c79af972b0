#include "spinwave/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace spinwave {

namespace {

const double kDiagonalFactor = std::pow(2.0, -1.5);

// Forward half of the neighbour stencil; the other half is reached from the
// partner site.
struct Offset {
  int dx;
  int dy;
  Bond bond;
};
constexpr std::array<Offset, 4> kForward{{{1, 0, Bond::horizontal},
                                          {0, 1, Bond::vertical},
                                          {1, 1, Bond::diagonal},
                                          {1, -1, Bond::diagonal}}};

double bond_strength(const CouplingParams& p, Bond b) {
  switch (b) {
    case Bond::horizontal: return p.g1;
    case Bond::vertical: return p.g2;
    case Bond::diagonal: return kDiagonalFactor * p.g2;
  }
  return 0.0;
}

}  // namespace

void CouplingParams::validate() const {
  if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  if (!(n_atoms >= 1.0)) throw std::invalid_argument("n_atoms must be at least 1");
  if (!(g1 >= 0.0)) throw std::invalid_argument("g1 must be non-negative");
  if (!(g2 >= 0.0)) throw std::invalid_argument("g2 must be non-negative");
}

bool CouplingParams::in_spin_wave_regime() const {
  const double ratio = omega / (kappa * n_atoms);
  return ratio >= 0.1 && ratio <= 10.0;
}

void LatticeSpec::validate() const {
  if (infinite) return;
  if (boundary == Boundary::periodic && side < 3) {
    throw std::invalid_argument("periodic lattice needs side >= 3 (side " + std::to_string(side) +
                                " produces duplicate edges)");
  }
  if (side < 1) throw std::invalid_argument("lattice side must be positive");
}

std::vector<Coupling> neighbor_couplings(const LatticeSpec& spec, const CouplingParams& params) {
  spec.validate();
  if (spec.infinite) throw std::invalid_argument("neighbor_couplings needs a finite lattice");
  const int m = spec.side;
  const bool wrap = spec.boundary == Boundary::periodic;

  std::vector<Coupling> out;
  out.reserve(static_cast<std::size_t>(4 * m * m));
  for (int y = 0; y < m; ++y) {
    for (int x = 0; x < m; ++x) {
      for (const auto& off : kForward) {
        int nx = x + off.dx;
        int ny = y + off.dy;
        if (wrap) {
          nx = (nx + m) % m;
          ny = (ny + m) % m;
        } else if (nx < 0 || nx >= m || ny < 0 || ny >= m) {
          continue;
        }
        const int a = spec.index(x, y);
        const int b = spec.index(nx, ny);
        out.push_back({std::min(a, b), std::max(a, b), off.bond, bond_strength(params, off.bond)});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Coupling& l, const Coupling& r) {
    return l.i != r.i ? l.i < r.i : l.j < r.j;
  });
  return out;
}

PotentialMatrix::PotentialMatrix(LatticeSpec spec, CouplingParams params,
                                 PairConvention convention, double diagonal,
                                 std::vector<Triplet> upper)
    : spec_(spec), params_(params), convention_(convention), diagonal_(diagonal),
      upper_(std::move(upper)) {
  std::sort(upper_.begin(), upper_.end(), [](const Triplet& l, const Triplet& r) {
    return l.row != r.row ? l.row < r.row : l.col < r.col;
  });
}

double PotentialMatrix::at(int i, int j) const {
  if (i == j) return diagonal_;
  const Triplet key{std::min(i, j), std::max(i, j), 0.0};
  auto it = std::lower_bound(upper_.begin(), upper_.end(), key, [](const Triplet& l, const Triplet& r) {
    return l.row != r.row ? l.row < r.row : l.col < r.col;
  });
  if (it != upper_.end() && it->row == key.row && it->col == key.col) return it->value;
  return 0.0;
}

Eigen::MatrixXd PotentialMatrix::dense() const {
  const int n = dimension();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n) * diagonal_;
  for (const auto& t : upper_) {
    v(t.row, t.col) = t.value;
    v(t.col, t.row) = t.value;
  }
  return v;
}

PotentialMatrix build_potential(const LatticeSpec& spec, const CouplingParams& params,
                                PairConvention convention) {
  params.validate();
  const double scale = params.n_atoms * params.omega * pair_factor(convention);
  std::vector<Triplet> upper;
  for (const auto& c : neighbor_couplings(spec, params)) {
    if (c.strength == 0.0) continue;
    upper.push_back({c.i, c.j, scale * c.strength});
  }
  return PotentialMatrix(spec, params, convention, params.onsite(), std::move(upper));
}

double potential_symbol(const CouplingParams& params, double kx, double ky,
                        PairConvention convention) {
  const double f = params.g1 * std::cos(kx) + params.g2 * std::cos(ky) +
                   kDiagonalFactor * params.g2 * (std::cos(kx + ky) + std::cos(kx - ky));
  return params.onsite() + 2.0 * params.n_atoms * params.omega * pair_factor(convention) * f;
}

double ZoneCorner::kx() const { return sx > 0 ? 0.0 : std::numbers::pi; }
double ZoneCorner::ky() const { return sy > 0 ? 0.0 : std::numbers::pi; }

double corner_symbol(const CouplingParams& params, ZoneCorner corner, PairConvention convention) {
  const double h = params.g2 / std::numbers::sqrt2;
  const double f = params.g1 * corner.sx + params.g2 * corner.sy + h * corner.sx * corner.sy;
  return params.onsite() + 2.0 * params.n_atoms * params.omega * pair_factor(convention) * f;
}

double symbol_near_corner(const CouplingParams& params, ZoneCorner corner, double ax, double ay,
                          PairConvention convention) {
  const double h = params.g2 / std::numbers::sqrt2;
  const double sxy = corner.sx * corner.sy;
  const double delta = -params.g1 * corner.sx * ax - params.g2 * corner.sy * ay +
                       h * sxy * (ax * ay - ax - ay);
  return corner_symbol(params, corner, convention) +
         2.0 * params.n_atoms * params.omega * pair_factor(convention) * delta;
}

ZoneCorner minimizing_corner(const CouplingParams& params, PairConvention convention) {
  ZoneCorner best = kZoneCorners[0];
  double best_value = corner_symbol(params, best, convention);
  for (const auto& c : kZoneCorners) {
    const double v = corner_symbol(params, c, convention);
    if (v < best_value) {
      best_value = v;
      best = c;
    }
  }
  return best;
}

Stability stability_check(const PotentialMatrix& V) {
  const auto& spec = V.lattice();
  if (spec.boundary == Boundary::periodic && !spec.infinite) {
    const int m = spec.side;
    const ZoneCorner corner = minimizing_corner(V.params(), V.convention());
    double lowest = std::numeric_limits<double>::infinity();
    for (int a = 0; a < m; ++a) {
      const double ux = 2.0 * std::numbers::pi * a / m - corner.kx();
      const double ax = 2.0 * std::pow(std::sin(0.5 * ux), 2);
      for (int b = 0; b < m; ++b) {
        const double uy = 2.0 * std::numbers::pi * b / m - corner.ky();
        const double ay = 2.0 * std::pow(std::sin(0.5 * uy), 2);
        lowest = std::min(lowest, symbol_near_corner(V.params(), corner, ax, ay, V.convention()));
      }
    }
    return {lowest > 0.0, lowest};
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(V.dense(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed in stability_check");
  const double lowest = solver.eigenvalues()(0);
  return {lowest > 0.0, lowest};
}

void write_triplets_csv(std::ostream& os, const PotentialMatrix& V) {
  os << "row,col,value\n";
  os.precision(17);
  // Row-major order over the full symmetric matrix.
  std::vector<Triplet> all;
  all.reserve(2 * V.off_diagonal().size() + static_cast<std::size_t>(V.dimension()));
  for (int i = 0; i < V.dimension(); ++i) all.push_back({i, i, V.diagonal()});
  for (const auto& t : V.off_diagonal()) {
    all.push_back(t);
    all.push_back({t.col, t.row, t.value});
  }
  std::sort(all.begin(), all.end(), [](const Triplet& l, const Triplet& r) {
    return l.row != r.row ? l.row < r.row : l.col < r.col;
  });
  for (const auto& t : all) os << t.row << ',' << t.col << ',' << t.value << '\n';
}

}  // namespace spinwave
