#include "spinwave/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace spinwave {

namespace {

constexpr double kUncertaintySlack = 1e-9;

bool is_periodic(const LatticeSpec& l) { return !l.infinite && l.boundary == Boundary::periodic; }

}  // namespace

BlockRegion BlockRegion::centered(const LatticeSpec& lattice, int side) {
  if (lattice.infinite) return {0, 0, side};
  return {(lattice.side - side) / 2, (lattice.side - side) / 2, side};
}

void BlockRegion::validate(const LatticeSpec& lattice) const {
  if (side < 1) throw std::invalid_argument("block side must be at least 1");
  if (lattice.infinite) return;
  if (side > lattice.side) {
    throw std::invalid_argument("block side " + std::to_string(side) + " exceeds lattice side " +
                                std::to_string(lattice.side));
  }
  if (lattice.boundary == Boundary::open &&
      (x0 < 0 || y0 < 0 || x0 + side > lattice.side || y0 + side > lattice.side)) {
    throw std::invalid_argument("block does not fit inside the open lattice");
  }
}

std::vector<std::pair<int, int>> BlockRegion::coordinates() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(static_cast<std::size_t>(side) * side);
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) out.emplace_back(x0 + x, y0 + y);
  }
  return out;
}

BlockCovariance reduce_sites(const CovariancePair& state, std::span<const int> sites) {
  const auto n = static_cast<Eigen::Index>(sites.size());
  BlockCovariance out{Eigen::MatrixXd(n, n), Eigen::MatrixXd(n, n)};
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      out.Q(a, b) = state.Q(sites[a], sites[b]);
      out.P(a, b) = state.P(sites[a], sites[b]);
    }
  }
  return out;
}

BlockCovariance reduce_block(const CovariancePair& state, const BlockRegion& region) {
  region.validate(state.lattice);
  const int m = state.lattice.side;
  std::vector<int> sites;
  for (auto [x, y] : region.coordinates()) {
    if (is_periodic(state.lattice)) {
      x = ((x % m) + m) % m;
      y = ((y % m) + m) % m;
    }
    sites.push_back(state.lattice.index(x, y));
  }
  return reduce_sites(state, sites);
}

BlockCovariance reduce_block(const CorrelationTable& state, const BlockRegion& region) {
  region.validate(state.lattice());
  const auto coords = region.coordinates();
  const auto n = static_cast<Eigen::Index>(coords.size());
  BlockCovariance out{Eigen::MatrixXd(n, n), Eigen::MatrixXd(n, n)};
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const Displacement r{coords[b].first - coords[a].first, coords[b].second - coords[a].second};
      out.Q(a, b) = state.qq(r);
      out.P(a, b) = state.pp(r);
    }
  }
  return out;
}

BlockCovariance reduce_block(const GroundState& state, const BlockRegion& region) {
  return std::visit([&](const auto& s) { return reduce_block(s, region); }, state);
}

std::vector<int> degeneracy_multiplicities(std::span<const double> values, double pairing_tol) {
  std::vector<int> out;
  std::size_t i = 0;
  while (i < values.size()) {
    const double leader = values[i];
    std::size_t j = i + 1;
    while (j < values.size() && std::abs(leader - values[j]) <= pairing_tol * std::abs(leader)) ++j;
    out.push_back(static_cast<int>(j - i));
    i = j;
  }
  return out;
}

SymplecticSpectrum symplectic_spectrum(const Eigen::MatrixXd& Q, const Eigen::MatrixXd& P,
                                       double pairing_tol) {
  if (Q.rows() != Q.cols() || P.rows() != P.cols() || Q.rows() != P.rows()) {
    throw std::invalid_argument("symplectic_spectrum needs square Q and P of equal size");
  }
  if (Q.llt().info() != Eigen::Success || P.llt().info() != Eigen::Success) {
    throw std::invalid_argument("symplectic_spectrum needs positive-definite Q and P");
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> q_solver(Q);
  const Eigen::MatrixXd& U = q_solver.eigenvectors();
  const Eigen::MatrixXd root = U * q_solver.eigenvalues().cwiseSqrt().asDiagonal() * U.transpose();
  Eigen::MatrixXd sym = root * P * root;
  sym = 0.5 * (sym + sym.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed in symplectic_spectrum");

  SymplecticSpectrum out;
  out.values.reserve(static_cast<std::size_t>(sym.rows()));
  for (Eigen::Index i = sym.rows() - 1; i >= 0; --i) {
    const double nu = 2.0 * std::sqrt(std::max(solver.eigenvalues()(i), 0.0));
    if (nu < 1.0 - kUncertaintySlack) {
      throw std::domain_error("symplectic eigenvalue " + std::to_string(nu) +
                              " violates the uncertainty bound nu >= 1");
    }
    out.values.push_back(std::max(nu, 1.0));
  }
  out.multiplicities = degeneracy_multiplicities(out.values, pairing_tol);
  return out;
}

const char* to_string(EntropyMode m) {
  return m == EntropyMode::count_all ? "count_all" : "degenerate_once";
}

double mode_entropy(double nu) {
  if (nu <= 1.0) return 0.0;
  const double a = 0.5 * (nu + 1.0);
  const double b = 0.5 * (nu - 1.0);
  return a * std::log2(a) - b * std::log2(b);
}

double block_entropy(const SymplecticSpectrum& spectrum, EntropyMode mode) {
  double s = 0.0;
  if (mode == EntropyMode::count_all) {
    for (double nu : spectrum.values) s += mode_entropy(nu);
    return s;
  }
  std::size_t i = 0;
  for (int mult : spectrum.multiplicities) {
    s += mode_entropy(spectrum.values[i]);
    i += static_cast<std::size_t>(mult);
  }
  return s;
}

std::vector<EntropyPoint> entropy_vs_L(const GroundState& state, std::span<const int> L_list,
                                       const EntropyOptions& options) {
  for (std::size_t i = 0; i < L_list.size(); ++i) {
    if (L_list[i] < 1) throw std::invalid_argument("block sizes must be positive");
    if (i > 0 && L_list[i] <= L_list[i - 1]) throw std::invalid_argument("block sizes must be strictly increasing");
  }
  const LatticeSpec lattice = std::visit(
      [](const auto& s) -> LatticeSpec {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, CovariancePair>) {
          return s.lattice;
        } else {
          return s.lattice();
        }
      },
      state);

  std::vector<EntropyPoint> out(L_list.size());
  const long count = static_cast<long>(L_list.size());
  // Validate up front so worker threads never throw.
  for (int L : L_list) BlockRegion::centered(lattice, L).validate(lattice);
  if (const auto* table = std::get_if<CorrelationTable>(&state); table && !L_list.empty()) {
    const int need = L_list.back() - 1;
    if (!table->contains({need, need})) {
      throw std::out_of_range("correlation table has no entry for displacement " +
                              to_string(Displacement{need, need}));
    }
  }
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    const int L = L_list[i];
    const auto block = reduce_block(state, BlockRegion::centered(lattice, L));
    const auto spectrum = symplectic_spectrum(block.Q, block.P, options.pairing_tol);
    out[i] = {L, block_entropy(spectrum, options.mode)};
  }
  return out;
}

std::vector<EntropyPoint> entropy_vs_L(const CouplingParams& params, const LatticeSpec& lattice,
                                       Engine engine, std::span<const int> L_list,
                                       const EntropyOptions& options) {
  const int extent = L_list.empty() ? 0 : std::max(0, L_list.back() - 1);
  const auto state = solve_ground_state(params, lattice, engine, extent, options.quad);
  return entropy_vs_L(state, L_list, options);
}

namespace {

TwoSiteParams standard_form(double qi, double pi, double qij, double pij) {
  TwoSiteParams out{};
  out.n = 2.0 * std::sqrt(qi * pi);
  const double product = qij * pij;
  if (product > 0.0) {
    out.sign_anomaly = true;
    out.c = 0.0;
  } else {
    out.c = 2.0 * std::sqrt(-product);
  }
  out.zeta = out.n - out.c;
  out.separable = out.zeta >= 1.0;
  out.eof = eof_symmetric(out.zeta);
  return out;
}

}  // namespace

TwoSiteParams two_site_params(const CovariancePair& state, int site_i, int site_j,
                              double symmetry_tol) {
  const auto n = state.Q.rows();
  if (site_i == site_j) throw std::invalid_argument("two_site_params needs two distinct sites");
  if (site_i < 0 || site_j < 0 || site_i >= n || site_j >= n) {
    throw std::out_of_range("site index outside the lattice");
  }
  const double qi = state.Q(site_i, site_i), qj = state.Q(site_j, site_j);
  const double pi = state.P(site_i, site_i), pj = state.P(site_j, site_j);
  if (std::abs(qi - qj) > symmetry_tol * std::max(qi, qj) ||
      std::abs(pi - pj) > symmetry_tol * std::max(pi, pj)) {
    throw std::invalid_argument(
        "sites " + std::to_string(site_i) + " and " + std::to_string(site_j) +
        " are not symmetric (on-site moments differ); place the pair symmetrically about the "
        "lattice centre");
  }
  return standard_form(qi, pi, state.Q(site_i, site_j), state.P(site_i, site_j));
}

TwoSiteParams two_site_params(const CorrelationTable& state, Displacement r) {
  const auto& lattice = state.lattice();
  const bool same_site = is_periodic(lattice)
                             ? (r.dx % lattice.side == 0 && r.dy % lattice.side == 0)
                             : (r.dx == 0 && r.dy == 0);
  if (same_site) throw std::invalid_argument("two_site_params needs two distinct sites");
  return standard_form(state.qq({0, 0}), state.pp({0, 0}), state.qq(r), state.pp(r));
}

double eof_symmetric(double zeta) {
  if (!(zeta > 0.0)) throw std::invalid_argument("eof_symmetric needs zeta > 0");
  if (zeta >= 1.0) return 0.0;
  const double a = 1.0 / std::sqrt(zeta);
  const double b = std::sqrt(zeta);
  const double cp = 0.25 * (a + b) * (a + b);
  const double cm = 0.25 * (a - b) * (a - b);
  return cp * std::log2(cp) - cm * std::log2(cm);
}

}  // namespace spinwave
