#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace spinwave {

/// Physical constants of the lattice Hamiltonian. Energies are in units of
/// kappa; defaults are omega = 500 kappa, N = 1000.
struct CouplingParams {
  double omega = 500.0;    // coupling rate between the two magnetic states
  double kappa = 1.0;      // effective on-site interaction
  double n_atoms = 1000.0; // atoms per site
  double g1 = 0.0;         // horizontal nearest-neighbour dipolar strength
  double g2 = 0.0;         // vertical nearest-neighbour dipolar strength

  void validate() const;

  /// True when omega is within an order of magnitude of kappa * N, the
  /// regime in which the spin-wave reduction is expected to hold.
  bool in_spin_wave_regime() const;

  /// omega (omega + 4 kappa N): the diagonal of the potential matrix.
  double onsite() const { return omega * (omega + 4.0 * kappa * n_atoms); }

  CouplingParams with_equal_coupling(double g) const {
    CouplingParams p = *this;
    p.g1 = g;
    p.g2 = g;
    return p;
  }

  bool operator==(const CouplingParams&) const = default;
};

enum class Boundary { periodic, open };

struct LatticeSpec {
  int side = 80;
  Boundary boundary = Boundary::periodic;
  bool infinite = false;  // continuum Brillouin zone; side is ignored

  static LatticeSpec periodic(int side) { return {side, Boundary::periodic, false}; }
  static LatticeSpec open(int side) { return {side, Boundary::open, false}; }
  static LatticeSpec infinite_lattice() { return {0, Boundary::periodic, true}; }

  void validate() const;

  int sites() const { return side * side; }
  int index(int x, int y) const { return y * side + x; }
  int x_of(int site) const { return site % side; }
  int y_of(int site) const { return site / side; }

  bool operator==(const LatticeSpec&) const = default;
};

/// How the unordered pair sum of the Hamiltonian is turned into matrix
/// entries. `full` puts N*omega*g on each off-diagonal element and is the
/// convention that reproduces the closed-form critical couplings; `half`
/// puts N*omega*g/2 and only exists for the two-site oracle comparison.
enum class PairConvention { full, half };

inline double pair_factor(PairConvention c) { return c == PairConvention::full ? 1.0 : 0.5; }

enum class Bond { horizontal, vertical, diagonal };

struct Coupling {
  int i;
  int j;
  Bond bond;
  double strength;  // g1, g2 or 2^{-3/2} g2
};

/// One entry per unordered interacting pair, i < j.
std::vector<Coupling> neighbor_couplings(const LatticeSpec& spec, const CouplingParams& params);

struct Triplet {
  int row;
  int col;
  double value;
};

/// Symmetric potential matrix V of H = 1/2 sum p^2 + 1/2 sum q_i V_ij q_j.
/// Off-diagonal entries are stored once per unordered pair (row < col).
class PotentialMatrix {
 public:
  PotentialMatrix(LatticeSpec spec, CouplingParams params, PairConvention convention,
                  double diagonal, std::vector<Triplet> upper);

  int dimension() const { return spec_.sites(); }
  double diagonal() const { return diagonal_; }
  std::span<const Triplet> off_diagonal() const { return upper_; }
  const LatticeSpec& lattice() const { return spec_; }
  const CouplingParams& params() const { return params_; }
  PairConvention convention() const { return convention_; }

  double at(int i, int j) const;
  Eigen::MatrixXd dense() const;

 private:
  LatticeSpec spec_;
  CouplingParams params_;
  PairConvention convention_;
  double diagonal_;
  std::vector<Triplet> upper_;  // sorted by (row, col)
};

PotentialMatrix build_potential(const LatticeSpec& spec, const CouplingParams& params,
                                PairConvention convention = PairConvention::full);

/// Fourier symbol of V:
///   v(k) = omega(omega + 4 kappa N)
///        + 2 N omega f [g1 cos kx + g2 cos ky + 2^{-3/2} g2 (cos(kx+ky) + cos(kx-ky))]
/// with f = 1 (full) or 1/2 (half).
double potential_symbol(const CouplingParams& params, double kx, double ky,
                        PairConvention convention = PairConvention::full);

/// Corners of the Brillouin zone where the symbol can attain its minimum.
/// The symbol is bilinear in (cos kx, cos ky), so its minimum over the zone
/// always sits on one of these.
struct ZoneCorner {
  int sx;  // cos kx = sx, i.e. kx = 0 (sx = 1) or pi (sx = -1)
  int sy;
  double kx() const;
  double ky() const;
};

inline constexpr std::array<ZoneCorner, 4> kZoneCorners{{{1, 1}, {-1, 1}, {1, -1}, {-1, -1}}};

double corner_symbol(const CouplingParams& params, ZoneCorner corner,
                     PairConvention convention = PairConvention::full);

/// Symbol evaluated at k = corner + u, given ax = 1 - cos(ux) and
/// ay = 1 - cos(uy). Avoids the cancellation in the direct formula close to a
/// zero of the symbol.
double symbol_near_corner(const CouplingParams& params, ZoneCorner corner, double ax, double ay,
                          PairConvention convention = PairConvention::full);

/// Corner with the smallest symbol value (ties resolved in kZoneCorners order).
ZoneCorner minimizing_corner(const CouplingParams& params,
                             PairConvention convention = PairConvention::full);

struct Stability {
  bool stable;
  double min_eigenvalue;
};

/// Stable iff the smallest eigenvalue of V is positive. Periodic lattices use
/// the symbol on the discrete zone, which is exactly the spectrum of V.
Stability stability_check(const PotentialMatrix& V);

/// Sparse triplet dump (row, col, value), both triangles plus the diagonal.
void write_triplets_csv(std::ostream& os, const PotentialMatrix& V);

}  // namespace spinwave
