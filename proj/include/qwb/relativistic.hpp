#pragma once

// Klein-Gordon in first-order two-component form, Dirac gamma matrices, and
// the free Dirac problem. Units with c = 1.

#include <array>
#include <cstdint>
#include <vector>

#include "qwb/grid.hpp"

namespace qwb {

// Klein-Gordon ---------------------------------------------------------------

/// ω = √(k² + (m/ħ)²)
double kg_dispersion(double k, double mass, double hbar = 1.0);

/// φ1 = ψ + (iħ/m) ∂ₜψ and φ2 = ψ - (iħ/m) ∂ₜψ on a periodic grid.
struct KGState {
  Grid1D grid;
  std::vector<cplx> phi1, phi2;
  double mass = 1.0;
  double hbar = 1.0;

  KGState(Grid1D g, std::vector<cplx> p1, std::vector<cplx> p2, double m = 1.0, double h = 1.0);
  static KGState from_field(Grid1D g, const std::vector<cplx>& psi, const std::vector<cplx>& psi_dot, double m = 1.0,
                            double h = 1.0);

  /// (φ1 + φ2)/2
  std::vector<cplx> psi() const;
  /// -(im/ħ)(φ1 - φ2)/2
  std::vector<cplx> psi_dot() const;
};

/// Gaussian packet ψ0 (width σ, mean momentum p0) lifted to a single frequency
/// branch: the dominant component is 2ψ0 and the other follows each mode's
/// eigenvector. Scaled so the charge is +1 (positive) or -1 (negative).
KGState kg_positive_packet(const Grid1D& grid, double x0, double p0, double sigma, double mass = 1.0,
                           double hbar = 1.0);
KGState kg_negative_packet(const Grid1D& grid, double x0, double p0, double sigma, double mass = 1.0,
                           double hbar = 1.0);

enum class KGMethod { Exact, RK4 };

/// Exact mode: per-mode exp(-iKt) = cos(ωt) - i sin(ωt) K/ω. RK4 mode throws
/// StabilityViolation unless dt (ħ k_max²/2m + 2m/ħ) < 0.5.
KGState kg_evolve(const KGState& state, double dt, int steps, KGMethod method = KGMethod::Exact);

/// P = (iħ/2m)(ψ̄ ∂ₜψ - ψ ∂ₜψ̄) = (|φ1|² - |φ2|²)/4
std::vector<double> kg_density(const KGState& state);
/// Σ P dx
double kg_charge(const KGState& state);

// Dirac ----------------------------------------------------------------------

/// g1..g3 square to -I, g4 to +I, all mutually anticommuting (Dirac representation).
struct GammaSet {
  std::array<CMatrix, 4> g;  // g[0] = g1, ..., g[3] = g4

  /// αⱼ = g4 gⱼ for j = 1..3
  CMatrix alpha(int j) const { return g[3] * g[static_cast<std::size_t>(j - 1)]; }
  const CMatrix& beta() const { return g[3]; }
};

GammaSet build_gammas();

/// H = Σ αⱼ pⱼ + m β
CMatrix dirac_hamiltonian(const std::array<double, 3>& p, double mass);

struct DiracMode {
  double p = 0.0;
  double mass = 0.0;
  RVector energies;      // ascending: -E, -E, +E, +E
  CMatrix spinors;       // orthonormal columns matching energies
  /// Norm of the lower (β = -1) pair of a spinor column.
  double small_component(Eigen::Index col) const;
  /// Columns 2 and 3 hold the positive branch.
  CVector positive(int which = 0) const { return spinors.col(2 + which); }
};

/// Eigensystem of H for momentum (p, 0, 0).
DiracMode dirac_mode(double p, double mass);

/// Positive-energy spinor with upper and lower pairs exchanged.
CVector swapped_state(const DiracMode& mode);

/// Four-component field on a periodic 1D grid, momentum along x.
struct DiracField {
  Grid1D grid;
  std::array<std::vector<cplx>, 4> comp;
  double mass = 0.0;
  double hbar = 1.0;

  double norm2() const;
};

/// Exact free evolution per momentum mode.
DiracField dirac_evolve_free(const DiracField& field, double t);

/// ‖D²ψ - (∂ₜₜ - ∂ₓₓ)ψ‖/‖ψ‖ with D = g1 ∂ₓ + g4 ∂ₜ on the periodic n×n grid
/// over [0, 2π)². Components are row-major (x index major).
double dirac_square_residual(std::size_t n_grid, const std::array<std::vector<cplx>, 4>& field);

/// Worst residual over n_fields random band-limited fields (zero Nyquist).
double dirac_square_check(std::size_t n_grid, int n_fields = 20, std::uint64_t seed = 7);

}  // namespace qwb
