#pragma once

// Angular-momentum matrices, spin-1/2 precession, two-spin coupling,
// exchange symmetry and a few entanglement utilities.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "qwb/hilbert.hpp"

namespace qwb {

/// Spin-j matrices in the |j, m> basis ordered by descending m.
struct SpinSystem {
  int two_j = 1;
  double hbar = 1.0;
  CMatrix jx, jy, jz, jplus, jminus;

  double j() const noexcept { return 0.5 * two_j; }
  Eigen::Index dim() const noexcept { return two_j + 1; }
  /// m of basis index k.
  double m(Eigen::Index k) const noexcept { return j() - static_cast<double>(k); }
  CMatrix j_squared() const { return jx * jx + jy * jy + jz * jz; }
};

/// Condon-Shortley ladder construction. Throws InvalidJ unless 1 <= 2j <= 40.
SpinSystem spin_matrices(int two_j, double hbar = 1.0);

/// Largest Frobenius norm of [Jx,Jy]-iħJz and its two cyclic partners.
double check_su2(const CMatrix& jx, const CMatrix& jy, const CMatrix& jz, double hbar = 1.0);
double check_su2(const SpinSystem& s);

// Spin 1/2 in a field along z ----------------------------------------------

/// (α e^{-iω₀t/2}, β e^{iω₀t/2}). Throws NotNormalized if |α|²+|β|² is off by more than 1e-10.
StateVector larmor_evolve(cplx alpha, cplx beta, double omega0, double t);
/// Same state from the eigenbasis propagator of H = ω₀ S_z.
StateVector larmor_evolve_spectral(cplx alpha, cplx beta, double omega0, double t, double hbar = 1.0);

struct MagneticMoments {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// <γ S> in the precessing state, from expectation values.
MagneticMoments magnetic_moment_means(cplx alpha, cplx beta, double omega0, double gamma, double t,
                                      double hbar = 1.0);
/// μx = C cos(ω₀t+φ), μy = C sin(ω₀t+φ), μz = γħ(|α|²-|β|²)/2 with γħ ᾱβ = C e^{iφ}.
MagneticMoments magnetic_moment_closed_form(cplx alpha, cplx beta, double omega0, double gamma, double t,
                                            double hbar = 1.0);

// Two spins 1/2 ------------------------------------------------------------

/// Product basis σ_{s1,s2} with index order ++, +-, -+, -- and the coupled vectors
/// Θ1 = σ++, Θ2 = σ--, Θ3 = (σ+- + σ-+)/√2, Θ4 = (σ+- - σ-+)/√2.
struct TwoSpinBasis {
  static constexpr Eigen::Index kPP = 0, kPM = 1, kMP = 2, kMM = 3;
  std::array<CVector, 4> theta;

  TwoSpinBasis();
  /// Product vector for signs s1, s2 in {+1, -1}.
  static CVector sigma(int s1, int s2);
};

struct TwoSpinOperators {
  CMatrix sx, sy, sz;  // S¹ ⊗ I + I ⊗ S²
  CMatrix s_squared;
  TwoSpinBasis basis;
};

TwoSpinOperators couple_two_spins(double hbar = 1.0);

/// P(u⊗v) = v⊗u on a dim_single² space.
CMatrix exchange_operator(Eigen::Index dim_single);

enum class ExchangeSymmetry { Boson, Fermion };

/// (I ± P)/2 then renormalize. std::nullopt means rejected: the projected norm is below 1e-12.
std::optional<StateVector> pauli_project(const StateVector& psi, ExchangeSymmetry kind);

struct JointOutcome {
  double s1 = 0.0;
  double s2 = 0.0;
};

/// Measure S_z ⊗ I, collapse, then measure I ⊗ S_z. Uses draws 0 and 1 of the seed's stream.
JointOutcome epr_joint_sample(const StateVector& state, std::uint64_t seed, double hbar = 1.0);

/// True iff the second singular value of the 2x2 amplitude matrix exceeds 1e-10.
bool is_entangled(const StateVector& state);

// Orbital angular momentum on a ring ----------------------------------------

/// Fourier differentiation matrix on n equispaced points of [0, 2π), with the
/// Nyquist mode differentiated to zero.
CMatrix ring_derivative_matrix(int n_grid);

/// Ascending eigenvalues of -iħ d/dφ. Throws InvalidArgument unless n_grid >= 16 and even.
std::vector<double> orbital_ring_spectrum(int n_grid, double hbar = 1.0);

}  // namespace qwb
