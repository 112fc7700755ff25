#pragma once

// Finite-dimensional Hilbert-space kernel: unit state vectors, Hermitian
// observables with cached spectra, tensor products, Born-rule measurement
// and isolated (time-independent) evolution.

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "qwb/core.hpp"

namespace qwb {

/// Unit-norm amplitude vector. Constructed only through normalizing or
/// norm-checking factories so the invariant holds for every instance.
class StateVector {
 public:
  /// Divides by the 2-norm. Throws ZeroVector if the norm is below 1e-300.
  static StateVector normalized(CVector amplitudes);
  /// Accepts an already-unit vector; throws NotNormalized if |‖v‖ - 1| > tol.
  static StateVector from_unit(CVector amplitudes, double tol = 1e-10);

  Eigen::Index dim() const noexcept { return amp_.size(); }
  const CVector& amplitudes() const noexcept { return amp_; }
  cplx operator[](Eigen::Index i) const { return amp_[i]; }

 private:
  explicit StateVector(CVector amp) : amp_(std::move(amp)) {}
  CVector amp_;
};

inline StateVector make_state(CVector amplitudes) { return StateVector::normalized(std::move(amplitudes)); }

/// Conjugate-linear in the first argument.
cplx inner(const StateVector& a, const StateVector& b);
cplx inner(const CVector& a, const CVector& b);

/// True iff max|A - A†| <= tol * max(1, ‖A‖∞). Non-square input is never Hermitian.
bool is_hermitian(const CMatrix& a, double tol = 1e-10);

struct SpectralDecomposition {
  RVector eigenvalues;                          // ascending
  CMatrix eigenvectors;                         // columns, unitary
  std::vector<std::vector<Eigen::Index>> groups;  // degenerate eigenspaces, ascending
  double degeneracy_tol = 0.0;

  /// Mean eigenvalue of group g.
  double group_value(std::size_t g) const;
  /// Orthonormal basis of group g as columns.
  CMatrix group_basis(std::size_t g) const;
};

/// Default degeneracy tolerance: 1e-8 of the spectral range, floored at 1e-12.
double default_degeneracy_tol(const RVector& ascending_eigenvalues);

/// Hermitian matrix with a lazily computed, shared spectral decomposition.
/// Copies share the cache; the matrix itself is immutable.
class Observable {
 public:
  /// Throws NotHermitian when the relative hermiticity defect exceeds tol.
  explicit Observable(CMatrix mat, double hermiticity_tol = 1e-10);

  Eigen::Index dim() const noexcept { return mat_.rows(); }
  const CMatrix& matrix() const noexcept { return mat_; }

  /// Spectrum with the default degeneracy tolerance (cached, thread-safe).
  const SpectralDecomposition& spectrum() const;

 private:
  struct Cache;
  CMatrix mat_;
  std::shared_ptr<Cache> cache_;
};

SpectralDecomposition spectral_decompose(const Observable& a);
SpectralDecomposition spectral_decompose(const Observable& a, double degeneracy_tol);

/// Orthonormal columns that are simultaneously eigenvectors of A and B.
/// commute_tol defaults to 1e-9 * ‖A‖‖B‖ (Frobenius).
CMatrix simultaneous_diagonalize(const Observable& a, const Observable& b,
                                 std::optional<double> commute_tol = std::nullopt);

CMatrix commutator(const CMatrix& a, const CMatrix& b);

double expectation(const StateVector& psi, const Observable& a);
double uncertainty(const StateVector& psi, const Observable& a);

struct MeasurementRecord {
  double outcome = 0.0;
  double probability = 0.0;
  /// Empty when the outcome has probability below 1e-14.
  std::optional<StateVector> post_state;
};

/// One record per degenerate group, ascending outcome.
std::vector<MeasurementRecord> measure_probabilities(const StateVector& psi, const Observable& a);

/// Born-rule draw with a counter-based generator keyed on seed.
MeasurementRecord sample_measurement(const StateVector& psi, const Observable& a, std::uint64_t seed);
/// Same draw with an explicit uniform variate u in [0, 1).
MeasurementRecord sample_measurement_with_draw(const StateVector& psi, const Observable& a, double u);

/// Row-major Kronecker layout: component (i, j) of a⊗b sits at i*dim(b) + j.
StateVector tensor_state(const StateVector& a, const StateVector& b);
CVector tensor_vector(const CVector& a, const CVector& b);
CMatrix tensor_op(const CMatrix& a, const CMatrix& b);

/// ψ(t) = Σ_α λ_α e^{-i E_α t/ħ} ψ_α over the eigenbasis of H.
StateVector evolve_isolated(const Observable& h, const StateVector& psi0, double t, double hbar = 1.0);

}  // namespace qwb
