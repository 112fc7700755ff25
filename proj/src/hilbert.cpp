#include "qwb/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "qwb/rng.hpp"

namespace qwb {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::EigensolveFailure: return "EigensolveFailure";
    case ErrorCode::DoNotCommute: return "DoNotCommute";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::PacketTooNarrow: return "PacketTooNarrow";
    case ErrorCode::PacketNearBoundary: return "PacketNearBoundary";
    case ErrorCode::GridTooNarrow: return "GridTooNarrow";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::StabilityViolation: return "StabilityViolation";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::NoTransmission: return "NoTransmission";
    case ErrorCode::InvalidJ: return "InvalidJ";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::ExperimentFailed: return "ExperimentFailed";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::DimMismatch,
                std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

double inf_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace

// ---------------------------------------------------------------------------
// StateVector

StateVector StateVector::normalized(CVector amplitudes) {
  if (amplitudes.size() < 1) throw Error(ErrorCode::ZeroVector, "empty amplitude vector");
  const double n = amplitudes.norm();
  if (!(n >= 1e-300)) throw Error(ErrorCode::ZeroVector, "amplitude norm below 1e-300");
  amplitudes /= n;
  return StateVector(std::move(amplitudes));
}

StateVector StateVector::from_unit(CVector amplitudes, double tol) {
  if (amplitudes.size() < 1) throw Error(ErrorCode::ZeroVector, "empty amplitude vector");
  const double n = amplitudes.norm();
  if (!(std::abs(n - 1.0) <= tol)) {
    throw Error(ErrorCode::NotNormalized, "norm " + std::to_string(n) + " is not 1");
  }
  return StateVector(std::move(amplitudes));
}

cplx inner(const CVector& a, const CVector& b) {
  require_same_dim(a.size(), b.size(), "inner");
  return a.dot(b);  // Eigen's dot conjugates the first argument
}

cplx inner(const StateVector& a, const StateVector& b) { return inner(a.amplitudes(), b.amplitudes()); }

bool is_hermitian(const CMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const double defect = (a - a.adjoint()).cwiseAbs().maxCoeff();
  return defect <= tol * std::max(1.0, inf_norm(a));
}

// ---------------------------------------------------------------------------
// Spectra

double SpectralDecomposition::group_value(std::size_t g) const {
  const auto& idx = groups.at(g);
  double s = 0.0;
  for (auto i : idx) s += eigenvalues[i];
  return s / static_cast<double>(idx.size());
}

CMatrix SpectralDecomposition::group_basis(std::size_t g) const {
  const auto& idx = groups.at(g);
  CMatrix q(eigenvectors.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t c = 0; c < idx.size(); ++c) q.col(static_cast<Eigen::Index>(c)) = eigenvectors.col(idx[c]);
  return q;
}

double default_degeneracy_tol(const RVector& ev) {
  if (ev.size() == 0) return 1e-12;
  const double range = ev.maxCoeff() - ev.minCoeff();
  return std::max(1e-8 * range, 1e-12);
}

namespace {

SpectralDecomposition decompose_matrix(const CMatrix& mat, std::optional<double> degeneracy_tol) {
  const CMatrix sym = 0.5 * (mat + mat.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
  if (solver.info() != Eigen::Success || !solver.eigenvalues().allFinite()) {
    throw Error(ErrorCode::EigensolveFailure, "Hermitian eigensolver did not converge");
  }
  SpectralDecomposition out;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  out.degeneracy_tol = degeneracy_tol.value_or(default_degeneracy_tol(out.eigenvalues));

  const Eigen::Index n = out.eigenvalues.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i == 0 || out.eigenvalues[i] - out.eigenvalues[i - 1] > out.degeneracy_tol) {
      out.groups.emplace_back();
    }
    out.groups.back().push_back(i);
  }
  return out;
}

}  // namespace

struct Observable::Cache {
  std::once_flag once;
  std::optional<SpectralDecomposition> spectrum;
};

Observable::Observable(CMatrix mat, double hermiticity_tol) : mat_(std::move(mat)), cache_(std::make_shared<Cache>()) {
  if (mat_.rows() < 1 || mat_.rows() != mat_.cols()) {
    throw Error(ErrorCode::DimMismatch, "observable must be a non-empty square matrix");
  }
  if (!is_hermitian(mat_, hermiticity_tol)) throw Error(ErrorCode::NotHermitian, "matrix is not Hermitian");
}

const SpectralDecomposition& Observable::spectrum() const {
  std::call_once(cache_->once, [this] { cache_->spectrum = decompose_matrix(mat_, std::nullopt); });
  return *cache_->spectrum;
}

SpectralDecomposition spectral_decompose(const Observable& a) { return a.spectrum(); }

SpectralDecomposition spectral_decompose(const Observable& a, double degeneracy_tol) {
  return decompose_matrix(a.matrix(), degeneracy_tol);
}

CMatrix commutator(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols()) {
    throw Error(ErrorCode::DimMismatch, "commutator needs square matrices");
  }
  require_same_dim(a.rows(), b.rows(), "commutator");
  return a * b - b * a;
}

CMatrix simultaneous_diagonalize(const Observable& a, const Observable& b, std::optional<double> commute_tol) {
  require_same_dim(a.dim(), b.dim(), "simultaneous_diagonalize");
  const double tol = commute_tol.value_or(1e-9 * a.matrix().norm() * b.matrix().norm());
  const double defect = commutator(a.matrix(), b.matrix()).norm();
  if (defect > tol) {
    throw Error(ErrorCode::DoNotCommute, "‖[A,B]‖ = " + std::to_string(defect));
  }

  const auto& spec = a.spectrum();
  CMatrix basis(a.dim(), a.dim());
  Eigen::Index col = 0;
  for (std::size_t g = 0; g < spec.groups.size(); ++g) {
    const CMatrix q = spec.group_basis(g);
    const CMatrix restricted = q.adjoint() * b.matrix() * q;
    const auto sub = decompose_matrix(restricted, std::nullopt);
    basis.middleCols(col, q.cols()) = q * sub.eigenvectors;
    col += q.cols();
  }
  return basis;
}

// ---------------------------------------------------------------------------
// Expectations and measurement

double expectation(const StateVector& psi, const Observable& a) {
  require_same_dim(psi.dim(), a.dim(), "expectation");
  const cplx v = psi.amplitudes().dot(a.matrix() * psi.amplitudes());
  if (std::abs(v.imag()) > 1e-10 * std::max(1.0, inf_norm(a.matrix()))) {
    throw Error(ErrorCode::NotHermitian, "expectation value has an imaginary part");
  }
  return v.real();
}

double uncertainty(const StateVector& psi, const Observable& a) {
  const double mean = expectation(psi, a);
  // ‖(A - <A>)ψ‖² equals <A²> - <A>² without the cancellation.
  const CVector shifted = a.matrix() * psi.amplitudes() - mean * psi.amplitudes();
  return std::sqrt(std::max(0.0, shifted.squaredNorm()));
}

std::vector<MeasurementRecord> measure_probabilities(const StateVector& psi, const Observable& a) {
  require_same_dim(psi.dim(), a.dim(), "measure_probabilities");
  const auto& spec = a.spectrum();
  std::vector<MeasurementRecord> records;
  records.reserve(spec.groups.size());
  for (std::size_t g = 0; g < spec.groups.size(); ++g) {
    const CMatrix q = spec.group_basis(g);
    const CVector coeffs = q.adjoint() * psi.amplitudes();
    MeasurementRecord r;
    r.outcome = spec.group_value(g);
    r.probability = std::min(1.0, coeffs.squaredNorm());
    if (r.probability >= 1e-14) r.post_state = StateVector::normalized(q * coeffs);
    records.push_back(std::move(r));
  }
  return records;
}

MeasurementRecord sample_measurement_with_draw(const StateVector& psi, const Observable& a, double u) {
  auto records = measure_probabilities(psi, a);
  double total = 0.0;
  for (const auto& r : records) total += r.probability;
  const double target = u * total;
  double cumulative = 0.0;
  std::optional<std::size_t> last_possible;
  for (std::size_t g = 0; g < records.size(); ++g) {
    if (!records[g].post_state) continue;
    last_possible = g;
    cumulative += records[g].probability;
    if (target < cumulative) return std::move(records[g]);
  }
  // u*total landed past the rounded cumulative sum
  return std::move(records.at(*last_possible));
}

MeasurementRecord sample_measurement(const StateVector& psi, const Observable& a, std::uint64_t seed) {
  return sample_measurement_with_draw(psi, a, CounterRng(seed).uniform(0));
}

// ---------------------------------------------------------------------------
// Tensor products and evolution

CVector tensor_vector(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

StateVector tensor_state(const StateVector& a, const StateVector& b) {
  return StateVector::from_unit(tensor_vector(a.amplitudes(), b.amplitudes()));
}

CMatrix tensor_op(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

StateVector evolve_isolated(const Observable& h, const StateVector& psi0, double t, double hbar) {
  require_same_dim(psi0.dim(), h.dim(), "evolve_isolated");
  const auto& spec = h.spectrum();
  CVector coeffs = spec.eigenvectors.adjoint() * psi0.amplitudes();
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
    coeffs[k] *= std::exp(-kI * spec.eigenvalues[k] * t / hbar);
  }
  return StateVector::from_unit(spec.eigenvectors * coeffs);
}

}  // namespace qwb
