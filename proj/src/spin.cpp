#include "qwb/spin.hpp"

#include <algorithm>
#include <cmath>

#include "qwb/rng.hpp"

namespace qwb {

SpinSystem spin_matrices(int two_j, double hbar) {
  if (two_j < 1 || two_j > 40) throw Error(ErrorCode::InvalidJ, "2j must be in [1, 40], got " + std::to_string(two_j));
  if (!(hbar > 0.0)) throw Error(ErrorCode::InvalidArgument, "hbar must be positive");
  SpinSystem s;
  s.two_j = two_j;
  s.hbar = hbar;
  const Eigen::Index d = s.dim();
  const double j = s.j();
  s.jz = CMatrix::Zero(d, d);
  s.jplus = CMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double m = s.m(k);
    s.jz(k, k) = m * hbar;
    if (k > 0) s.jplus(k - 1, k) = hbar * std::sqrt(j * (j + 1.0) - m * (m + 1.0));
  }
  s.jminus = s.jplus.adjoint();
  s.jx = 0.5 * (s.jplus + s.jminus);
  s.jy = (s.jplus - s.jminus) / (2.0 * kI);
  return s;
}

double check_su2(const CMatrix& jx, const CMatrix& jy, const CMatrix& jz, double hbar) {
  const double a = (commutator(jx, jy) - kI * hbar * jz).norm();
  const double b = (commutator(jy, jz) - kI * hbar * jx).norm();
  const double c = (commutator(jz, jx) - kI * hbar * jy).norm();
  return std::max({a, b, c});
}

double check_su2(const SpinSystem& s) { return check_su2(s.jx, s.jy, s.jz, s.hbar); }

namespace {

void require_unit(cplx alpha, cplx beta) {
  const double n = std::norm(alpha) + std::norm(beta);
  if (std::abs(n - 1.0) > 1e-10) throw Error(ErrorCode::NotNormalized, "|alpha|^2 + |beta|^2 must be 1");
}

CVector pair(cplx a, cplx b) {
  CVector v(2);
  v << a, b;
  return v;
}

}  // namespace

StateVector larmor_evolve(cplx alpha, cplx beta, double omega0, double t) {
  require_unit(alpha, beta);
  return StateVector::from_unit(pair(alpha * std::polar(1.0, -0.5 * omega0 * t), beta * std::polar(1.0, 0.5 * omega0 * t)));
}

StateVector larmor_evolve_spectral(cplx alpha, cplx beta, double omega0, double t, double hbar) {
  require_unit(alpha, beta);
  const auto s = spin_matrices(1, hbar);
  return evolve_isolated(Observable(omega0 * s.jz), StateVector::from_unit(pair(alpha, beta)), t, hbar);
}

MagneticMoments magnetic_moment_means(cplx alpha, cplx beta, double omega0, double gamma, double t, double hbar) {
  const auto psi = larmor_evolve(alpha, beta, omega0, t);
  const auto s = spin_matrices(1, hbar);
  return {expectation(psi, Observable(gamma * s.jx)), expectation(psi, Observable(gamma * s.jy)),
          expectation(psi, Observable(gamma * s.jz))};
}

MagneticMoments magnetic_moment_closed_form(cplx alpha, cplx beta, double omega0, double gamma, double t,
                                            double hbar) {
  require_unit(alpha, beta);
  const cplx ce = gamma * hbar * std::conj(alpha) * beta;
  const double c = std::abs(ce);
  const double phi = std::arg(ce);
  return {c * std::cos(omega0 * t + phi), c * std::sin(omega0 * t + phi),
          0.5 * gamma * hbar * (std::norm(alpha) - std::norm(beta))};
}

CVector TwoSpinBasis::sigma(int s1, int s2) {
  CVector v = CVector::Zero(4);
  v[(s1 > 0 ? 0 : 2) + (s2 > 0 ? 0 : 1)] = 1.0;
  return v;
}

TwoSpinBasis::TwoSpinBasis() {
  const double r = 1.0 / std::sqrt(2.0);
  theta[0] = sigma(+1, +1);
  theta[1] = sigma(-1, -1);
  theta[2] = r * (sigma(+1, -1) + sigma(-1, +1));
  theta[3] = r * (sigma(+1, -1) - sigma(-1, +1));
}

TwoSpinOperators couple_two_spins(double hbar) {
  const auto s = spin_matrices(1, hbar);
  const CMatrix id = CMatrix::Identity(2, 2);
  TwoSpinOperators out;
  out.sx = tensor_op(s.jx, id) + tensor_op(id, s.jx);
  out.sy = tensor_op(s.jy, id) + tensor_op(id, s.jy);
  out.sz = tensor_op(s.jz, id) + tensor_op(id, s.jz);
  out.s_squared = out.sx * out.sx + out.sy * out.sy + out.sz * out.sz;
  return out;
}

CMatrix exchange_operator(Eigen::Index d) {
  if (d < 1) throw Error(ErrorCode::InvalidArgument, "single-particle dimension must be positive");
  CMatrix p = CMatrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index k = 0; k < d; ++k) p(k * d + i, i * d + k) = 1.0;
  }
  return p;
}

std::optional<StateVector> pauli_project(const StateVector& psi, ExchangeSymmetry kind) {
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(psi.dim()))));
  if (d * d != psi.dim()) throw Error(ErrorCode::DimMismatch, "state dimension is not a square");
  const CMatrix p = exchange_operator(d);
  const double sign = kind == ExchangeSymmetry::Boson ? 1.0 : -1.0;
  CVector v = 0.5 * (psi.amplitudes() + sign * (p * psi.amplitudes()));
  if (v.norm() < 1e-12) return std::nullopt;
  return StateVector::normalized(std::move(v));
}

JointOutcome epr_joint_sample(const StateVector& state, std::uint64_t seed, double hbar) {
  if (state.dim() != 4) throw Error(ErrorCode::DimMismatch, "two-spin state must have dimension 4");
  const auto s = spin_matrices(1, hbar);
  const CMatrix id = CMatrix::Identity(2, 2);
  static thread_local std::optional<std::pair<double, std::array<Observable, 2>>> cache;
  if (!cache || cache->first != hbar) {
    cache.emplace(hbar, std::array<Observable, 2>{Observable(tensor_op(s.jz, id)), Observable(tensor_op(id, s.jz))});
  }
  const CounterRng rng(seed);
  const auto first = sample_measurement_with_draw(state, cache->second[0], rng.uniform(0));
  const auto second = sample_measurement_with_draw(*first.post_state, cache->second[1], rng.uniform(1));
  return {first.outcome, second.outcome};
}

bool is_entangled(const StateVector& state) {
  if (state.dim() != 4) throw Error(ErrorCode::DimMismatch, "two-spin state must have dimension 4");
  Eigen::Matrix2cd m;
  m << state[0], state[1], state[2], state[3];
  const Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m);
  return svd.singularValues()[1] > 1e-10;
}

CMatrix ring_derivative_matrix(int n) {
  if (n < 2 || n % 2 != 0) throw Error(ErrorCode::InvalidArgument, "ring size must be even");
  const double h = 2.0 * kPi / n;
  CMatrix d = CMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j == k) continue;
      const int diff = j - k;
      const double sign = (diff % 2 == 0) ? 1.0 : -1.0;
      d(j, k) = 0.5 * sign / std::tan(0.5 * diff * h);
    }
  }
  return d;
}

std::vector<double> orbital_ring_spectrum(int n_grid, double hbar) {
  if (n_grid < 16 || n_grid % 2 != 0) throw Error(ErrorCode::InvalidArgument, "ring size must be even and >= 16");
  const CMatrix lz = -kI * hbar * ring_derivative_matrix(n_grid);
  const Observable op(lz);
  const auto& ev = op.spectrum().eigenvalues;
  return {ev.data(), ev.data() + ev.size()};
}

}  // namespace qwb
