#pragma once

// Reference computations written independently of the library code paths:
// direct sums instead of FFTs, plain quadrature, and small least-squares fits.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "qwb/core.hpp"

namespace oracle {

using qwb::cplx;

/// φ(p_j) = (2πħ)^{-1/2} Σ_k ψ(x_k) e^{-i p_j x_k/ħ} dx by direct summation.
inline std::vector<cplx> direct_momentum(const std::vector<cplx>& psi, double x_min, double dx, double hbar) {
  const std::size_t n = psi.size();
  const double dp = 2.0 * qwb::kPi * hbar / (dx * static_cast<double>(n));
  std::vector<cplx> phi(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double p = (static_cast<double>(j) - static_cast<double>(n / 2)) * dp;
    cplx s{};
    for (std::size_t k = 0; k < n; ++k) {
      const double x = x_min + dx * static_cast<double>(k);
      s += psi[k] * std::polar(1.0, -p * x / hbar);
    }
    phi[j] = s * dx / std::sqrt(2.0 * qwb::kPi * hbar);
  }
  return phi;
}

/// Σ f_k |a_k|² h
template <class F>
double moment(const std::vector<cplx>& a, double origin, double h, F f) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += f(origin + h * static_cast<double>(k)) * std::norm(a[k]);
  return s * h;
}

/// Least-squares ω for a(t) ≈ A cos ωt + B sin ωt + C, Gauss-Newton on all four parameters from omega0.
inline double fit_frequency(const std::vector<double>& t, const std::vector<double>& y, double omega0) {
  const auto n = static_cast<Eigen::Index>(t.size());
  Eigen::Vector4d x(0.0, 0.0, 0.0, omega0);
  for (int it = 0; it < 100; ++it) {
    Eigen::MatrixXd jac(n, 4);
    Eigen::VectorXd res(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double c = std::cos(x[3] * t[i]), s = std::sin(x[3] * t[i]);
      jac.row(i) << c, s, 1.0, t[i] * (-x[0] * s + x[1] * c);
      res[i] = y[i] - (x[0] * c + x[1] * s + x[2]);
    }
    // first pass fits only the linear coefficients
    if (it == 0) {
      x.head<3>() = jac.leftCols<3>().colPivHouseholderQr().solve(res);
      continue;
    }
    const Eigen::Vector4d step = jac.colPivHouseholderQr().solve(res);
    x += step;
    if (std::abs(step[3]) < 1e-15 * std::abs(x[3])) break;
  }
  return x[3];
}

/// 3σ binomial window for a frequency over n draws.
inline double binomial_window(double p, std::size_t n) { return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n)); }

/// Hermitian test matrix with entries from a simple LCG.
inline qwb::CMatrix random_hermitian(Eigen::Index d, std::uint64_t seed) {
  std::uint64_t s = seed * 6364136223846793005ULL + 1442695040888963407ULL;
  auto next = [&] {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(s >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  };
  qwb::CMatrix a(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = {next(), next()};
  }
  return (a + a.adjoint()) * 0.5;
}

inline qwb::CVector random_vector(Eigen::Index d, std::uint64_t seed) {
  std::uint64_t s = seed * 2862933555777941757ULL + 3037000493ULL;
  qwb::CVector v(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    const double re = static_cast<double>(s >> 11) * 0x1.0p-53 - 0.5;
    s = s * 6364136223846793005ULL + 1442695040888963407ULL;
    const double im = static_cast<double>(s >> 11) * 0x1.0p-53 - 0.5;
    v[i] = {re, im};
  }
  return v;
}

}  // namespace oracle
