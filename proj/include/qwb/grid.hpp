#pragma once

// Wavefunctions sampled on uniform periodic grids and the ħ-scaled Fourier
// transform between position and momentum representations.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qwb/core.hpp"

namespace qwb {

/// Uniform periodic grid x_i = x_min + i*dx, i in [0, n). n is a power of two >= 8.
class Grid1D {
 public:
  Grid1D(double x_min, double dx, std::size_t n);
  /// Grid covering [-half_extent, half_extent) with n samples.
  static Grid1D symmetric(double half_extent, std::size_t n);

  double x_min() const noexcept { return x_min_; }
  double dx() const noexcept { return dx_; }
  std::size_t n() const noexcept { return n_; }
  double length() const noexcept { return dx_ * static_cast<double>(n_); }
  double x(std::size_t i) const noexcept { return x_min_ + dx_ * static_cast<double>(i); }
  double x_last() const noexcept { return x(n_ - 1); }

  /// Dual momentum spacing 2πħ/(n dx).
  double dp(double hbar) const noexcept { return 2.0 * kPi * hbar / length(); }
  /// Momentum of ascending index j: (j - n/2) dp.
  double p(std::size_t j, double hbar) const noexcept {
    return (static_cast<double>(j) - static_cast<double>(n_ / 2)) * dp(hbar);
  }
  /// Angular wavenumber of FFT-ordered index q; the Nyquist bin maps to -π/dx.
  double k_fft(std::size_t q) const noexcept;

  bool operator==(const Grid1D&) const = default;

 private:
  double x_min_;
  double dx_;
  std::size_t n_;
};

struct GridWavefunction {
  Grid1D grid;
  std::vector<cplx> amp;
  double mass = 1.0;
  double hbar = 1.0;

  GridWavefunction(Grid1D g, std::vector<cplx> a, double m = 1.0, double h = 1.0);

  /// Σ|ψ|² dx
  double norm2() const;
  bool is_normalized(double tol = 1e-9) const;
  void normalize();
};

/// φ(p_j) on the dual grid, ascending p. Carries the source grid so the
/// inverse transform can restore the x_min phase.
struct MomentumWavefunction {
  Grid1D grid;
  std::vector<cplx> amp;
  double mass = 1.0;
  double hbar = 1.0;

  double dp() const noexcept { return grid.dp(hbar); }
  double p(std::size_t j) const noexcept { return grid.p(j, hbar); }
  /// Σ|φ|² dp
  double norm2() const;
};

struct Uncertainties {
  double sigma_x = 0.0;
  double sigma_p = 0.0;
};

struct MomentumRoutes {
  double momentum_space = 0.0;  // Σ p|φ|² dp
  double position_space = 0.0;  // -iħ Σ ψ̄ ψ' dx
};

/// ψ(x) ∝ exp(-(x-x0)²/(4σ²)) e^{i p0 x/ħ}, normalized on the grid.
/// Throws PacketTooNarrow if σ < 4 dx; PacketNearBoundary if x0 ± 6σ leaves the grid.
GridWavefunction gaussian_packet(const Grid1D& grid, double x0, double p0, double sigma_x, double mass = 1.0,
                                 double hbar = 1.0);

/// φ(p) = (2πħ)^{-1/2} Σ ψ(x) e^{-ipx/ħ} dx, evaluated by FFT.
MomentumWavefunction to_momentum(const GridWavefunction& psi);
GridWavefunction from_momentum(const MomentumWavefunction& phi);

double expectation_x(const GridWavefunction& psi);
/// Momentum-space route.
double expectation_p(const GridWavefunction& psi);
MomentumRoutes expectation_p_routes(const GridWavefunction& psi);
Uncertainties uncertainties(const GridWavefunction& psi);

/// dψ/dx via FFT. Uses the same wavenumber symbol as the momentum grid.
std::vector<cplx> spectral_derivative(const Grid1D& grid, std::span<const cplx> values);
/// p̂ψ = -iħ ψ'
std::vector<cplx> apply_momentum(const GridWavefunction& psi);
/// x̂ψ
std::vector<cplx> apply_position(const GridWavefunction& psi);

/// True iff |ψ| < threshold on the outer `fraction` of the grid at each end.
bool support_margin_ok(const GridWavefunction& psi, double fraction = 0.1, double threshold = 1e-10);

/// Normalized Hermite function of index k (k <= 20) with center and length
/// scale ℓ. Throws GridTooNarrow if |h_k| >= 1e-12 at either grid edge.
GridWavefunction hermite_basis(const Grid1D& grid, int k, double center = 0.0, double length = 1.0,
                               double mass = 1.0, double hbar = 1.0);

// Serialization ------------------------------------------------------------

/// Header row then x, Re ψ, Im ψ, |ψ|² with 17 significant digits.
void write_csv(std::ostream& os, const GridWavefunction& psi);

/// Little-endian dump: "QWF1", u64 n, f64 dx, x_min, mass, hbar, then n (re, im) f64 pairs.
void write_binary(std::ostream& os, const GridWavefunction& psi);
GridWavefunction read_binary(std::istream& is);

}  // namespace qwb
