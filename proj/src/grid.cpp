#include "qwb/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qwb/fft.hpp"

namespace qwb {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void require_normalized(const GridWavefunction& psi) {
  if (!psi.is_normalized()) {
    throw Error(ErrorCode::NotNormalized, "Σ|ψ|²dx = " + std::to_string(psi.norm2()));
  }
}

}  // namespace

Grid1D::Grid1D(double x_min, double dx, std::size_t n) : x_min_(x_min), dx_(dx), n_(n) {
  if (!(dx > 0.0) || !std::isfinite(dx) || !std::isfinite(x_min)) {
    throw Error(ErrorCode::InvalidGrid, "grid spacing must be positive and finite");
  }
  if (n < 8 || !is_power_of_two(n)) {
    throw Error(ErrorCode::InvalidGrid, "grid size must be a power of two >= 8, got " + std::to_string(n));
  }
}

Grid1D Grid1D::symmetric(double half_extent, std::size_t n) {
  return Grid1D(-half_extent, 2.0 * half_extent / static_cast<double>(n), n);
}

double Grid1D::k_fft(std::size_t q) const noexcept {
  const auto n = static_cast<std::ptrdiff_t>(n_);
  auto s = static_cast<std::ptrdiff_t>(q);
  if (s >= n / 2) s -= n;
  return 2.0 * kPi * static_cast<double>(s) / length();
}

GridWavefunction::GridWavefunction(Grid1D g, std::vector<cplx> a, double m, double h)
    : grid(g), amp(std::move(a)), mass(m), hbar(h) {
  if (amp.size() != grid.n()) throw Error(ErrorCode::DimMismatch, "amplitude count differs from grid size");
  if (!(mass > 0.0) || !(hbar > 0.0)) throw Error(ErrorCode::InvalidArgument, "mass and hbar must be positive");
}

double GridWavefunction::norm2() const {
  double s = 0.0;
  for (const auto& a : amp) s += std::norm(a);
  return s * grid.dx();
}

bool GridWavefunction::is_normalized(double tol) const { return std::abs(norm2() - 1.0) <= tol; }

void GridWavefunction::normalize() {
  const double n2 = norm2();
  if (!(n2 > 0.0)) throw Error(ErrorCode::ZeroVector, "cannot normalize a zero wavefunction");
  const double s = 1.0 / std::sqrt(n2);
  for (auto& a : amp) a *= s;
}

double MomentumWavefunction::norm2() const {
  double s = 0.0;
  for (const auto& a : amp) s += std::norm(a);
  return s * dp();
}

GridWavefunction gaussian_packet(const Grid1D& grid, double x0, double p0, double sigma_x, double mass,
                                 double hbar) {
  if (!(sigma_x >= 4.0 * grid.dx())) {
    throw Error(ErrorCode::PacketTooNarrow, "sigma_x must be at least 4 dx");
  }
  if (grid.length() < 12.0 * sigma_x || x0 - 6.0 * sigma_x < grid.x_min() || x0 + 6.0 * sigma_x > grid.x_last()) {
    throw Error(ErrorCode::PacketNearBoundary, "packet does not fit 6 sigma inside the grid");
  }
  std::vector<cplx> amp(grid.n());
  for (std::size_t i = 0; i < grid.n(); ++i) {
    const double x = grid.x(i);
    const double u = x - x0;
    amp[i] = std::exp(-u * u / (4.0 * sigma_x * sigma_x)) * std::polar(1.0, p0 * x / hbar);
  }
  GridWavefunction psi(grid, std::move(amp), mass, hbar);
  psi.normalize();
  return psi;
}

MomentumWavefunction to_momentum(const GridWavefunction& psi) {
  const auto& g = psi.grid;
  const std::size_t n = g.n();
  Fft fft(n);
  auto buf = fft.data();
  for (std::size_t k = 0; k < n; ++k) buf[k] = (k % 2 ? -1.0 : 1.0) * psi.amp[k];
  fft.forward();
  const double scale = g.dx() / std::sqrt(2.0 * kPi * psi.hbar);
  MomentumWavefunction out{g, std::vector<cplx>(n), psi.mass, psi.hbar};
  for (std::size_t j = 0; j < n; ++j) {
    out.amp[j] = scale * std::polar(1.0, -g.p(j, psi.hbar) * g.x_min() / psi.hbar) * buf[j];
  }
  return out;
}

GridWavefunction from_momentum(const MomentumWavefunction& phi) {
  const auto& g = phi.grid;
  const std::size_t n = g.n();
  Fft fft(n);
  auto buf = fft.data();
  for (std::size_t j = 0; j < n; ++j) buf[j] = phi.amp[j] * std::polar(1.0, g.p(j, phi.hbar) * g.x_min() / phi.hbar);
  fft.backward();
  const double scale = phi.dp() / std::sqrt(2.0 * kPi * phi.hbar);
  std::vector<cplx> amp(n);
  for (std::size_t k = 0; k < n; ++k) amp[k] = (k % 2 ? -scale : scale) * buf[k];
  return GridWavefunction(g, std::move(amp), phi.mass, phi.hbar);
}

double expectation_x(const GridWavefunction& psi) {
  require_normalized(psi);
  double s = 0.0;
  for (std::size_t i = 0; i < psi.grid.n(); ++i) s += psi.grid.x(i) * std::norm(psi.amp[i]);
  return s * psi.grid.dx();
}

double expectation_p(const GridWavefunction& psi) {
  require_normalized(psi);
  const auto phi = to_momentum(psi);
  double s = 0.0;
  for (std::size_t j = 0; j < phi.amp.size(); ++j) s += phi.p(j) * std::norm(phi.amp[j]);
  return s * phi.dp();
}

std::vector<cplx> spectral_derivative(const Grid1D& grid, std::span<const cplx> values) {
  if (values.size() != grid.n()) throw Error(ErrorCode::DimMismatch, "spectral_derivative size");
  const std::size_t n = grid.n();
  Fft fft(n);
  auto buf = fft.data();
  std::copy(values.begin(), values.end(), buf.begin());
  fft.forward();
  for (std::size_t q = 0; q < n; ++q) buf[q] *= kI * grid.k_fft(q) / static_cast<double>(n);
  fft.backward();
  return {buf.begin(), buf.end()};
}

std::vector<cplx> apply_momentum(const GridWavefunction& psi) {
  auto d = spectral_derivative(psi.grid, psi.amp);
  for (auto& v : d) v *= -kI * psi.hbar;
  return d;
}

std::vector<cplx> apply_position(const GridWavefunction& psi) {
  std::vector<cplx> out(psi.amp.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = psi.grid.x(i) * psi.amp[i];
  return out;
}

MomentumRoutes expectation_p_routes(const GridWavefunction& psi) {
  MomentumRoutes r;
  r.momentum_space = expectation_p(psi);
  const auto p_psi = apply_momentum(psi);
  cplx s{};
  for (std::size_t i = 0; i < p_psi.size(); ++i) s += std::conj(psi.amp[i]) * p_psi[i];
  r.position_space = (s * psi.grid.dx()).real();
  return r;
}

Uncertainties uncertainties(const GridWavefunction& psi) {
  require_normalized(psi);
  const double dx = psi.grid.dx();
  const double mx = expectation_x(psi);
  double vx = 0.0;
  for (std::size_t i = 0; i < psi.grid.n(); ++i) {
    const double u = psi.grid.x(i) - mx;
    vx += u * u * std::norm(psi.amp[i]);
  }
  vx *= dx;

  const auto phi = to_momentum(psi);
  double mp = 0.0;
  for (std::size_t j = 0; j < phi.amp.size(); ++j) mp += phi.p(j) * std::norm(phi.amp[j]);
  mp *= phi.dp();
  double vp = 0.0;
  for (std::size_t j = 0; j < phi.amp.size(); ++j) {
    const double u = phi.p(j) - mp;
    vp += u * u * std::norm(phi.amp[j]);
  }
  vp *= phi.dp();
  return {std::sqrt(vx), std::sqrt(vp)};
}

bool support_margin_ok(const GridWavefunction& psi, double fraction, double threshold) {
  const std::size_t n = psi.grid.n();
  const auto edge = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
  for (std::size_t i = 0; i < edge && i < n; ++i) {
    if (std::abs(psi.amp[i]) >= threshold || std::abs(psi.amp[n - 1 - i]) >= threshold) return false;
  }
  return true;
}

namespace {

// Normalized Hermite functions h_0..h_k at ξ via the three-term recurrence.
double hermite_function(int k, double xi) {
  double prev = 0.0;
  double cur = std::pow(kPi, -0.25) * std::exp(-0.5 * xi * xi);
  for (int m = 0; m < k; ++m) {
    const double next = std::sqrt(2.0 / (m + 1)) * xi * cur - std::sqrt(static_cast<double>(m) / (m + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

}  // namespace

GridWavefunction hermite_basis(const Grid1D& grid, int k, double center, double length, double mass,
                               double hbar) {
  if (k < 0 || k > 20) throw Error(ErrorCode::InvalidArgument, "Hermite index must be in [0, 20]");
  if (!(length > 0.0)) throw Error(ErrorCode::InvalidArgument, "Hermite length scale must be positive");
  const double scale = 1.0 / std::sqrt(length);
  const double left = scale * hermite_function(k, (grid.x_min() - center) / length);
  const double right = scale * hermite_function(k, (grid.x_last() - center) / length);
  if (std::abs(left) >= 1e-12 || std::abs(right) >= 1e-12) {
    throw Error(ErrorCode::GridTooNarrow, "Hermite function of index " + std::to_string(k) +
                                              " does not decay below 1e-12 at the grid edge");
  }
  std::vector<cplx> amp(grid.n());
  for (std::size_t i = 0; i < grid.n(); ++i) amp[i] = scale * hermite_function(k, (grid.x(i) - center) / length);
  return GridWavefunction(grid, std::move(amp), mass, hbar);
}

}  // namespace qwb
