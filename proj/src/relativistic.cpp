#include "qwb/relativistic.hpp"

#include <cmath>

#include "qwb/fft.hpp"
#include "qwb/hilbert.hpp"
#include "qwb/rng.hpp"

namespace qwb {

double kg_dispersion(double k, double mass, double hbar) {
  const double b = mass / hbar;
  return std::sqrt(k * k + b * b);
}

KGState::KGState(Grid1D g, std::vector<cplx> p1, std::vector<cplx> p2, double m, double h)
    : grid(g), phi1(std::move(p1)), phi2(std::move(p2)), mass(m), hbar(h) {
  if (phi1.size() != grid.n() || phi2.size() != grid.n()) throw Error(ErrorCode::DimMismatch, "KG component size");
  if (!(mass > 0.0) || !(hbar > 0.0)) throw Error(ErrorCode::InvalidArgument, "mass and hbar must be positive");
}

KGState KGState::from_field(Grid1D g, const std::vector<cplx>& psi, const std::vector<cplx>& psi_dot, double m,
                            double h) {
  if (psi.size() != g.n() || psi_dot.size() != g.n()) throw Error(ErrorCode::DimMismatch, "KG field size");
  std::vector<cplx> p1(g.n()), p2(g.n());
  const cplx c = kI * h / m;
  for (std::size_t i = 0; i < g.n(); ++i) {
    p1[i] = psi[i] + c * psi_dot[i];
    p2[i] = psi[i] - c * psi_dot[i];
  }
  return KGState(g, std::move(p1), std::move(p2), m, h);
}

std::vector<cplx> KGState::psi() const {
  std::vector<cplx> out(phi1.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * (phi1[i] + phi2[i]);
  return out;
}

std::vector<cplx> KGState::psi_dot() const {
  std::vector<cplx> out(phi1.size());
  const cplx c = -kI * mass / hbar * 0.5;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c * (phi1[i] - phi2[i]);
  return out;
}

namespace {

// Mode block K = [[a+b, a], [-a, -(a+b)]], a = ħk²/2m, b = m/ħ; K² = ω² I.
struct ModeBlock {
  double a, b, omega;
  // Ratio of the minor to the dominant component on either frequency branch.
  double branch_ratio() const { return -a / (omega + a + b); }
};

ModeBlock mode_block(double k, double mass, double hbar) {
  const double a = hbar * k * k / (2.0 * mass);
  const double b = mass / hbar;
  return {a, b, kg_dispersion(k, mass, hbar)};
}

std::vector<cplx> transform(const std::vector<cplx>& v, bool forward) {
  Fft fft(v.size());
  auto buf = fft.data();
  std::copy(v.begin(), v.end(), buf.begin());
  if (forward) {
    fft.forward();
  } else {
    fft.backward();
    for (auto& x : buf) x /= static_cast<double>(v.size());
  }
  return {buf.begin(), buf.end()};
}

KGState branch_packet(const Grid1D& grid, double x0, double p0, double sigma, double mass, double hbar,
                      bool positive) {
  const auto psi0 = gaussian_packet(grid, x0, p0, sigma, mass, hbar);
  std::vector<cplx> major(grid.n());
  for (std::size_t i = 0; i < grid.n(); ++i) major[i] = 2.0 * psi0.amp[i];
  auto hat = transform(major, true);
  std::vector<cplx> minor_hat(grid.n());
  for (std::size_t q = 0; q < grid.n(); ++q) minor_hat[q] = mode_block(grid.k_fft(q), mass, hbar).branch_ratio() * hat[q];
  auto minor = transform(minor_hat, false);
  KGState s = positive ? KGState(grid, std::move(major), std::move(minor), mass, hbar)
                       : KGState(grid, std::move(minor), std::move(major), mass, hbar);
  const double scale = 1.0 / std::sqrt(std::abs(kg_charge(s)));
  for (auto& v : s.phi1) v *= scale;
  for (auto& v : s.phi2) v *= scale;
  return s;
}

}  // namespace

KGState kg_positive_packet(const Grid1D& grid, double x0, double p0, double sigma, double mass, double hbar) {
  return branch_packet(grid, x0, p0, sigma, mass, hbar, true);
}

KGState kg_negative_packet(const Grid1D& grid, double x0, double p0, double sigma, double mass, double hbar) {
  return branch_packet(grid, x0, p0, sigma, mass, hbar, false);
}

KGState kg_evolve(const KGState& state, double dt, int steps, KGMethod method) {
  if (steps < 0) throw Error(ErrorCode::InvalidArgument, "steps must be non-negative");
  const auto& g = state.grid;
  const std::size_t n = g.n();
  if (method == KGMethod::RK4) {
    const double k_max = kPi / g.dx();
    if (!(dt * (k_max * k_max * state.hbar / (2.0 * state.mass) + 2.0 * state.mass / state.hbar) < 0.5)) {
      throw Error(ErrorCode::StabilityViolation, "RK4 time step too large for the KG system");
    }
  }
  auto h1 = transform(state.phi1, true);
  auto h2 = transform(state.phi2, true);
  for (std::size_t q = 0; q < n; ++q) {
    const auto m = mode_block(g.k_fft(q), state.mass, state.hbar);
    const double ab = m.a + m.b;
    cplx u = h1[q], v = h2[q];
    if (method == KGMethod::Exact) {
      const double t = dt * steps;
      const double c = std::cos(m.omega * t);
      const double s = std::sin(m.omega * t) / m.omega;
      const cplx nu = c * u - kI * s * (ab * u + m.a * v);
      const cplx nv = c * v - kI * s * (-m.a * u - ab * v);
      u = nu;
      v = nv;
    } else {
      auto rhs = [&](cplx x, cplx y, cplx& dx, cplx& dy) {
        dx = -kI * (ab * x + m.a * y);
        dy = -kI * (-m.a * x - ab * y);
      };
      for (int s = 0; s < steps; ++s) {
        cplx k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
        rhs(u, v, k1u, k1v);
        rhs(u + 0.5 * dt * k1u, v + 0.5 * dt * k1v, k2u, k2v);
        rhs(u + 0.5 * dt * k2u, v + 0.5 * dt * k2v, k3u, k3v);
        rhs(u + dt * k3u, v + dt * k3v, k4u, k4v);
        u += dt / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      }
    }
    h1[q] = u;
    h2[q] = v;
  }
  return KGState(g, transform(h1, false), transform(h2, false), state.mass, state.hbar);
}

std::vector<double> kg_density(const KGState& s) {
  std::vector<double> p(s.phi1.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = 0.25 * (std::norm(s.phi1[i]) - std::norm(s.phi2[i]));
  return p;
}

double kg_charge(const KGState& s) {
  double q = 0.0;
  for (double v : kg_density(s)) q += v;
  return q * s.grid.dx();
}

// ---------------------------------------------------------------------------

GammaSet build_gammas() {
  const cplx i = kI;
  std::array<CMatrix, 3> sigma;
  sigma[0] = CMatrix(2, 2);
  sigma[0] << 0, 1, 1, 0;
  sigma[1] = CMatrix(2, 2);
  sigma[1] << 0, -i, i, 0;
  sigma[2] = CMatrix(2, 2);
  sigma[2] << 1, 0, 0, -1;
  const CMatrix id = CMatrix::Identity(2, 2);
  GammaSet gs;
  for (int j = 0; j < 3; ++j) {
    CMatrix g = CMatrix::Zero(4, 4);
    g.block(0, 2, 2, 2) = sigma[j];
    g.block(2, 0, 2, 2) = -sigma[j];
    gs.g[j] = g;
  }
  gs.g[3] = CMatrix::Zero(4, 4);
  gs.g[3].block(0, 0, 2, 2) = id;
  gs.g[3].block(2, 2, 2, 2) = -id;
  return gs;
}

CMatrix dirac_hamiltonian(const std::array<double, 3>& p, double mass) {
  static const GammaSet gs = build_gammas();
  CMatrix h = mass * gs.beta();
  for (int j = 1; j <= 3; ++j) h += p[static_cast<std::size_t>(j - 1)] * gs.alpha(j);
  return h;
}

double DiracMode::small_component(Eigen::Index col) const { return spinors.col(col).tail(2).norm(); }

DiracMode dirac_mode(double p, double mass) {
  const Observable h(dirac_hamiltonian({p, 0.0, 0.0}, mass));
  const auto& sd = h.spectrum();
  return {p, mass, sd.eigenvalues, sd.eigenvectors};
}

CVector swapped_state(const DiracMode& mode) {
  const CVector u = mode.positive();
  CVector s(4);
  s << u[2], u[3], u[0], u[1];
  return s;
}

double DiracField::norm2() const {
  double s = 0.0;
  for (const auto& c : comp) {
    for (const auto& v : c) s += std::norm(v);
  }
  return s * grid.dx();
}

DiracField dirac_evolve_free(const DiracField& f, double t) {
  const std::size_t n = f.grid.n();
  for (const auto& c : f.comp) {
    if (c.size() != n) throw Error(ErrorCode::DimMismatch, "Dirac component size");
  }
  std::array<std::vector<cplx>, 4> hat;
  for (std::size_t c = 0; c < 4; ++c) hat[c] = transform(f.comp[c], true);
  for (std::size_t q = 0; q < n; ++q) {
    const double p = f.hbar * f.grid.k_fft(q);
    const Eigen::Matrix4cd h = dirac_hamiltonian({p, 0.0, 0.0}, f.mass);
    const double e = std::sqrt(p * p + f.mass * f.mass);
    Eigen::Matrix4cd u;
    if (e == 0.0) {
      u.setIdentity();
    } else {
      u = std::cos(e * t / f.hbar) * Eigen::Matrix4cd::Identity() - kI * (std::sin(e * t / f.hbar) / e) * h;
    }
    Eigen::Vector4cd v(hat[0][q], hat[1][q], hat[2][q], hat[3][q]);
    v = u * v;
    for (std::size_t c = 0; c < 4; ++c) hat[c][q] = v[static_cast<Eigen::Index>(c)];
  }
  DiracField out = f;
  for (std::size_t c = 0; c < 4; ++c) out.comp[c] = transform(hat[c], false);
  return out;
}

namespace {

double int_wavenumber(std::size_t q, std::size_t n) {
  return q < n / 2 ? static_cast<double>(q) : static_cast<double>(q) - static_cast<double>(n);
}

cplx ipow(cplx z, int e) {
  cplx r = 1.0;
  for (int i = 0; i < e; ++i) r *= z;
  return r;
}

using Spinor2D = std::array<std::vector<cplx>, 4>;

// Spectral ∂ₓ^a ∂ₜ^b of one component on the periodic [0,2π)² grid.
std::vector<cplx> derivative(Fft& fft, std::size_t n, const std::vector<cplx>& f, int ax, int at) {
  auto buf = fft.data();
  std::copy(f.begin(), f.end(), buf.begin());
  fft.forward();
  const double inv = 1.0 / static_cast<double>(n * n);
  for (std::size_t qx = 0; qx < n; ++qx) {
    const cplx sx = ipow(kI * int_wavenumber(qx, n), ax);
    for (std::size_t qt = 0; qt < n; ++qt) {
      const cplx st = ipow(kI * int_wavenumber(qt, n), at);
      buf[qx * n + qt] *= sx * st * inv;
    }
  }
  fft.backward();
  return {buf.begin(), buf.end()};
}

Spinor2D apply_d(Fft& fft, std::size_t n, const GammaSet& gs, const Spinor2D& psi) {
  std::array<std::vector<cplx>, 4> dx, dt;
  for (std::size_t c = 0; c < 4; ++c) {
    dx[c] = derivative(fft, n, psi[c], 1, 0);
    dt[c] = derivative(fft, n, psi[c], 0, 1);
  }
  Spinor2D out;
  for (auto& c : out) c.assign(n * n, cplx{});
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      const cplx gx = gs.g[0](static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      const cplx gt = gs.g[3](static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      if (gx == cplx{} && gt == cplx{}) continue;
      for (std::size_t k = 0; k < n * n; ++k) out[r][k] += gx * dx[c][k] + gt * dt[c][k];
    }
  }
  return out;
}

}  // namespace

double dirac_square_residual(std::size_t n, const Spinor2D& psi) {
  if (n < 4 || (n & (n - 1)) != 0) throw Error(ErrorCode::InvalidGrid, "grid size must be a power of two >= 4");
  for (const auto& c : psi) {
    if (c.size() != n * n) throw Error(ErrorCode::DimMismatch, "spinor field size");
  }
  static const GammaSet gs = build_gammas();
  Fft fft(n, n);
  const auto d2 = apply_d(fft, n, gs, apply_d(fft, n, gs, psi));
  double num = 0.0, den = 0.0;
  for (std::size_t c = 0; c < 4; ++c) {
    const auto ptt = derivative(fft, n, psi[c], 0, 2);
    const auto pxx = derivative(fft, n, psi[c], 2, 0);
    for (std::size_t k = 0; k < n * n; ++k) {
      num += std::norm(d2[c][k] - (ptt[k] - pxx[k]));
      den += std::norm(psi[c][k]);
    }
  }
  return std::sqrt(num / den);
}

double dirac_square_check(std::size_t n, int n_fields, std::uint64_t seed) {
  if (n < 4 || (n & (n - 1)) != 0) throw Error(ErrorCode::InvalidGrid, "grid size must be a power of two >= 4");
  CounterRng rng(seed);
  Fft fft(n, n);
  const double band = static_cast<double>(n) / 4.0;
  double worst = 0.0;
  for (int f = 0; f < n_fields; ++f) {
    Spinor2D psi;
    for (auto& comp : psi) {
      auto buf = fft.data();
      for (std::size_t qx = 0; qx < n; ++qx) {
        for (std::size_t qt = 0; qt < n; ++qt) {
          const double re = 2.0 * rng.next_uniform() - 1.0;
          const double im = 2.0 * rng.next_uniform() - 1.0;
          const bool keep = std::abs(int_wavenumber(qx, n)) < band && std::abs(int_wavenumber(qt, n)) < band;
          buf[qx * n + qt] = keep ? cplx(re, im) : cplx{};
        }
      }
      fft.backward();
      comp.assign(buf.begin(), buf.end());
    }
    worst = std::max(worst, dirac_square_residual(n, psi));
  }
  return worst;
}

}  // namespace qwb
