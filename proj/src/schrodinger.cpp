#include "qwb/schrodinger.hpp"

#include <algorithm>
#include <cmath>

#include "qwb/fft.hpp"

namespace qwb {

Potential Potential::zero(const Grid1D& grid) {
  return {std::vector<double>(grid.n(), 0.0), std::vector<double>(grid.n(), 0.0), std::monostate{}};
}

Potential Potential::harmonic(const Grid1D& grid, double mass, double omega, double center) {
  Potential v{std::vector<double>(grid.n()), std::vector<double>(grid.n()), HarmonicTag{omega, center}};
  const double k = mass * omega * omega;
  for (std::size_t i = 0; i < grid.n(); ++i) {
    const double u = grid.x(i) - center;
    v.samples[i] = 0.5 * k * u * u;
    v.gradient[i] = k * u;
  }
  return v;
}

Potential Potential::linear(const Grid1D& grid, double force) {
  Potential v{std::vector<double>(grid.n()), std::vector<double>(grid.n(), force), LinearTag{force}};
  for (std::size_t i = 0; i < grid.n(); ++i) v.samples[i] = force * grid.x(i);
  return v;
}

Potential Potential::from_samples(const Grid1D& grid, std::vector<double> samples) {
  if (samples.size() != grid.n()) throw Error(ErrorCode::DimMismatch, "potential sample count");
  for (double s : samples) {
    if (!std::isfinite(s)) throw Error(ErrorCode::InvalidArgument, "potential must be finite");
  }
  const std::size_t n = grid.n();
  const double h = grid.dx();
  std::vector<double> grad(n);
  grad[0] = (samples[1] - samples[0]) / h;
  grad[n - 1] = (samples[n - 1] - samples[n - 2]) / h;
  for (std::size_t i = 1; i + 1 < n; ++i) grad[i] = (samples[i + 1] - samples[i - 1]) / (2.0 * h);
  return {std::move(samples), std::move(grad), std::monostate{}};
}

double Potential::max_abs() const {
  double m = 0.0;
  for (double s : samples) m = std::max(m, std::abs(s));
  return m;
}

double max_kinetic_energy(const Grid1D& grid, double mass, double hbar) {
  const double p_max = kPi * hbar / grid.dx();
  return p_max * p_max / (2.0 * mass);
}

double energy(const GridWavefunction& psi, const Potential& v) {
  if (v.samples.size() != psi.grid.n()) throw Error(ErrorCode::DimMismatch, "potential/grid size");
  const auto phi = to_momentum(psi);
  double kinetic = 0.0;
  for (std::size_t j = 0; j < phi.amp.size(); ++j) {
    const double p = phi.p(j);
    kinetic += p * p * std::norm(phi.amp[j]);
  }
  kinetic *= phi.dp() / (2.0 * psi.mass);
  double potential = 0.0;
  for (std::size_t i = 0; i < psi.amp.size(); ++i) potential += v.samples[i] * std::norm(psi.amp[i]);
  potential *= psi.grid.dx();
  return kinetic + potential;
}

namespace {

void record(TrajectoryLog& log, double t, const GridWavefunction& psi, const Potential& v) {
  if (!support_margin_ok(psi)) {
    throw Error(ErrorCode::PacketNearBoundary, "support margin broken at t = " + std::to_string(t));
  }
  log.times.push_back(t);
  log.norm.push_back(psi.norm2());
  log.mean_x.push_back(expectation_x(psi));
  log.mean_p.push_back(expectation_p(psi));
  log.energy.push_back(energy(psi, v));
  double g = 0.0;
  for (std::size_t i = 0; i < psi.amp.size(); ++i) g += v.gradient[i] * std::norm(psi.amp[i]);
  log.mean_grad_v.push_back(g * psi.grid.dx());
}

}  // namespace

Evolution split_step_evolve(const GridWavefunction& psi0, const Potential& v, double dt, int steps,
                            int record_every) {
  const auto& grid = psi0.grid;
  const std::size_t n = grid.n();
  if (v.samples.size() != n) throw Error(ErrorCode::DimMismatch, "potential/grid size");
  if (steps < 0 || record_every < 1 || !(dt > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "need dt > 0, steps >= 0, record_every >= 1");
  }
  const double hbar = psi0.hbar;
  if (dt * v.max_abs() / hbar >= 0.5 || dt * max_kinetic_energy(grid, psi0.mass, hbar) / hbar >= 0.5) {
    throw Error(ErrorCode::StabilityViolation, "time step too large for the potential or grid");
  }

  std::vector<cplx> half_kick(n), drift(n);
  for (std::size_t i = 0; i < n; ++i) half_kick[i] = std::polar(1.0, -v.samples[i] * dt / (2.0 * hbar));
  for (std::size_t q = 0; q < n; ++q) {
    const double p = hbar * grid.k_fft(q);
    drift[q] = std::polar(1.0, -p * p * dt / (2.0 * psi0.mass * hbar)) / static_cast<double>(n);
  }

  Evolution out{psi0, {}};
  record(out.log, 0.0, out.psi, v);

  Fft fft(n);
  auto buf = fft.data();
  std::copy(psi0.amp.begin(), psi0.amp.end(), buf.begin());
  for (int s = 1; s <= steps; ++s) {
    for (std::size_t i = 0; i < n; ++i) buf[i] *= half_kick[i];
    fft.forward();
    for (std::size_t q = 0; q < n; ++q) buf[q] *= drift[q];
    fft.backward();
    for (std::size_t i = 0; i < n; ++i) buf[i] *= half_kick[i];
    if (s % record_every == 0 || s == steps) {
      std::copy(buf.begin(), buf.end(), out.psi.amp.begin());
      record(out.log, s * dt, out.psi, v);
    }
  }
  std::copy(buf.begin(), buf.end(), out.psi.amp.begin());
  return out;
}

GridWavefunction free_evolve_exact(const GridWavefunction& psi, double t) {
  if (!psi.is_normalized()) throw Error(ErrorCode::NotNormalized, "free_evolve_exact needs a normalized state");
  auto phi = to_momentum(psi);
  for (std::size_t j = 0; j < phi.amp.size(); ++j) {
    const double p = phi.p(j);
    phi.amp[j] *= std::polar(1.0, -p * p * t / (2.0 * psi.mass * psi.hbar));
  }
  return from_momentum(phi);
}

double ehrenfest_residual(const TrajectoryLog& log) {
  if (log.size() < 5) throw Error(ErrorCode::TooFewSamples, "Ehrenfest check needs at least 5 samples");
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < log.size(); ++i) {
    const double dpdt = (log.mean_p[i + 1] - log.mean_p[i - 1]) / (log.times[i + 1] - log.times[i - 1]);
    worst = std::max(worst, std::abs(dpdt + log.mean_grad_v[i]));
  }
  return worst;
}

}  // namespace qwb
