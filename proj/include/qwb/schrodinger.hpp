#pragma once

#include <variant>
#include <vector>

#include "qwb/grid.hpp"

namespace qwb {

struct HarmonicTag {
  double omega = 1.0;
  double center = 0.0;
};

/// V(x) = F x
struct LinearTag {
  double force = 0.0;
};

/// Time-independent real potential sampled on a grid, with its gradient.
struct Potential {
  std::vector<double> samples;
  std::vector<double> gradient;
  std::variant<std::monostate, HarmonicTag, LinearTag> tag;

  static Potential zero(const Grid1D& grid);
  static Potential harmonic(const Grid1D& grid, double mass, double omega, double center = 0.0);
  static Potential linear(const Grid1D& grid, double force);
  /// Gradient from centered differences (one-sided at the ends).
  static Potential from_samples(const Grid1D& grid, std::vector<double> samples);

  double max_abs() const;
};

struct TrajectoryLog {
  std::vector<double> times;
  std::vector<double> mean_x;
  std::vector<double> mean_p;
  std::vector<double> norm;
  std::vector<double> energy;
  std::vector<double> mean_grad_v;  // <∂V/∂x>

  std::size_t size() const noexcept { return times.size(); }
};

struct Evolution {
  GridWavefunction psi;
  TrajectoryLog log;
};

/// Largest kinetic energy representable on the grid, (π ħ/dx)²/(2m).
double max_kinetic_energy(const Grid1D& grid, double mass, double hbar);

/// Strang split-step propagation, sampling the log every `record_every` steps
/// (and always at t = 0 and at the final step).
/// Throws StabilityViolation if dt max|V|/ħ or dt E_kin,max/ħ reaches 0.5 and
/// PacketNearBoundary if the support margin breaks at any recorded time.
Evolution split_step_evolve(const GridWavefunction& psi, const Potential& v, double dt, int steps,
                            int record_every = 1);

/// Exact free propagation: φ(p) picks up e^{-ip²t/(2mħ)}.
GridWavefunction free_evolve_exact(const GridWavefunction& psi, double t);

/// <ψ, (p̂²/2m + V) ψ> with the kinetic term evaluated in momentum space.
double energy(const GridWavefunction& psi, const Potential& v);

/// max_t |d<p>/dt + <∂V/∂x>| from centered differences over interior samples.
/// Throws TooFewSamples below 5 log entries.
double ehrenfest_residual(const TrajectoryLog& log);

}  // namespace qwb
