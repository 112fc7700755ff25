#pragma once

// Two-slit experiment on a periodic 2D grid: a Gaussian packet moving along +x
// meets an opaque plate (ψ forced to zero on plate cells) pierced by one or two
// slits; the time-integrated probability flux through a screen column gives
// the impact histogram I(y). Outflow edges carry a quadratic absorbing layer.

#include <cstddef>
#include <vector>

#include "qwb/grid.hpp"

namespace qwb {

struct SlitScreenConfig {
  std::size_t nx = 512;
  std::size_t ny = 256;
  double dx = 1.0;
  double dy = 1.0;
  double mass = 1.0;
  double hbar = 1.0;

  double barrier_x = -160.0;
  double barrier_thickness = 3.0;
  double slit1_y = 7.5;
  double slit2_y = -7.5;
  double slit_width = 4.0;
  double screen_x = -112.0;

  double packet_x0 = -186.0;
  double packet_y0 = 0.0;
  double packet_p0 = 0.8 * kPi;
  double packet_sigma_x = 4.0;
  double packet_sigma_y = 17.0;

  double absorber_strength = 1.5;
  double absorber_fraction = 0.08;

  /// 0 selects 0.49 ħ / max(E_kin,max, max|V|).
  double dt = 0.0;
  double max_time = 150.0;
  /// After the classical arrival time, stop once the flux accumulated over the last 10% of elapsed time is below
  /// this fraction of the total.
  double saturation_tol = 2e-2;

  Grid1D x_grid() const;
  Grid1D y_grid() const;

  /// Throws ConfigError naming the first violated constraint.
  void validate() const;
  /// 2πħ L_s / (p0 d), with L_s the plate-to-screen distance and d the slit separation.
  double predicted_fringe_spacing() const;
  /// Half-width of the y band outside the absorbing layer.
  double interior_half_width() const;
};

enum class SlitMode { Both, Slit1, Slit2 };

struct ScreenPattern {
  std::vector<double> y;
  std::vector<double> intensity;  // normalized: Σ I dy = 1
  std::vector<double> raw;        // ∫ J_x dt per y
  double transmitted = 0.0;       // Σ raw dy
  double final_time = 0.0;
  int steps = 0;
  double dt = 0.0;
};

/// Throws StabilityViolation when an explicit dt breaks the guard and
/// NoTransmission when less than 1e-6 of the norm reaches the screen.
ScreenPattern double_slit_run(const SlitScreenConfig& cfg, SlitMode mode);

// Pattern analysis ---------------------------------------------------------

/// Local maxima (parabolically refined) with |y| <= y_limit and I >= rel_threshold * max I.
std::vector<double> interior_maxima(const ScreenPattern& p, double y_limit, double rel_threshold = 0.02);

/// Mean spacing of up to `count` maxima nearest y = 0.
double mean_fringe_spacing(const std::vector<double>& maxima, std::size_t count = 5);

/// (I_max - I_min)/(I_max + I_min) for the central maximum and its neighbouring minima.
double central_visibility(const ScreenPattern& p);

/// Σ|I_both - (I_1 + I_2)| / Σ I_both on the raw fluxes.
double relative_l1_difference(const ScreenPattern& both, const ScreenPattern& slit1, const ScreenPattern& slit2);

/// max_j |I(y_j) - I(-y_j)| / max I
double mirror_asymmetry(const ScreenPattern& p);

}  // namespace qwb
