#include "qwb/double_slit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qwb/fft.hpp"

namespace qwb {

namespace {

// Plain complex product; avoids the NaN-recovery call the library operator emits.
inline cplx mul(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

[[noreturn]] void bad_config(const std::string& what) { throw Error(ErrorCode::ConfigError, what); }

bool in_slit(double y, double center, double width, double dy) {
  return std::abs(y - center) <= 0.5 * width + 1e-9 * dy;
}

// Depth-squared profile of the absorbing layer: 0 in the interior, 1 at the edge.
double layer_profile(double s, double lo, double hi, double width) {
  double d = 0.0;
  if (s < lo + width) d = (lo + width - s) / width;
  if (s > hi - width) d = std::max(d, (s - (hi - width)) / width);
  return d * d;
}

}  // namespace

Grid1D SlitScreenConfig::x_grid() const { return Grid1D(-0.5 * dx * static_cast<double>(nx), dx, nx); }
Grid1D SlitScreenConfig::y_grid() const { return Grid1D(-0.5 * dy * static_cast<double>(ny), dy, ny); }

double SlitScreenConfig::interior_half_width() const {
  const auto gy = y_grid();
  return 0.5 * gy.length() - absorber_fraction * gy.length();
}

double SlitScreenConfig::predicted_fringe_spacing() const {
  return 2.0 * kPi * hbar * (screen_x - barrier_x) / (packet_p0 * std::abs(slit1_y - slit2_y));
}

void SlitScreenConfig::validate() const {
  Grid1D gx = [&] {
    try {
      return x_grid();
    } catch (const Error& e) {
      bad_config(std::string("x grid: ") + e.what());
    }
  }();
  Grid1D gy = [&] {
    try {
      return y_grid();
    } catch (const Error& e) {
      bad_config(std::string("y grid: ") + e.what());
    }
  }();
  if (!(mass > 0.0) || !(hbar > 0.0)) bad_config("mass and hbar must be positive");
  if (!(slit_width >= 4.0 * dy)) bad_config("slit width must be at least 4 dy");
  if (std::abs(slit1_y - slit2_y) <= slit_width) bad_config("slits overlap");
  if (!(barrier_thickness > 0.0)) bad_config("barrier thickness must be positive");
  if (!(screen_x > barrier_x + 0.5 * barrier_thickness)) bad_config("screen must lie beyond the barrier");
  if (!(packet_p0 > 0.0)) bad_config("incident momentum must point along +x");
  if (!(packet_sigma_x >= 4.0 * dx) || !(packet_sigma_y >= 4.0 * dy)) bad_config("packet narrower than 4 cells");
  if (!(absorber_fraction > 0.0 && absorber_fraction < 0.25)) bad_config("absorber fraction must be in (0, 0.25)");
  if (!(absorber_strength >= 0.0)) bad_config("absorber strength must be non-negative");
  if (!(dt >= 0.0) || !(max_time > 0.0) || !(saturation_tol > 0.0)) bad_config("bad time controls");

  const double wx = absorber_fraction * gx.length();
  const double wy = absorber_fraction * gy.length();
  const double x_lo = gx.x_min() + wx;
  const double x_hi = gx.x_min() + gx.length() - wx;
  if (packet_x0 - 6.0 * packet_sigma_x < x_lo) bad_config("packet overlaps the left absorber");
  if (packet_x0 + 6.0 * packet_sigma_x >= barrier_x - 0.5 * barrier_thickness) {
    bad_config("packet must start clear of the barrier");
  }
  const double y_half = 0.5 * gy.length() - wy;
  if (std::abs(packet_y0) + 6.0 * packet_sigma_y > y_half) bad_config("packet overlaps the y absorber");
  if (std::max(std::abs(slit1_y), std::abs(slit2_y)) + 0.5 * slit_width > y_half) {
    bad_config("slits overlap the y absorber");
  }
  if (!(screen_x < x_hi)) bad_config("screen lies inside the right absorber");
  const double u = (screen_x - gx.x_min()) / dx;
  if (std::abs(u - std::round(u)) > 1e-9) bad_config("screen must sit on a grid column");
}

ScreenPattern double_slit_run(const SlitScreenConfig& cfg, SlitMode mode) {
  cfg.validate();
  const auto gx = cfg.x_grid();
  const auto gy = cfg.y_grid();
  const std::size_t nx = gx.n(), ny = gy.n(), n = nx * ny;
  const double hbar = cfg.hbar, mass = cfg.mass;

  const double kx_max = kPi / cfg.dx, ky_max = kPi / cfg.dy;
  const double e_kin_max = hbar * hbar * (kx_max * kx_max + ky_max * ky_max) / (2.0 * mass);
  const double e_max = std::max(e_kin_max, cfg.absorber_strength);
  double dt = cfg.dt;
  if (dt == 0.0) dt = 0.49 * hbar / e_max;
  if (dt * e_kin_max / hbar >= 0.5 || dt * cfg.absorber_strength / hbar >= 0.5) {
    throw Error(ErrorCode::StabilityViolation, "time step too large for the 2D grid");
  }

  // Half-step position factor: absorber damping, zero on opaque plate cells.
  const double wx = cfg.absorber_fraction * gx.length();
  const double wy = cfg.absorber_fraction * gy.length();
  const bool open1 = mode != SlitMode::Slit2;
  const bool open2 = mode != SlitMode::Slit1;
  std::vector<double> half(n);
  for (std::size_t i = 0; i < nx; ++i) {
    const double x = gx.x(i);
    const double px = layer_profile(x, gx.x_min(), gx.x_min() + gx.length(), wx);
    const bool plate = std::abs(x - cfg.barrier_x) <= 0.5 * cfg.barrier_thickness;
    for (std::size_t j = 0; j < ny; ++j) {
      const double y = gy.x(j);
      if (plate) {
        const bool open = (open1 && in_slit(y, cfg.slit1_y, cfg.slit_width, cfg.dy)) ||
                          (open2 && in_slit(y, cfg.slit2_y, cfg.slit_width, cfg.dy));
        if (!open) {
          half[i * ny + j] = 0.0;
          continue;
        }
      }
      const double py = layer_profile(y, gy.x_min(), gy.x_min() + gy.length(), wy);
      const double w = cfg.absorber_strength * std::max(px, py);
      half[i * ny + j] = std::exp(-0.5 * w * dt / hbar);
    }
  }

  std::vector<cplx> drift(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t qx = 0; qx < nx; ++qx) {
    const double kx = gx.k_fft(qx);
    for (std::size_t qy = 0; qy < ny; ++qy) {
      const double ky = gy.k_fft(qy);
      drift[qx * ny + qy] = std::polar(inv_n, -hbar * (kx * kx + ky * ky) * dt / (2.0 * mass));
    }
  }

  // ∂ψ/∂x at the screen column, read off the 2D spectrum.
  const auto is = static_cast<std::size_t>(std::llround((cfg.screen_x - gx.x_min()) / cfg.dx));
  std::vector<cplx> screen_twiddle(nx);
  for (std::size_t qx = 0; qx < nx; ++qx) {
    const double phase = 2.0 * kPi * static_cast<double>(qx * is % nx) / static_cast<double>(nx);
    screen_twiddle[qx] = kI * gx.k_fft(qx) * std::polar(1.0, phase);
  }

  Fft fft(nx, ny);
  Fft column(ny);
  auto buf = fft.data();
  auto col = column.data();
  {
    double norm = 0.0;
    for (std::size_t i = 0; i < nx; ++i) {
      const double ux = gx.x(i) - cfg.packet_x0;
      const cplx carrier = std::polar(1.0, cfg.packet_p0 * gx.x(i) / hbar);
      for (std::size_t j = 0; j < ny; ++j) {
        const double uy = gy.x(j) - cfg.packet_y0;
        const double env = std::exp(-ux * ux / (4.0 * cfg.packet_sigma_x * cfg.packet_sigma_x) -
                                    uy * uy / (4.0 * cfg.packet_sigma_y * cfg.packet_sigma_y));
        buf[i * ny + j] = env * carrier;
        norm += env * env;
      }
    }
    const double s = 1.0 / std::sqrt(norm * cfg.dx * cfg.dy);
    for (auto& v : buf) v *= s;
  }

  ScreenPattern out;
  out.dt = dt;
  out.y.resize(ny);
  for (std::size_t j = 0; j < ny; ++j) out.y[j] = gy.x(j);
  out.raw.assign(ny, 0.0);
  std::vector<cplx> psi_screen(ny);
  std::vector<double> history{0.0};  // transmitted total after each step

  const double flux_scale = hbar / mass * dt / static_cast<double>(n);
  const int max_steps = static_cast<int>(std::ceil(cfg.max_time / dt));
  const double arrival = (cfg.screen_x - cfg.packet_x0) * mass / cfg.packet_p0;
  int s = 0;
  double total = 0.0;
  while (s < max_steps) {
    for (std::size_t k = 0; k < n; ++k) buf[k] *= half[k];
    for (std::size_t j = 0; j < ny; ++j) psi_screen[j] = buf[is * ny + j];
    fft.forward();

    std::fill(col.begin(), col.end(), cplx{});
    for (std::size_t qx = 0; qx < nx; ++qx) {
      const cplx tw = screen_twiddle[qx];
      const cplx* row = &buf[qx * ny];
      for (std::size_t qy = 0; qy < ny; ++qy) col[qy] += mul(tw, row[qy]);
    }
    column.backward();
    double step_flux = 0.0;
    for (std::size_t j = 0; j < ny; ++j) {
      const double jx = flux_scale * (psi_screen[j].real() * col[j].imag() - psi_screen[j].imag() * col[j].real());
      out.raw[j] += jx;
      step_flux += jx;
    }
    total += step_flux * cfg.dy;

    for (std::size_t k = 0; k < n; ++k) buf[k] = mul(buf[k], drift[k]);
    fft.backward();
    for (std::size_t k = 0; k < n; ++k) buf[k] *= half[k];
    ++s;
    history.push_back(total);

    const auto back = static_cast<std::size_t>(s / 10);
    if (back > 0 && s * dt > arrival && total - history[history.size() - 1 - back] < cfg.saturation_tol * total) break;
  }

  out.steps = s;
  out.final_time = s * dt;
  out.transmitted = 0.0;
  for (double r : out.raw) out.transmitted += r * cfg.dy;
  if (!(out.transmitted >= 1e-6)) throw Error(ErrorCode::NoTransmission, "transmitted norm below 1e-6");
  out.intensity.resize(ny);
  for (std::size_t j = 0; j < ny; ++j) out.intensity[j] = out.raw[j] / out.transmitted;
  return out;
}

std::vector<double> interior_maxima(const ScreenPattern& p, double y_limit, double rel_threshold) {
  const std::size_t n = p.intensity.size();
  std::vector<double> maxima;
  if (n < 3) return maxima;
  const double peak = *std::max_element(p.intensity.begin(), p.intensity.end());
  const double h = p.y[1] - p.y[0];
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double a = p.intensity[j - 1], b = p.intensity[j], c = p.intensity[j + 1];
    if (!(b > a && b >= c) || b < rel_threshold * peak || std::abs(p.y[j]) > y_limit) continue;
    const double denom = a - 2.0 * b + c;
    const double shift = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
    maxima.push_back(p.y[j] + shift * h);
  }
  return maxima;
}

double mean_fringe_spacing(const std::vector<double>& maxima, std::size_t count) {
  if (maxima.size() < 2 || count < 2) return 0.0;
  std::vector<double> near = maxima;
  std::sort(near.begin(), near.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  near.resize(std::min(count, near.size()));
  std::sort(near.begin(), near.end());
  return (near.back() - near.front()) / static_cast<double>(near.size() - 1);
}

double central_visibility(const ScreenPattern& p) {
  const auto& I = p.intensity;
  const std::size_t n = I.size();
  if (n < 3) return 0.0;
  std::size_t c = 0;
  for (std::size_t j = 1; j < n; ++j) {
    if (std::abs(p.y[j]) < std::abs(p.y[c])) c = j;
  }
  // Climb to the local maximum nearest the centre, then descend each side to a minimum.
  std::size_t m = c;
  while (m + 1 < n && I[m + 1] > I[m]) ++m;
  while (m > 0 && I[m - 1] > I[m]) --m;
  std::size_t l = m, r = m;
  while (l > 0 && I[l - 1] <= I[l]) --l;
  while (r + 1 < n && I[r + 1] <= I[r]) ++r;
  const double i_max = I[m];
  const double i_min = 0.5 * (I[l] + I[r]);
  return i_max + i_min > 0.0 ? (i_max - i_min) / (i_max + i_min) : 0.0;
}

double relative_l1_difference(const ScreenPattern& both, const ScreenPattern& slit1, const ScreenPattern& slit2) {
  const std::size_t n = both.raw.size();
  if (slit1.raw.size() != n || slit2.raw.size() != n) throw Error(ErrorCode::DimMismatch, "screen sizes differ");
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    num += std::abs(both.raw[j] - slit1.raw[j] - slit2.raw[j]);
    den += std::abs(both.raw[j]);
  }
  return num / den;
}

double mirror_asymmetry(const ScreenPattern& p) {
  const std::size_t n = p.intensity.size();
  double peak = 0.0, worst = 0.0;
  for (double v : p.intensity) peak = std::max(peak, std::abs(v));
  for (std::size_t j = 1; j < n; ++j) worst = std::max(worst, std::abs(p.intensity[j] - p.intensity[n - j]));
  return peak > 0.0 ? worst / peak : 0.0;
}

}  // namespace qwb
