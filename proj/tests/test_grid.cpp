#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "qwb/fft.hpp"
#include "qwb/grid.hpp"
#include "qwb/rng.hpp"

using namespace qwb;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no exception");
  return ErrorCode::IoError;
}

GridWavefunction noise_state(const Grid1D& g, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<cplx> a(g.n());
  for (auto& v : a) v = {rng.next_uniform() - 0.5, rng.next_uniform() - 0.5};
  GridWavefunction w(g, std::move(a));
  w.normalize();
  return w;
}

}  // namespace

TEST_CASE("Grid1D") {
  const auto g = Grid1D::symmetric(10.0, 64);
  CHECK(g.n() == 64);
  CHECK(g.dx() == doctest::Approx(20.0 / 64));
  CHECK(g.x(0) == doctest::Approx(-10.0));
  CHECK(g.dp(1.0) == doctest::Approx(2.0 * kPi / 20.0));
  CHECK(g.dp(0.5) == doctest::Approx(kPi / 20.0));
  CHECK(g.p(32, 1.0) == 0.0);

  CHECK(code_of([] { Grid1D(0.0, 1.0, 4); }) == ErrorCode::InvalidGrid);
  CHECK(code_of([] { Grid1D(0.0, 1.0, 48); }) == ErrorCode::InvalidGrid);
  CHECK(code_of([] { Grid1D(0.0, -1.0, 64); }) == ErrorCode::InvalidGrid);
}

TEST_CASE("FFT matches a direct DFT") {
  const std::size_t n = 16;
  Fft f(n);
  std::vector<cplx> x(n), y(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = {std::sin(0.3 * k), std::cos(1.7 * k * k)};
  f.forward(x, y);
  for (std::size_t j = 0; j < n; ++j) {
    cplx s{};
    for (std::size_t k = 0; k < n; ++k) s += x[k] * std::polar(1.0, -2.0 * kPi * j * k / n);
    CHECK(std::abs(s - y[j]) < 1e-12);
  }
  std::vector<cplx> z(n);
  f.backward(y, z);
  for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(z[k] / double(n) - x[k]) < 1e-14);
}

TEST_CASE("gaussian_packet moments") {
  const auto g = Grid1D::symmetric(40.0, 1024);
  const auto psi = gaussian_packet(g, 1.5, 2.0, 2.0);
  CHECK(psi.norm2() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(expectation_x(psi) - 1.5) < 1e-8);
  CHECK(std::abs(expectation_p(psi) - 2.0) < 1e-8);

  // quadrature oracle on |φ(p)|² from direct summation
  const auto phi = oracle::direct_momentum(psi.amp, g.x_min(), g.dx(), 1.0);
  const double dp = g.dp(1.0);
  const double pmin = g.p(0, 1.0);
  CHECK(std::abs(oracle::moment(phi, pmin, dp, [](double p) { return p; }) - 2.0) < 1e-8);
  const double sx = std::sqrt(oracle::moment(psi.amp, g.x_min(), g.dx(), [](double x) { return (x - 1.5) * (x - 1.5); }));
  CHECK(sx == doctest::Approx(2.0).epsilon(1e-6));

  const auto u = uncertainties(psi);
  CHECK(u.sigma_x == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(u.sigma_x * u.sigma_p == doctest::Approx(0.5).epsilon(1e-6));

  const auto centered = gaussian_packet(g, 0.0, 0.0, 1.0);
  CHECK(std::abs(expectation_x(centered)) < 1e-12);

  CHECK(code_of([&] { gaussian_packet(g, 0.0, 0.0, 0.1); }) == ErrorCode::PacketTooNarrow);
  CHECK(code_of([&] { gaussian_packet(g, 35.0, 0.0, 2.0); }) == ErrorCode::PacketNearBoundary);
}

TEST_CASE("to_momentum agrees with direct summation") {
  const auto g = Grid1D::symmetric(12.0, 128);
  const auto psi = gaussian_packet(g, -1.0, 1.3, 1.0, 1.0, 0.7);
  const auto phi = to_momentum(psi);
  const auto ref = oracle::direct_momentum(psi.amp, g.x_min(), g.dx(), 0.7);
  for (std::size_t j = 0; j < g.n(); ++j) CHECK(std::abs(phi.amp[j] - ref[j]) < 1e-12);

  // at p0 = 0 the transform of a centered Gaussian is real and positive
  const auto real_g = to_momentum(gaussian_packet(g, 0.0, 0.0, 1.0));
  for (std::size_t j = 0; j < g.n(); ++j) {
    CHECK(std::abs(real_g.amp[j].imag()) < 1e-12);
    CHECK(real_g.amp[j].real() > -1e-12);
  }
}

TEST_CASE("Fourier round trip and Plancherel") {
  const auto g = Grid1D::symmetric(20.0, 256);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto psi = noise_state(g, seed);
    const auto phi = to_momentum(psi);
    CHECK(std::abs(phi.norm2() - psi.norm2()) <= 1e-12);
    if (seed < 10) {
      const auto back = from_momentum(phi);
      for (std::size_t k = 0; k < g.n(); ++k) CHECK(std::abs(back.amp[k] - psi.amp[k]) <= 1e-12);
    }
  }
}

TEST_CASE("two routes to <p> agree") {
  const auto g = Grid1D::symmetric(30.0, 512);
  for (double p0 : {-2.0, 0.0, 0.5, 3.0}) {
    const auto r = expectation_p_routes(gaussian_packet(g, 2.0, p0, 1.5));
    CHECK(std::abs(r.momentum_space - r.position_space) < 1e-8);
    CHECK(std::abs(r.momentum_space - p0) < 1e-8);
  }
}

TEST_CASE("uncertainty bound on random mixtures") {
  const auto g = Grid1D::symmetric(40.0, 1024);
  CounterRng rng(5);
  for (int k = 0; k < 100; ++k) {
    std::vector<cplx> a(g.n(), cplx{});
    for (int t = 0; t < 3; ++t) {
      const double c = 20.0 * rng.next_uniform() - 10.0, s = 1.0 + 2.0 * rng.next_uniform();
      const double q = 6.0 * rng.next_uniform() - 3.0;
      for (std::size_t i = 0; i < g.n(); ++i) {
        const double u = g.x(i) - c;
        a[i] += std::exp(-u * u / (4 * s * s)) * std::polar(1.0, q * g.x(i) + t);
      }
    }
    GridWavefunction w(g, a);
    w.normalize();
    const auto u = uncertainties(w);
    CHECK(u.sigma_x * u.sigma_p >= 0.5 - 1e-9);
  }
}

TEST_CASE("discrete canonical commutator") {
  const auto g = Grid1D::symmetric(30.0, 512);
  const double hbar = 0.8;
  const auto psi = gaussian_packet(g, 0.5, 1.0, 2.0, 1.0, hbar);
  const auto xpsi = GridWavefunction(g, apply_position(psi), 1.0, hbar);
  const auto pxpsi = apply_momentum(xpsi);
  const auto ppsi = GridWavefunction(g, apply_momentum(psi), 1.0, hbar);
  const auto xppsi = apply_position(ppsi);
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < g.n(); ++i) {
    err = std::max(err, std::abs(xppsi[i] - pxpsi[i] - kI * hbar * psi.amp[i]));
    scale = std::max(scale, std::abs(hbar * psi.amp[i]));
  }
  CHECK(err / scale < 1e-6);
}

TEST_CASE("spectral derivative of a band-limited function") {
  const auto g = Grid1D::symmetric(kPi, 64);
  std::vector<cplx> f(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) f[i] = std::sin(3.0 * g.x(i)) + kI * std::cos(5.0 * g.x(i));
  const auto d = spectral_derivative(g, f);
  for (std::size_t i = 0; i < g.n(); ++i) {
    CHECK(std::abs(d[i] - (3.0 * std::cos(3.0 * g.x(i)) - 5.0 * kI * std::sin(5.0 * g.x(i)))) < 1e-12);
  }
}

TEST_CASE("Hermite functions") {
  const auto g = Grid1D::symmetric(20.0, 1024);
  std::vector<GridWavefunction> h;
  for (int k = 0; k <= 20; ++k) h.push_back(hermite_basis(g, k));
  for (int j = 0; j <= 20; ++j) {
    for (int k = 0; k <= 20; ++k) {
      cplx s{};
      for (std::size_t i = 0; i < g.n(); ++i) s += std::conj(h[j].amp[i]) * h[k].amp[i];
      CHECK(std::abs(s * g.dx() - (j == k ? 1.0 : 0.0)) < 1e-8);
    }
  }
  const auto u = uncertainties(h[0]);
  CHECK(u.sigma_x * u.sigma_p == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(std::abs(expectation_x(h[1])) < 1e-12);
  for (std::size_t i = 1; i < g.n() / 2; ++i) CHECK(std::abs(h[1].amp[i] + h[1].amp[g.n() - i]) < 1e-12);
  CHECK(code_of([] { hermite_basis(Grid1D::symmetric(3.0, 64), 10); }) == ErrorCode::GridTooNarrow);
}

TEST_CASE("support margin") {
  const auto g = Grid1D::symmetric(40.0, 512);
  CHECK(support_margin_ok(gaussian_packet(g, 0.0, 0.0, 2.0)));
  CHECK_FALSE(support_margin_ok(noise_state(g, 1)));
}

TEST_CASE("serialization") {
  const auto g = Grid1D::symmetric(8.0, 64);
  const auto psi = gaussian_packet(g, 0.3, -1.0, 1.0, 2.0, 0.5);

  std::stringstream bin;
  write_binary(bin, psi);
  const std::string bytes = bin.str();
  CHECK(bytes.substr(0, 4) == "QWF1");
  CHECK(bytes.size() == 4 + 8 + 4 * 8 + g.n() * 16);
  const auto back = read_binary(bin);
  CHECK(back.grid == psi.grid);
  CHECK(back.mass == 2.0);
  CHECK(back.hbar == 0.5);
  CHECK(back.amp == psi.amp);

  std::stringstream bad("QWF2xxxxxxxxxxxx");
  CHECK(code_of([&] { read_binary(bad); }) == ErrorCode::IoError);

  std::ostringstream csv;
  write_csv(csv, psi);
  std::istringstream lines(csv.str());
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  CHECK(header == "x,re_psi,im_psi,abs2_psi");
  CHECK(first.rfind("-8,", 0) == 0);
}
