#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "qwb/hilbert.hpp"
#include "qwb/rng.hpp"

using namespace qwb;

namespace {

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}
CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}
CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}
CVector vec2(cplx a, cplx b) {
  CVector v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("make_state normalizes") {
  CHECK((make_state(vec2(1.0, 0.0)).amplitudes() - vec2(1.0, 0.0)).cwiseAbs().maxCoeff() == 0.0);
  const auto s = make_state(vec2(1.0, 1.0));
  CHECK(std::abs(s[0] - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(s[1] - 1.0 / std::sqrt(2.0)) < 1e-15);

  // brute-force norm of (3i, 4) is 5
  const auto t = make_state(vec2(3.0 * kI, 4.0));
  CHECK(std::abs(t[0] - 0.6 * kI) < 1e-15);
  CHECK(std::abs(t[1] - 0.8) < 1e-15);

  CHECK_THROWS_AS(make_state(CVector::Zero(3)), Error);
  try {
    make_state(CVector::Zero(3));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroVector);
  }
  CHECK_THROWS_AS(StateVector::from_unit(vec2(1.0, 1.0)), Error);
}

TEST_CASE("inner product is conjugate-linear in the first slot") {
  const auto e1 = make_state(vec2(1.0, 0.0));
  const auto e2 = make_state(vec2(0.0, 1.0));
  CHECK(inner(e1, e1) == cplx(1.0));
  CHECK(inner(e1, e2) == cplx(0.0));
  CHECK(inner(vec2(kI, 0.0), vec2(1.0, 0.0)) == -kI);
  CHECK_THROWS_AS(inner(CVector::Zero(2), CVector::Zero(3)), Error);
}

TEST_CASE("is_hermitian") {
  CHECK(is_hermitian(pauli_x()));
  CMatrix upper(2, 2);
  upper << 0.0, 1.0, 0.0, 0.0;
  CHECK_FALSE(is_hermitian(upper));
  CHECK_FALSE(is_hermitian(kI * pauli_y()));
  CHECK_FALSE(is_hermitian(CMatrix::Zero(2, 3)));
  CHECK_THROWS_AS(Observable{upper}, Error);
}

TEST_CASE("spectral decomposition and degeneracy groups") {
  const Observable sz(0.5 * pauli_z());
  const auto& s = sz.spectrum();
  CHECK(s.eigenvalues[0] == doctest::Approx(-0.5));
  CHECK(s.eigenvalues[1] == doctest::Approx(0.5));
  CHECK(s.groups.size() == 2);

  const Observable id(CMatrix::Identity(4, 4));
  REQUIRE(id.spectrum().groups.size() == 1);
  CHECK(id.spectrum().groups[0].size() == 4);
  CHECK(id.spectrum().group_value(0) == doctest::Approx(1.0));

  // ±ħ/2 doublet stays split at the default tolerance even for tiny ħ.
  const Observable tiny(1e-6 * pauli_z());
  CHECK(tiny.spectrum().groups.size() == 2);
}

TEST_CASE("spectral reconstruction for random Hermitian matrices") {
  for (Eigen::Index d : {1, 2, 3, 7, 16, 33, 64}) {
    const CMatrix a = oracle::random_hermitian(d, static_cast<std::uint64_t>(d));
    const auto s = spectral_decompose(Observable(a));
    const CMatrix back = s.eigenvectors * s.eigenvalues.cast<cplx>().asDiagonal() * s.eigenvectors.adjoint();
    CHECK((back - a).norm() <= 1e-9 * a.norm());
    CHECK((s.eigenvectors.adjoint() * s.eigenvectors - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);
    for (Eigen::Index i = 1; i < d; ++i) CHECK(s.eigenvalues[i - 1] <= s.eigenvalues[i]);
  }
}

TEST_CASE("commutators") {
  const CMatrix sx = 0.5 * pauli_x(), sy = 0.5 * pauli_y(), sz = 0.5 * pauli_z();
  CHECK((commutator(sx, sy) - kI * sz).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(commutator(sx, sx).cwiseAbs().maxCoeff() == 0.0);
  CHECK((commutator(pauli_z(), pauli_x()) - 2.0 * kI * pauli_y()).cwiseAbs().maxCoeff() == 0.0);

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const CMatrix a = oracle::random_hermitian(6, seed), b = oracle::random_hermitian(6, seed + 100);
    CHECK(is_hermitian(kI * commutator(a, b)));
  }
}

TEST_CASE("simultaneous diagonalization") {
  // J^2 and Jz for j = 1 built by hand.
  const double r = std::sqrt(2.0);
  CMatrix jp = CMatrix::Zero(3, 3);
  jp(0, 1) = r;
  jp(1, 2) = r;
  const CMatrix jx = 0.5 * (jp + jp.adjoint());
  const CMatrix jy = -0.5 * kI * (jp - jp.adjoint());
  CMatrix jz = CMatrix::Zero(3, 3);
  jz(0, 0) = 1.0;
  jz(2, 2) = -1.0;
  const CMatrix j2 = jx * jx + jy * jy + jz * jz;
  const CMatrix basis = simultaneous_diagonalize(Observable(j2), Observable(jz));
  REQUIRE(basis.cols() == 3);
  std::vector<double> ms;
  for (Eigen::Index c = 0; c < 3; ++c) {
    const CVector v = basis.col(c);
    CHECK((j2 * v - 2.0 * v).norm() < 1e-12);
    const double m = v.dot(jz * v).real();
    CHECK((jz * v - m * v).norm() < 1e-12);
    ms.push_back(std::round(m));
  }
  std::sort(ms.begin(), ms.end());
  CHECK(ms == std::vector<double>{-1.0, 0.0, 1.0});

  const CMatrix b = oracle::random_hermitian(4, 9);
  const CMatrix eb = simultaneous_diagonalize(Observable(CMatrix::Identity(4, 4)), Observable(b));
  for (Eigen::Index c = 0; c < 4; ++c) {
    const CVector v = eb.col(c);
    const double l = v.dot(b * v).real();
    CHECK((b * v - l * v).norm() < 1e-10);
  }

  try {
    simultaneous_diagonalize(Observable(pauli_z()), Observable(pauli_x()));
    FAIL("expected DoNotCommute");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DoNotCommute);
  }
}

TEST_CASE("expectation and uncertainty") {
  const Observable sz(0.5 * pauli_z()), sx(0.5 * pauli_x());
  CHECK(expectation(make_state(vec2(1.0, 0.0)), sz) == doctest::Approx(0.5));
  CHECK(std::abs(expectation(make_state(vec2(1.0, 1.0)), sz)) < 1e-15);
  // direct quadratic form: 0.5 (0.36 - 0.64)
  CHECK(expectation(make_state(vec2(0.6, 0.8)), sz) == doctest::Approx(-0.14).epsilon(1e-14));

  CHECK(uncertainty(make_state(vec2(1.0, 0.0)), sz) == doctest::Approx(0.0));
  CHECK(uncertainty(make_state(vec2(1.0, 1.0)), sz) == doctest::Approx(0.5));
  CHECK(uncertainty(make_state(vec2(1.0, 0.0)), sx) == doctest::Approx(0.5));

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Observable a(oracle::random_hermitian(5, seed));
    const auto psi = make_state(oracle::random_vector(5, seed));
    const auto rotated = make_state(std::polar(1.0, 0.3 + seed) * psi.amplitudes());
    CHECK(expectation(rotated, a) == doctest::Approx(expectation(psi, a)).epsilon(1e-13));
  }
}

TEST_CASE("measure_probabilities") {
  const Observable z(pauli_z());
  auto r = measure_probabilities(make_state(vec2(1.0, 0.0)), z);
  REQUIRE(r.size() == 2);
  CHECK(r[0].outcome == doctest::Approx(-1.0));
  CHECK(r[0].probability == doctest::Approx(0.0));
  CHECK_FALSE(r[0].post_state.has_value());
  CHECK(r[1].probability == doctest::Approx(1.0));

  r = measure_probabilities(make_state(vec2(1.0, 1.0)), z);
  CHECK(r[0].probability == doctest::Approx(0.5));
  CHECK(r[1].probability == doctest::Approx(0.5));

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(seed % 6);
    const auto psi = make_state(oracle::random_vector(d, seed));
    double total = 0.0;
    for (const auto& rec : measure_probabilities(psi, Observable(oracle::random_hermitian(d, seed)))) total += rec.probability;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK_THROWS_AS(measure_probabilities(make_state(vec2(1.0, 0.0)), Observable(CMatrix::Identity(3, 3))), Error);
}

TEST_CASE("sample_measurement") {
  const Observable z(pauli_z());
  const auto up = make_state(vec2(1.0, 0.0));
  for (std::uint64_t seed = 0; seed < 50; ++seed) CHECK(sample_measurement(up, z, seed).outcome == 1.0);

  const auto plus = make_state(vec2(1.0, 1.0));
  const std::size_t n = 100000;
  std::size_t ups = 0;
  for (std::size_t s = 0; s < n; ++s) ups += sample_measurement(plus, z, s).outcome > 0.0;
  CHECK(std::abs(static_cast<double>(ups) / n - 0.5) <= oracle::binomial_window(0.5, n));

  // repeated measurement returns the same outcome group
  const Observable a(oracle::random_hermitian(4, 3));
  const auto psi = make_state(oracle::random_vector(4, 3));
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto first = sample_measurement(psi, a, seed);
    REQUIRE(first.post_state.has_value());
    const auto second = sample_measurement(*first.post_state, a, seed * 31 + 7);
    CHECK(second.outcome == first.outcome);
  }

  // same seed, same draw
  CHECK(sample_measurement(psi, a, 1234).outcome == sample_measurement(psi, a, 1234).outcome);
  const CounterRng g(1234);
  CHECK(sample_measurement_with_draw(psi, a, g.uniform(0)).outcome == sample_measurement(psi, a, 1234).outcome);
}

TEST_CASE("tensor products") {
  const CVector e1 = vec2(1.0, 0.0), e2 = vec2(0.0, 1.0);
  const CVector t = tensor_vector(e1, e2);
  REQUIRE(t.size() == 4);
  CHECK(t[1] == cplx(1.0));
  CHECK(t.norm() == doctest::Approx(1.0));

  const CVector u = oracle::random_vector(2, 1), v = oracle::random_vector(3, 2);
  const CVector u2 = oracle::random_vector(2, 3), v2 = oracle::random_vector(3, 4);
  CMatrix s3 = oracle::random_hermitian(3, 5);
  const CVector lhs = tensor_op(CMatrix::Identity(2, 2), s3) * tensor_vector(u, v);
  CHECK((lhs - tensor_vector(u, s3 * v)).norm() < 1e-14);
  CHECK(std::abs(inner(tensor_vector(u, v), tensor_vector(u2, v2)) - inner(u, u2) * inner(v, v2)) < 1e-14);
  CHECK(tensor_state(make_state(u), make_state(v)).dim() == 6);
}

TEST_CASE("isolated evolution") {
  const double w0 = 2.0;
  const Observable h(w0 * 0.5 * pauli_z());
  const cplx a = 0.6, b = 0.8 * kI;
  const auto psi0 = make_state(vec2(a, b));
  for (double t : {0.0, 0.37, 1.5, 10.0}) {
    const auto psi = evolve_isolated(h, psi0, t);
    CHECK(std::abs(psi[0] - a * std::polar(1.0, -w0 * t / 2.0)) < 1e-14);
    CHECK(std::abs(psi[1] - b * std::polar(1.0, w0 * t / 2.0)) < 1e-14);
  }

  const Observable hr(oracle::random_hermitian(6, 11));
  const auto p0 = make_state(oracle::random_vector(6, 12));
  const double e0 = expectation(p0, hr);
  for (double t : {0.1, 1.0, 7.3}) {
    const auto pt = evolve_isolated(hr, p0, t, 0.7);
    CHECK(std::abs(pt.amplitudes().norm() - 1.0) <= 1e-12);
    CHECK(std::abs(expectation(pt, hr) - e0) <= 1e-10);
    const auto split = evolve_isolated(hr, evolve_isolated(hr, p0, 0.4, 0.7), t, 0.7);
    CHECK((split.amplitudes() - evolve_isolated(hr, p0, t + 0.4, 0.7).amplitudes()).norm() <= 1e-10);
  }

  // eigenstate picks up only a phase
  const auto& s = hr.spectrum();
  const auto eig = StateVector::from_unit(s.eigenvectors.col(2));
  const auto et = evolve_isolated(hr, eig, 3.0);
  CHECK((et.amplitudes() - std::polar(1.0, -s.eigenvalues[2] * 3.0) * eig.amplitudes()).norm() < 1e-12);
}
