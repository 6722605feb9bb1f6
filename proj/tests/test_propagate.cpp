#include <doctest.h>

#include <cmath>
#include <random>

#include "latticespread/propagate.hpp"

using namespace latticespread;

namespace {

ComplexMatrix random_complex_symmetric(int n, unsigned seed, double scale) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexMatrix m(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) {
      const Complex v = scale * Complex(u(rng), u(rng));
      m(i, j) = v;
      m(j, i) = v;
    }
  return m;
}

ApplyFn dense_apply(const ComplexMatrix& m) {
  return [&m](const ComplexVector& in, ComplexVector& out) { out.noalias() = m * in; };
}

}  // namespace

TEST_CASE("nearest-neighbour chain reproduces the Bessel solution") {
  // Tridiagonal hopping J = 1: psi_x(t) = (-i)^x J_x(2 t) on the infinite
  // chain. N = 201 keeps reflections negligible up to t = 20.
  const int n = 201;
  const int c = n / 2;
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) h(i, i + 1) = h(i + 1, i) = 1.0;

  ComplexVector psi0 = ComplexVector::Zero(n);
  psi0[c] = 1.0;

  EvolveOptions opt;
  auto states = krylov_propagate(dense_apply(h), psi0, {5.0, 20.0}, 2.0, opt);

  for (size_t k = 0; k < 2; ++k) {
    const double t = (k == 0) ? 5.0 : 20.0;
    double max_err = 0.0;
    for (int x = -60; x <= 60; ++x) {
      const Complex expected =
          std::pow(Complex(0.0, -1.0), std::abs(x)) * std::cyl_bessel_j(std::abs(x), 2.0 * t);
      max_err = std::max(max_err, std::abs(states[k][c + x] - expected));
    }
    CHECK(max_err < 1e-9);
  }
}

TEST_CASE("krylov agrees with dense diagonalization for random generators") {
  // Non-Hermitian complex-symmetric matrices, eigenvalues on both half planes.
  for (unsigned seed : {11u, 12u, 13u}) {
    const int n = 120;
    const ComplexMatrix m = random_complex_symmetric(n, seed, 1.0 / std::sqrt(n));
    ComplexVector psi0 = ComplexVector::Zero(n);
    psi0[n / 3] = 1.0;

    const std::vector<double> times = {0.1, 1.0, 10.0};
    auto krylov = krylov_propagate(dense_apply(m), psi0, times, 3.0);

    DensePropagator exact(m);
    for (size_t k = 0; k < times.size(); ++k) {
      const ComplexVector ref = exact.at(psi0, times[k]);
      CHECK((krylov[k] - ref).norm() / ref.norm() < 1e-8);
    }
  }
}

TEST_CASE("lattice evolution conserves or shrinks the norm as appropriate") {
  const std::vector<double> times = {0.5, 2.0, 8.0};

  // Hermitian power law: survival stays 1.
  {
    auto snaps = evolve(build_power_law(LatticeGeometry::chain(101), 3.0), 50, times);
    for (const auto& s : snaps) CHECK(s.survival() == doctest::Approx(1.0).epsilon(1e-9));
  }

  // Waveguide: survival strictly decreasing, never above 1.
  {
    auto snaps = evolve(build_waveguide(LatticeGeometry::chain(101), 0.3 * kPi), 50, times);
    double prev = 1.0;
    for (const auto& s : snaps) {
      CHECK(s.survival() <= prev + 1e-8);
      prev = s.survival();
    }
    CHECK(snaps.back().survival() < 1.0);
  }
}

TEST_CASE("krylov matches dense diagonalization on a photonic lattice") {
  const auto h = build_free_space(LatticeGeometry::square(9, 9), 0.3 * kPi,
                                  Eigen::Vector3cd(0, 0, 1));
  ComplexVector psi0 = ComplexVector::Zero(h.size());
  psi0[h.geometry().origin_site] = 1.0;

  auto kry = evolve(h, h.geometry().origin_site, {1.0, 4.0});
  DensePropagator exact(h.dense());
  for (size_t k = 0; k < 2; ++k) {
    const ComplexVector ref = exact.at(psi0, k == 0 ? 1.0 : 4.0);
    CHECK((kry[k].amplitudes - ref).norm() / ref.norm() < 1e-8);
  }
}

TEST_CASE("sampling honours t = 0 and ordering requirements") {
  const auto h = build_power_law(LatticeGeometry::chain(21), 3.0);
  auto snaps = evolve(h, 10, {0.0, 1.0});
  CHECK(snaps[0].amplitudes[10] == Complex(1.0, 0.0));
  CHECK(snaps[0].survival() == doctest::Approx(1.0));

  CHECK_THROWS_AS(evolve(h, 10, {1.0, 1.0}), Error);
  CHECK_THROWS_AS(evolve(h, 10, {2.0, 1.0}), Error);
  CHECK_THROWS_AS(evolve(h, 10, {}), Error);
  CHECK_THROWS_AS(evolve(h, 99, {1.0}), Error);
}

TEST_CASE("cross sections slice snapshots consistently") {
  const auto g = LatticeGeometry::square(7, 7);
  WaveformSnapshot s;
  s.time = 1.5;
  s.amplitudes = ComplexVector::Zero(g.size());
  s.amplitudes[g.site_at(5, 3)] = Complex(0.6, 0.0);   // on the center row
  s.amplitudes[g.site_at(3, 3)] = Complex(0.0, 0.8);   // origin

  const auto row = cross_section(s, g, SectionKind::Row);
  CHECK(row.coordinate.size() == 7);
  CHECK(row.coordinate[3] == 0.0);
  CHECK(row.probability[5] == doctest::Approx(0.36));
  CHECK(row.probability[3] == doctest::Approx(0.64));

  const auto diag = cross_section(s, g, SectionKind::DiagonalMain);
  CHECK(diag.probability[3] == doctest::Approx(0.64));
  CHECK(diag.coordinate[4] == doctest::Approx(std::sqrt(2.0)));

  const auto rad = cross_section(s, g, SectionKind::Radial);
  CHECK(rad.probability[0] > 0.0);
}
