#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "latticespread/green.hpp"
#include "latticespread/hamiltonian.hpp"

using namespace latticespread;

namespace {

ComplexVector random_state(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexVector v(n);
  for (int i = 0; i < n; ++i) v[i] = Complex(u(rng), u(rng));
  return v;
}

double min_decay_eigenvalue(const Hamiltonian& h) {
  const ComplexMatrix m = h.dense();
  const ComplexMatrix gamma = kI * (m - m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gamma);
  return es.eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("power-law couplings and units") {
  const auto h = build_power_law(LatticeGeometry::chain(7), 3.0);
  CHECK(h.element(1, 3).real() == doctest::Approx(1.0 / 8.0).epsilon(1e-15));
  CHECK(h.element(1, 3).imag() == 0.0);
  CHECK(h.element(2, 2) == Complex(0.0, 0.0));
  CHECK(h.is_hermitian());

  const auto h2 = build_power_law(LatticeGeometry::square(5, 5), 2.0);
  CHECK(h2.element(h2.geometry().site_at(0, 0), h2.geometry().site_at(3, 4)).real() ==
        doctest::Approx(1.0 / 25.0).epsilon(1e-15));
}

TEST_CASE("waveguide couplings carry the channel phase") {
  const auto h = build_waveguide(LatticeGeometry::chain(9), kPi);
  // nearest neighbour at k_a a = pi: -(i/2) e^{-i pi} = +i/2
  CHECK(std::abs(h.element(4, 5) - Complex(0.0, 0.5)) < 1e-15);
  CHECK(h.element(3, 3) == Complex(0.0, -0.5));
  CHECK_THROWS_AS(build_waveguide(LatticeGeometry::square(3, 3), kPi), Error);
}

TEST_CASE("free-space couplings match the projected Green tensor") {
  const Eigen::Vector3cd zhat(0, 0, 1);
  const double k = 0.3 * kPi;
  const auto h = build_free_space(LatticeGeometry::chain(11), k, zhat);
  CHECK(h.element(5, 5) == Complex(0.0, -0.5));
  const Complex expected = free_space_coupling(Eigen::Vector3d(3.0, 0, 0), k, zhat);
  CHECK(std::abs(h.element(8, 5) - expected) < 1e-15);
}

TEST_CASE("matrices are complex symmetric") {
  const auto models = {
      build_power_law(LatticeGeometry::chain(24), 1.0),
      build_waveguide(LatticeGeometry::chain(24), 0.3 * kPi),
      build_free_space(LatticeGeometry::square(5, 4), 0.7,
                       Eigen::Vector3cd(1, 1, 1).normalized()),
  };
  for (const auto& h : models) {
    const ComplexMatrix m = h.dense();
    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("decay matrix is positive semidefinite") {
  const double tol = -1e-10;
  CHECK(min_decay_eigenvalue(build_waveguide(LatticeGeometry::chain(40), 0.3 * kPi)) > tol);
  CHECK(min_decay_eigenvalue(build_waveguide(LatticeGeometry::chain(40), 1.2 * kPi)) > tol);
  const Eigen::Vector3cd d = Eigen::Vector3cd(0.3, Complex(0.1, 0.4), 0.8).normalized();
  CHECK(min_decay_eigenvalue(build_free_space(LatticeGeometry::chain(30), 0.15 * kPi, d)) > tol);
  CHECK(min_decay_eigenvalue(build_free_space(LatticeGeometry::square(6, 6), 1.2 * kPi, d)) > tol);
}

TEST_CASE("FFT apply agrees with direct table application and dense product") {
  const auto cases = {
      build_power_law(LatticeGeometry::chain(33), 3.0),
      build_waveguide(LatticeGeometry::chain(20), 0.3 * kPi),
      build_free_space(LatticeGeometry::square(7, 5), 0.9,
                       Eigen::Vector3cd(0, 0, 1)),
  };
  unsigned seed = 7;
  for (const auto& h : cases) {
    const ComplexVector v = random_state(h.size(), seed++);
    ComplexVector fft_out, direct_out;
    h.apply(v, fft_out);
    h.apply_direct(v, direct_out);
    const ComplexVector dense_out = h.dense() * v;
    CHECK((fft_out - direct_out).norm() / direct_out.norm() < 1e-13);
    CHECK((fft_out - dense_out).norm() / dense_out.norm() < 1e-13);
  }
}

TEST_CASE("independent workspaces give identical results") {
  const auto h = build_free_space(LatticeGeometry::chain(41), 0.3 * kPi,
                                  Eigen::Vector3cd(0, 0, 1));
  const ComplexVector v = random_state(h.size(), 3);
  ComplexVector a, b;
  ApplyWorkspace ws;
  h.apply(v, a);
  h.apply(v, b, ws);
  CHECK((a - b).norm() == 0.0);
}

TEST_CASE("dense materialization is size guarded") {
  const auto h = build_power_law(LatticeGeometry::chain(2001), 3.0);
  CHECK_THROWS_AS(h.dense(), Error);
  ComplexVector v = ComplexVector::Ones(2001), out;
  h.apply(v, out);  // matrix-free path still works
  CHECK(out.size() == 2001);
}

TEST_CASE("l1 bound dominates every row sum") {
  const auto h = build_free_space(LatticeGeometry::square(6, 4), 1.1,
                                  Eigen::Vector3cd(1, 0, 0));
  const ComplexMatrix m = h.dense();
  const double bound = h.coupling_l1_bound();
  for (int i = 0; i < m.rows(); ++i) {
    CHECK(m.row(i).cwiseAbs().sum() <= bound + 1e-12);
  }
}

TEST_CASE("table export covers all displacements once") {
  const auto h = build_power_law(LatticeGeometry::square(3, 4), 2.0);
  const auto rows = h.table_rows();
  CHECK(rows.size() == size_t(5 * 7));
  int zero_count = 0;
  for (const auto& r : rows)
    if (r.dx == 0 && r.dy == 0) {
      ++zero_count;
      CHECK(r.value == h.diagonal());
    }
  CHECK(zero_count == 1);
}
