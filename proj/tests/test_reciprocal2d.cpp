#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include <latticespread/coupling.hpp>
#include <latticespread/dispersion2d.hpp>
#include <latticespread/reciprocal2d.hpp>

namespace {

using latticespread::Complex;
using latticespread::kPi;
using latticespread::kTwoPi;

double simpson_rec(const std::function<double(double)>& f, double a, double fa, double m,
                   double fm, double b, double fb, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) < 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, fa, m, fm, b, fb, whole, tol, 48);
}

// Principal value of the half-line integral of e^{-s t^2} / (t^2 - L^2):
// the bare principal value of 1/(t^2 - L^2) over [0, inf) vanishes, so
// subtracting the pole residue value g(L) leaves a smooth integrand; the
// constant is restored analytically on the truncated tail.
double pv_half_line(double s, double big_l, double cut) {
  const double gl = std::exp(-s * big_l * big_l);
  const auto integrand = [s, big_l, gl](double t) {
    const double diff = t - big_l;
    if (std::abs(diff) < 1e-5 * std::max(1.0, big_l)) {
      const double mid = 0.5 * (t + big_l);
      return -2.0 * s * mid * std::exp(-s * mid * mid) / (t + big_l);
    }
    return (std::exp(-s * t * t) - gl) / (diff * (t + big_l));
  };
  const double core = adaptive_simpson(integrand, 0.0, cut, 1e-13);
  const double tail = -gl * (0.5 / big_l) * std::log((cut + big_l) / (cut - big_l));
  return core + tail;
}

// Quadrature oracles for the slab integrals, independent of the erfi/erfcx
// closed forms: retarded pole split into principal value plus half-residue.
Complex oracle_slab0(double p, double k_a, double a_ho) {
  const double s = 0.5 * a_ho * a_ho;
  const double c = std::exp(-s * p * p) / (kTwoPi * k_a * k_a);
  const double disc = k_a * k_a - p * p;
  const double cut = std::sqrt(45.0 / s) + 3.0 * k_a;
  if (disc > 0.0) {
    const double big_l = std::sqrt(disc);
    const double gl = std::exp(-s * disc);
    const double pv = 2.0 * pv_half_line(s, big_l, cut);
    return -c * Complex(pv, kPi * gl / big_l);
  }
  const double lam = std::sqrt(-disc);
  const auto integrand = [s, lam](double t) {
    return std::exp(-s * t * t) / (t * t + lam * lam);
  };
  return Complex(-c * 2.0 * adaptive_simpson(integrand, 0.0, cut, 1e-13), 0.0);
}

Complex oracle_slab2(double p, double k_a, double a_ho) {
  const double s = 0.5 * a_ho * a_ho;
  const double c = std::exp(-s * p * p) / (kTwoPi * k_a * k_a);
  const double disc = k_a * k_a - p * p;
  const double cut = std::sqrt(45.0 / s) + 3.0 * k_a;
  if (disc > 0.0) {
    const double big_l = std::sqrt(disc);
    const double gl = std::exp(-s * disc);
    const double pv_t2 = std::sqrt(kPi / s) + 2.0 * disc * pv_half_line(s, big_l, cut);
    return -c * Complex(pv_t2, kPi * big_l * gl);
  }
  const double lam = std::sqrt(-disc);
  const auto integrand = [s, lam](double t) {
    return t * t * std::exp(-s * t * t) / (t * t + lam * lam);
  };
  return Complex(-c * 2.0 * adaptive_simpson(integrand, 0.0, cut, 1e-13), 0.0);
}

Eigen::Vector3cd axis_polarization(int axis) {
  Eigen::Vector3cd d = Eigen::Vector3cd::Zero();
  d(axis) = 1.0;
  return d;
}

Eigen::Vector3cd tilted_polarization() {
  const double s = std::sin(kPi / 12.0) / std::sqrt(2.0);
  return {Complex(s, 0.0), Complex(s, 0.0), Complex(std::cos(kPi / 12.0), 0.0)};
}

}  // namespace

TEST_CASE("slab integrals match quadrature of the defining integral") {
  const double a_ho = 0.1;
  const double wavenumbers[] = {0.3 * kPi, 1.2 * kPi, 2.0};
  const double ratios[] = {0.05, 0.5, 0.95, 1.05, 1.6, 3.0};
  for (const double k_a : wavenumbers) {
    for (const double ratio : ratios) {
      CAPTURE(k_a);
      CAPTURE(ratio);
      const double p = ratio * k_a;
      const Complex i0 = latticespread::slab_integral_0(p, k_a, a_ho);
      const Complex i2 = latticespread::slab_integral_2(p, k_a, a_ho);
      const Complex o0 = oracle_slab0(p, k_a, a_ho);
      const Complex o2 = oracle_slab2(p, k_a, a_ho);
      CHECK(std::abs(i0 - o0) <= 1e-9 * std::abs(o0));
      CHECK(std::abs(i2 - o2) <= 1e-9 * std::abs(o2));
    }
  }
  // straddling the light cone
  for (const double ratio : {0.999, 1.001}) {
    CAPTURE(ratio);
    const double k_a = 2.0;
    const double p = ratio * k_a;
    const Complex i0 = latticespread::slab_integral_0(p, k_a, a_ho);
    const Complex o0 = oracle_slab0(p, k_a, a_ho);
    CHECK(std::abs(i0 - o0) <= 1e-8 * std::abs(o0));
  }
}

TEST_CASE("slab integrals reject the light cone and bad arguments") {
  CHECK_THROWS_WITH_AS(latticespread::slab_integral_0(2.0, 2.0, 0.1),
                       doctest::Contains("light-cone"), latticespread::Error);
  CHECK_THROWS_AS(latticespread::slab_integral_0(-1.0, 2.0, 0.1), latticespread::Error);
  CHECK_THROWS_AS(latticespread::slab_integral_0(1.0, -2.0, 0.1), latticespread::Error);
  CHECK_THROWS_AS(latticespread::slab_integral_2(1.0, 2.0, 0.0), latticespread::Error);
}

TEST_CASE("dispersion symmetry, branch structure, and axis swap") {
  const double k_a = 0.3 * kPi;
  const latticespread::ReciprocalDispersion2D xpol(k_a, axis_polarization(0));
  const latticespread::ReciprocalDispersion2D ypol(k_a, axis_polarization(1));
  const latticespread::ReciprocalDispersion2D tilted(k_a, tilted_polarization());

  for (const auto& k : std::vector<std::array<double, 2>>{{0.7, -1.3}, {2.1, 0.4}}) {
    const Complex plus = tilted.omega(k[0], k[1]);
    const Complex minus = tilted.omega(-k[0], -k[1]);
    CHECK(std::abs(plus - minus) <= 1e-12 * std::abs(plus));
    const Complex swapped = ypol.omega(k[1], k[0]);
    const Complex direct = xpol.omega(k[0], k[1]);
    CHECK(std::abs(direct - swapped) <= 1e-12 * std::abs(direct));
  }

  // all reciprocal images of a subradiant k are evanescent, so omega is
  // exactly real there; a propagating central image radiates (Im < 0)
  CHECK(tilted.omega(2.0, 1.0).imag() == 0.0);
  CHECK(tilted.omega(0.2, 0.1).imag() < 0.0);
}

TEST_CASE("dispersion differences agree with the direct lattice sum") {
  // the on-site regularization offset cancels in omega(k1) - omega(k2); the
  // residual is the Gaussian smearing of the couplings plus the R window
  const double k_a = 0.3 * kPi;
  for (const int axis : {0, 2}) {
    CAPTURE(axis);
    const Eigen::Vector3cd d = axis_polarization(axis);
    const latticespread::ReciprocalDispersion2D disp(k_a, d);
    const latticespread::CouplingModel model{latticespread::FreeSpaceCoupling{k_a, d}};
    const double recip =
        disp.omega(1.5, 0.0).real() - disp.omega(2.5, 0.5).real();
    const Complex r1 = latticespread::lattice_sum_omega_2d(model, 1.5, 0.0, 1500);
    const Complex r2 = latticespread::lattice_sum_omega_2d(model, 2.5, 0.5, 1500);
    const double direct = r1.real() - r2.real();
    CHECK(std::abs(recip - direct) <= 0.04 * std::abs(recip));
  }
}

TEST_CASE("reciprocal cutoff selection and convergence guard") {
  const latticespread::ReciprocalDispersion2D disp(0.3 * kPi, axis_polarization(2));
  CHECK(disp.g_cutoff() >= 12);
  CHECK(disp.g_cutoff() <= 20);
  CHECK(latticespread::is_finite(disp.omega(0.5, -1.2)));

  const latticespread::ReciprocalDispersion2D truncated(0.3 * kPi, axis_polarization(2),
                                                        1.0, 1.0, 0.1, 1);
  CHECK_THROWS_WITH_AS(truncated.omega(0.5, -1.2), doctest::Contains("not converged"),
                       latticespread::Error);

  CHECK_THROWS_AS(latticespread::ReciprocalDispersion2D(0.3 * kPi, axis_polarization(2),
                                                        -1.0, 1.0),
                  latticespread::Error);
  CHECK_THROWS_AS(
      latticespread::ReciprocalDispersion2D(0.3 * kPi, 0.5 * axis_polarization(2)),
      latticespread::Error);
}

TEST_CASE("determinant is finite-difference convergent away from the ring") {
  const latticespread::ReciprocalDispersion2D disp(0.3 * kPi, tilted_polarization());
  const auto w = [&](double kx, double ky) { return disp.re_omega(kx, ky); };
  const double kx = 2.0, ky = 0.8;
  const double d1 = latticespread::hessian_det_at(w, kx, ky, 0.2);
  const double d2 = latticespread::hessian_det_at(w, kx, ky, 0.1);
  const double d4 = latticespread::hessian_det_at(w, kx, ky, 0.05);
  const double order = std::log2(std::abs(d1 - d2) / std::abs(d2 - d4));
  CHECK(order >= 1.8);
}

TEST_CASE("subradiant determinant loops at small light wavenumber") {
  const double k_a = 0.3 * kPi;
  const latticespread::ReciprocalDispersion2D disp(k_a, tilted_polarization());
  const auto w = [&](double kx, double ky) { return disp.re_omega(kx, ky); };
  const int n = 96;
  auto field = latticespread::hessian_field(w, n, -kPi, kPi, true);
  // stencils straddling the light ring are garbage; drop them
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const double r = std::hypot(-kPi + ix * field.spacing, -kPi + iy * field.spacing);
      if (std::abs(r - k_a) < 3.0 * field.spacing)
        field.valid[field.index(ix, iy)] = 0;
    }
  }
  const auto set = latticespread::zero_contours(field);

  int inner = 0, outer = 0;
  for (const auto& contour : set.contours) {
    if (!contour.closed || contour.points.size() < 30) continue;
    double rmin = 1e9;
    for (const auto& p : contour.points) rmin = std::min(rmin, std::hypot(p[0], p[1]));
    const double ring_distance = rmin - k_a;
    if (ring_distance > 0.3 && ring_distance < 0.8 &&
        std::abs(contour.signed_area) > 4.0 && std::abs(contour.signed_area) < 11.0) {
      ++inner;
    }
    if (ring_distance > 0.8 && ring_distance < 1.4 &&
        std::abs(contour.signed_area) > 9.0 && std::abs(contour.signed_area) < 20.0) {
      ++outer;
    }
  }
  CHECK(inner == 1);
  CHECK(outer == 1);
}
