#include "latticespread/reciprocal2d.hpp"

#include <cmath>

#include "latticespread/faddeeva.hpp"

namespace latticespread {

namespace {

void check_slab_args(double p, double k_a, double a_ho) {
  require_usage(p >= 0.0, "reciprocal", "momentum magnitude must be non-negative");
  require_usage(k_a > 0.0, "reciprocal", "light wavenumber must be positive");
  require_usage(a_ho > 0.0, "reciprocal", "smearing width must be positive");
}

}  // namespace

Complex slab_integral_0(double p, double k_a, double a_ho) {
  check_slab_args(p, k_a, a_ho);
  const double disc = (k_a - p) * (k_a + p);
  require(disc != 0.0, "reciprocal",
          "light-cone singularity: in-plane momentum equals the light wavenumber");
  const double c = std::exp(-0.5 * a_ho * a_ho * p * p) / (kTwoPi * k_a * k_a);
  if (disc > 0.0) {
    const double lam = std::sqrt(disc);
    const double gauss = std::exp(-0.5 * a_ho * a_ho * disc);
    const Complex bracket = Complex(0.0, -1.0) + erfi(Complex(a_ho * lam / std::sqrt(2.0), 0.0));
    return c * (kPi * gauss / lam) * bracket;
  }
  const double lam = std::sqrt(-disc);
  return Complex(-c * kPi * erfcx(a_ho * lam / std::sqrt(2.0)) / lam, 0.0);
}

Complex slab_integral_2(double p, double k_a, double a_ho) {
  const double disc = (k_a - p) * (k_a + p);
  const double c = std::exp(-0.5 * a_ho * a_ho * p * p) / (kTwoPi * k_a * k_a);
  return disc * slab_integral_0(p, k_a, a_ho) - c * std::sqrt(kTwoPi) / a_ho;
}

Complex projected_slab_green(double px, double py, double k_a, double a_ho,
                             const Eigen::Vector3cd& polarization) {
  const double p = std::hypot(px, py);
  const Complex i0 = slab_integral_0(p, k_a, a_ho);
  const Complex i2 = slab_integral_2(p, k_a, a_ho);
  const Complex gxx = -(k_a * k_a - px * px) * i0;
  const Complex gyy = -(k_a * k_a - py * py) * i0;
  const Complex gzz = -(k_a * k_a * i0 - i2);
  const Complex gxy = px * py * i0;
  const double wx = std::norm(polarization.x());
  const double wy = std::norm(polarization.y());
  const double wz = std::norm(polarization.z());
  const double cross = 2.0 * (std::conj(polarization.x()) * polarization.y()).real();
  return wx * gxx + wy * gyy + wz * gzz + cross * gxy;
}

ReciprocalDispersion2D::ReciprocalDispersion2D(double k_a,
                                               const Eigen::Vector3cd& polarization,
                                               double a_x, double a_y, double a_ho,
                                               int g_cutoff)
    : k_a_(k_a), polarization_(polarization), a_x_(a_x), a_y_(a_y), a_ho_(a_ho),
      g_cutoff_(g_cutoff) {
  require_usage(k_a > 0.0, "reciprocal", "light wavenumber must be positive");
  require_usage(a_x > 0.0 && a_y > 0.0, "reciprocal", "lattice constants must be positive");
  require_usage(a_ho > 0.0, "reciprocal", "smearing width must be positive");
  require_usage(g_cutoff >= 0, "reciprocal", "reciprocal cutoff must be non-negative");
  const double norm = polarization_.norm();
  require_usage(std::abs(norm - 1.0) < 1e-6, "reciprocal",
                "polarization must be a unit vector");
  polarization_ /= norm;
  if (g_cutoff_ == 0) {
    // excluded shells need a_ho * |G - k| >= sqrt(2 ln 1e12) for any k out
    // to twice the zone corner
    const double gauss_radius = std::sqrt(2.0 * std::log(1e12)) / a_ho_;
    const double k_max = kTwoPi * std::hypot(1.0 / a_x_, 1.0 / a_y_);
    const double step = kTwoPi / std::max(a_x_, a_y_);
    g_cutoff_ = static_cast<int>(std::ceil((gauss_radius + k_max) / step));
  }
  require_usage(g_cutoff_ >= 1, "reciprocal", "reciprocal cutoff must be at least 1");
}

Complex ReciprocalDispersion2D::omega(double kx, double ky) const {
  const int m = g_cutoff_;
  Complex sum(0.0, 0.0);
  double shell_magnitude = 0.0;
  for (int my = -m; my <= m; ++my) {
    const double py = kTwoPi * my / a_y_ - ky;
    for (int mx = -m; mx <= m; ++mx) {
      const double px = kTwoPi * mx / a_x_ - kx;
      const Complex term = projected_slab_green(px, py, k_a_, a_ho_, polarization_);
      sum += term;
      if (std::max(std::abs(mx), std::abs(my)) == m) shell_magnitude += std::abs(term);
    }
  }
  const double prefactor =
      -(3.0 * kPi / k_a_) * std::exp(0.5 * k_a_ * k_a_ * a_ho_ * a_ho_) / (a_x_ * a_y_);
  const Complex value = prefactor * sum;
  require(is_finite(value), "reciprocal", "reciprocal sum produced a non-finite value");
  if (shell_magnitude > 1e-8 * std::abs(sum)) {
    throw Error(ErrorCategory::Runtime, "reciprocal",
                "reciprocal sum not converged at cutoff " + std::to_string(m) +
                    ": outermost shell carries relative weight " +
                    std::to_string(shell_magnitude / std::abs(sum)));
  }
  return value;
}

}  // namespace latticespread
