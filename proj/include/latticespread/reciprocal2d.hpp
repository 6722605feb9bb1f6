#pragma once

#include <Eigen/Dense>

#include "latticespread/numeric.hpp"

namespace latticespread {

// Building blocks of the reciprocal-space dispersion for a planar array
// coupled through free-space modes. Atoms are smeared by a Gaussian of
// width a_ho, which regularizes the otherwise divergent sums; lengths in
// units of the lattice constant, energies in units of gamma_a.

// Out-of-plane momentum integrals at in-plane momentum magnitude p:
//
//   I_n = -C * (1/2pi) Integral dq  q^n e^{-a_ho^2 q^2 / 2} / (q^2 - L^2 - i0)
//
// with L^2 = k_a^2 - p^2 and C = e^{-a_ho^2 p^2 / 2} / (2 pi k_a^2), taking
// the retarded branch of the pole. Closed forms: for p < k_a (propagating),
// I_0 = C * (pi e^{-a_ho^2 L^2/2} / L) * (-i + erfi(a_ho L / sqrt 2)); for
// p > k_a (evanescent, L = i l) the analytic continuation is the real value
// -C pi erfcx(a_ho l / sqrt 2) / l, evaluated overflow-free. In both branches
// I_2 = L^2 I_0 - C sqrt(2 pi) / a_ho.
Complex slab_integral_0(double p, double k_a, double a_ho);
Complex slab_integral_2(double p, double k_a, double a_ho);

// Polarization projection d^dag g d of the smeared reciprocal-space Green
// tensor at in-plane momentum (px, py):
//   g_xx = -(k_a^2 - px^2) I_0      g_yy = -(k_a^2 - py^2) I_0
//   g_zz = -(k_a^2 I_0 - I_2)       g_xy = px py I_0, no xz/yz mixing.
Complex projected_slab_green(double px, double py, double k_a, double a_ho,
                             const Eigen::Vector3cd& polarization);

// Dispersion of a rectangular planar array as a sum over reciprocal lattice
// vectors G = 2 pi (mx / a_x, my / a_y), max(|mx|, |my|) <= g_cutoff:
//
//   omega(k) = -(3 pi / k_a) e^{k_a^2 a_ho^2 / 2} (1 / (a_x a_y))
//              * sum_G  d^dag g(G - k) d
//
// The k-independent on-site regularization offset is omitted: derivatives,
// Hessians, and zero contours are invariant under constant shifts. For
// subradiant k (|k| > k_a, all |G - k| evanescent) the result is exactly
// real; propagating terms contribute Im omega < 0.
//
// g_cutoff = 0 selects the smallest window whose excluded terms carry a
// Gaussian factor below 1e-12 for any k within twice the first zone. The
// magnitude of the outermost included shell serves as the tail estimate;
// evaluation fails if it exceeds 1e-8 of the accumulated sum.
class ReciprocalDispersion2D {
 public:
  ReciprocalDispersion2D(double k_a, const Eigen::Vector3cd& polarization,
                         double a_x = 1.0, double a_y = 1.0, double a_ho = 0.1,
                         int g_cutoff = 0);

  Complex omega(double kx, double ky) const;
  double re_omega(double kx, double ky) const { return omega(kx, ky).real(); }

  double k_a() const { return k_a_; }
  double a_ho() const { return a_ho_; }
  int g_cutoff() const { return g_cutoff_; }
  const Eigen::Vector3cd& polarization() const { return polarization_; }

 private:
  double k_a_;
  Eigen::Vector3cd polarization_;
  double a_x_;
  double a_y_;
  double a_ho_;
  int g_cutoff_;
};

}  // namespace latticespread
