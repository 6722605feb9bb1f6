#include "latticespread/green.hpp"

#include <cmath>

namespace latticespread {

Eigen::Matrix3cd green_tensor_free_space(const Eigen::Vector3d& r, double k_a) {
  const double dist = r.norm();
  require(dist > 0.0, "green", "Green tensor is singular at zero separation");
  require(k_a > 0.0, "green", "wavenumber must be positive");

  const double kr = k_a * dist;
  const Complex phase = std::exp(Complex(0.0, kr));
  const Complex scale = phase / (4.0 * kPi * k_a * k_a * dist * dist * dist);
  const Complex iso = Complex(kr * kr - 1.0, kr);            // k^2 r^2 + i k r - 1
  const Complex dyad = Complex(3.0 - kr * kr, -3.0 * kr);    // -k^2 r^2 - 3 i k r + 3

  const Eigen::Vector3d rhat = r / dist;
  Eigen::Matrix3cd g = iso * Eigen::Matrix3cd::Identity();
  g.noalias() += dyad * (rhat * rhat.transpose()).cast<Complex>();
  return scale * g;
}

Complex free_space_coupling(const Eigen::Vector3d& r, double k_a,
                            const Eigen::Vector3cd& polarization) {
  const Eigen::Matrix3cd g = green_tensor_free_space(r, k_a);
  const Complex projected = polarization.adjoint() * g * polarization;
  return -(3.0 * kPi / k_a) * projected;
}

}  // namespace latticespread
