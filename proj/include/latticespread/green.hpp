#pragma once

#include "latticespread/numeric.hpp"

namespace latticespread {

// Dyadic Green tensor of the vacuum electromagnetic field at wavenumber k_a,
// normalized so that the emitter decay rate equals one:
//
//   G(r) = e^{i k r} / (4 pi k^2 r^3) *
//          [ (k^2 r^2 + i k r - 1) I + (-k^2 r^2 - 3 i k r + 3) rhat rhat^T ]
//
// The longitudinal projection has no 1/r far-field term (the bracket sums to
// 2 - 2 i k r along rhat). Diverges at r = 0; Im G(r->0) = k/(6 pi) I.
Eigen::Matrix3cd green_tensor_free_space(const Eigen::Vector3d& r, double k_a);

// Projected dimensionless hopping between two emitters separated by r:
// J(r) = -(3 pi / k_a) d^dag G(r) d, in units of gamma_a.
Complex free_space_coupling(const Eigen::Vector3d& r, double k_a,
                            const Eigen::Vector3cd& polarization);

}  // namespace latticespread
