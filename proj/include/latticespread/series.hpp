#pragma once

#include <functional>

#include "latticespread/numeric.hpp"

namespace latticespread {

// Unit-circle coefficient sums S_s(z) = sum_{r >= 1} z^r r^{-s} for |z| = 1,
// z away from 1. Direct partial summation is followed by an iterated
// summation-by-parts tail: each pass trades one power of 1/(1-z) for a finite
// difference of the coefficient sequence. Coefficients that are polynomials
// in r (s <= 0) difference to zero, so the divergent cases terminate at their
// Abel-regularized values, which are the physically meaningful ones for
// dispersion derivatives away from singular points.
//
// Accuracy is ~1e-9 or better once |1 - z| >~ 5e-3; arguments with
// |1 - z| <= 2e-3 are rejected, so callers mask the singular points where
// z -> 1.
Complex conditional_power_sum(double s, Complex z);

// Same transformation applied to a general smooth coefficient sequence:
// sum_{r >= 1} z^r c(r) with n_direct explicit terms and a parts-fold
// accelerated tail.
Complex accelerated_unit_circle_sum(const std::function<double(double)>& c, Complex z,
                                    int n_direct, int parts);

}  // namespace latticespread
