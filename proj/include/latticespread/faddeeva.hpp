#pragma once

#include "latticespread/numeric.hpp"

namespace latticespread {

// Faddeeva function w(z) = exp(-z^2) * erfc(-i z).
//
// Evaluated through a rational expansion in the Moebius-transformed variable
// Z = (L + i z)/(L - i z); the expansion coefficients are fitted once from
// samples of the function on the real line. Relative accuracy is ~1e-14 on
// the upper half plane; the lower half plane uses w(-z) = 2 exp(-z^2) - w(z),
// which inherits the intrinsic growth of w there.
Complex faddeeva_w(Complex z);

// erf for complex argument, via w. Exact std::erf is used on the real axis.
Complex erf_complex(Complex z);

// Imaginary error function erfi(z) = -i erf(i z).
Complex erfi(Complex z);

// Scaled complementary error function erfcx(x) = exp(x^2) erfc(x), real x.
double erfcx(double x);

}  // namespace latticespread
