#include "latticespread/faddeeva.hpp"

#include <array>
#include <cmath>

namespace latticespread {
namespace {

// Degree of the rational expansion. 48 terms keep the upper-half-plane error
// near machine precision while the coefficient fit stays a one-off startup cost.
constexpr int kTerms = 48;

struct WeidemanTable {
  double L;
  std::array<double, kTerms> coeff;  // descending powers of Z

  WeidemanTable() {
    const int m = 2 * kTerms;
    const int m2 = 2 * m;
    L = std::sqrt(kTerms / std::sqrt(2.0));

    // Samples of exp(-t^2)(L^2 + t^2) at t = L tan(theta/2), theta on a
    // uniform grid; one zero sample closes the circle.
    std::array<double, 4 * kTerms> samples{};
    samples[0] = 0.0;
    for (int j = 1; j < m2; ++j) {
      const int k = j - m;  // k runs -m+1 .. m-1
      const double theta = k * kPi / m;
      const double t = L * std::tan(theta / 2.0);
      samples[j] = std::exp(-t * t) * (L * L + t * t);
    }

    // Real part of the shifted DFT; only harmonics 1..kTerms are needed.
    for (int h = 1; h <= kTerms; ++h) {
      double acc = 0.0;
      for (int n = 0; n < m2; ++n) {
        const int shifted = (n + m) % m2;
        acc += samples[shifted] * std::cos(kTwoPi * h * n / m2);
      }
      coeff[kTerms - h] = acc / m2;
    }
  }
};

const WeidemanTable& table() {
  static const WeidemanTable t;
  return t;
}

Complex upper_half_w(Complex z) {
  const WeidemanTable& t = table();
  const Complex iz(-z.imag(), z.real());
  const Complex denom = t.L - iz;
  const Complex zz = (t.L + iz) / denom;
  Complex p = 0.0;
  for (int j = 0; j < kTerms; ++j) p = p * zz + t.coeff[j];
  return 2.0 * p / (denom * denom) + (1.0 / std::sqrt(kPi)) / denom;
}

}  // namespace

Complex faddeeva_w(Complex z) {
  if (z.imag() >= 0.0) return upper_half_w(z);
  return 2.0 * std::exp(-z * z) - upper_half_w(-z);
}

Complex erf_complex(Complex z) {
  if (z.imag() == 0.0) return Complex(std::erf(z.real()), 0.0);
  if (z.real() >= 0.0) {
    const Complex iz(-z.imag(), z.real());
    return 1.0 - std::exp(-z * z) * faddeeva_w(iz);
  }
  return -erf_complex(-z);
}

Complex erfi(Complex z) {
  const Complex iz(-z.imag(), z.real());
  const Complex e = erf_complex(iz);
  return Complex(e.imag(), -e.real());
}

double erfcx(double x) {
  if (x >= 0.0) return faddeeva_w(Complex(0.0, x)).real();
  return 2.0 * std::exp(x * x) - erfcx(-x);
}

}  // namespace latticespread
