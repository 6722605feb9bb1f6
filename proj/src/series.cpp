#include "latticespread/series.hpp"

#include <cmath>
#include <vector>

namespace latticespread {

namespace {

using LComplex = std::complex<long double>;

// Core transformation in extended precision. Differencing amplifies the
// absolute rounding noise of the coefficient samples by 2^parts and every
// fold divides by (1 - z), so the sample/triangle arithmetic runs in long
// double and parts must shrink as z approaches 1 (the caller's job).
template <typename Coeff>
LComplex accelerated_sum_impl(const Coeff& c, long double theta, long long n, int m) {
  const int k_tail = 48;
  const LComplex z = std::polar<long double>(1.0L, theta);

  LComplex direct(0.0L, 0.0L);
  LComplex zp(1.0L, 0.0L);
  for (long long r = 1; r <= n; ++r) {
    if (r % 4096 == 0) {
      zp = std::polar<long double>(1.0L, theta * static_cast<long double>(r));
    } else {
      zp *= z;
    }
    direct += zp * c(static_cast<long double>(r));
  }

  // vals[i] starts as c(n+1+i); after pass j it holds the j-th backward
  // difference on the same grid (valid for i >= j).
  std::vector<long double> vals(static_cast<std::size_t>(m + k_tail));
  for (int i = 0; i < m + k_tail; ++i) {
    vals[static_cast<std::size_t>(i)] = c(static_cast<long double>(n + 1 + i));
  }

  std::vector<long double> boundary(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    boundary[static_cast<std::size_t>(j)] = vals[static_cast<std::size_t>(j)];
    for (int i = m + k_tail - 1; i >= j + 1; --i) {
      vals[static_cast<std::size_t>(i)] -= vals[static_cast<std::size_t>(i - 1)];
    }
  }

  // Deepest level: sum_{r >= n+1+m} z^r (Delta^m c)(r), truncated after
  // k_tail terms; polynomial coefficients difference to exactly zero here.
  LComplex tail(0.0L, 0.0L);
  for (int i = m; i < m + k_tail; ++i) {
    const long double v = vals[static_cast<std::size_t>(i)];
    if (v == 0.0L) continue;
    tail += std::polar<long double>(1.0L, theta * static_cast<long double>(n + 1 + i)) * v;
  }

  // Fold back: T_j = (z^{n+1+j} b_j + T_{j+1}) / (1 - z).
  const LComplex one_minus_z = LComplex(1.0L, 0.0L) - z;
  for (int j = m - 1; j >= 0; --j) {
    const LComplex lead = std::polar<long double>(1.0L, theta * static_cast<long double>(n + 1 + j)) *
                          boundary[static_cast<std::size_t>(j)];
    tail = (lead + tail) / one_minus_z;
  }

  return direct + tail;
}

Complex narrowed(LComplex v, const char* stage) {
  const Complex out(static_cast<double>(v.real()), static_cast<double>(v.imag()));
  require(is_finite(out), stage, "sum produced a non-finite value");
  return out;
}

}  // namespace

Complex accelerated_unit_circle_sum(const std::function<double(double)>& c, Complex z,
                                    int n_direct, int parts) {
  require(std::abs(std::abs(z) - 1.0) < 1e-12, "series", "z must lie on the unit circle");
  require(std::abs(1.0 - z) > 1e-6, "series", "z = 1 is singular for this sum");
  require(n_direct >= 1 && parts >= 1, "series", "need n_direct >= 1 and parts >= 1");

  const long double theta = std::arg(z);
  const auto coeff = [&c](long double r) -> long double {
    return c(static_cast<double>(r));
  };
  return narrowed(accelerated_sum_impl(coeff, theta, n_direct, parts), "series");
}

Complex conditional_power_sum(double s, Complex z) {
  require(std::abs(std::abs(z) - 1.0) < 1e-12, "series", "z must lie on the unit circle");
  const double gap = std::abs(1.0 - z);
  require(gap > 2e-3, "series", "z too close to 1 for reliable summation");

  const bool polynomial = (s <= 0.0) && (s == std::floor(s));
  long long n_direct;
  int parts;
  if (polynomial) {
    // Differences of r^{-s} terminate exactly after degree -s + 1 passes, so
    // a short direct stretch suffices and the result is the Abel value.
    n_direct = 8;
    parts = static_cast<int>(-s) + 1;
  } else if (gap >= 0.3) {
    parts = 8;
    n_direct = 3000;
  } else if (gap >= 0.03) {
    parts = 6;
    n_direct = std::max<long long>(3000, static_cast<long long>(std::ceil(240.0 / gap)));
  } else {
    parts = 4;
    n_direct = static_cast<long long>(std::ceil(160.0 / gap));
  }
  const long double theta = std::arg(z);
  const long double sl = s;
  const auto coeff = [sl](long double r) -> long double { return std::pow(r, -sl); };
  return narrowed(accelerated_sum_impl(coeff, theta, n_direct, parts), "series");
}

}  // namespace latticespread
