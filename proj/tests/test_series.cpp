#include <cmath>
#include <complex>

#include "doctest.h"
#include "latticespread/series.hpp"

using latticespread::Complex;
using latticespread::kPi;

namespace {

Complex unit(double k) { return std::polar(1.0, k); }

// Reference: plain long-double partial sum for absolutely convergent cases.
Complex brute_power_sum(double s, double k, long long n) {
  long double re = 0.0L;
  long double im = 0.0L;
  for (long long r = 1; r <= n; ++r) {
    const long double w = std::pow(static_cast<long double>(r), static_cast<long double>(-s));
    re += std::cos(static_cast<long double>(k) * r) * w;
    im += std::sin(static_cast<long double>(k) * r) * w;
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

}  // namespace

TEST_CASE("alternating sums match zeta constants") {
  const Complex z = unit(kPi);
  const Complex s2 = latticespread::conditional_power_sum(2.0, z);
  CHECK(s2.real() == doctest::Approx(-kPi * kPi / 12.0).epsilon(1e-12));
  CHECK(std::abs(s2.imag()) < 1e-12);

  const double zeta3 = 1.2020569031595943;
  const Complex s3 = latticespread::conditional_power_sum(3.0, z);
  CHECK(s3.real() == doctest::Approx(-0.75 * zeta3).epsilon(1e-12));
  CHECK(std::abs(s3.imag()) < 1e-12);
}

TEST_CASE("s = 1 reproduces -log(1 - z)") {
  for (const double k : {0.2, kPi / 3.0, 1.0, 2.0, kPi - 0.05, 4.5, 6.0}) {
    const Complex z = unit(k);
    const Complex got = latticespread::conditional_power_sum(1.0, z);
    const Complex want = -std::log(1.0 - z);
    CHECK(std::abs(got - want) < 1e-10);
  }
}

TEST_CASE("s = 2 matches the Bernoulli closed form on (0, 2pi)") {
  for (const double k : {0.3, kPi / 3.0, 2.2, kPi, 5.1}) {
    const Complex got = latticespread::conditional_power_sum(2.0, unit(k));
    const double want_re = kPi * kPi / 6.0 - kPi * k / 2.0 + k * k / 4.0;
    CHECK(got.real() == doctest::Approx(want_re).epsilon(1e-10));
  }
}

TEST_CASE("Clausen value at pi/3") {
  const Complex s2 = latticespread::conditional_power_sum(2.0, unit(kPi / 3.0));
  CHECK(s2.imag() == doctest::Approx(1.0149416064096536).epsilon(1e-10));
  CHECK(s2.real() == doctest::Approx(kPi * kPi / 36.0).epsilon(1e-10));
}

TEST_CASE("divergent cases land on their Abel values") {
  for (const double k : {0.4, 1.3, kPi / 2.0, 2.8, kPi}) {
    const Complex z = unit(k);
    const Complex s0 = latticespread::conditional_power_sum(0.0, z);
    CHECK(std::abs(s0 - z / (1.0 - z)) < 1e-12);

    const Complex sm1 = latticespread::conditional_power_sum(-1.0, z);
    const Complex want = z / ((1.0 - z) * (1.0 - z));
    CHECK(std::abs(sm1 - want) < 1e-11 * (1.0 + std::abs(want)));
  }
}

TEST_CASE("convergent sums agree with brute-force long double") {
  for (const double k : {0.7, 2.0, 4.0}) {
    const Complex got3 = latticespread::conditional_power_sum(3.0, unit(k));
    const Complex ref3 = brute_power_sum(3.0, k, 2'000'000);
    CHECK(std::abs(got3 - ref3) < 1e-10);

    const Complex got15 = latticespread::conditional_power_sum(1.5, unit(k));
    const Complex ref15 = brute_power_sum(1.5, k, 10'000'000);
    CHECK(std::abs(got15 - ref15) < 1e-8);
  }
}

TEST_CASE("near-singular arguments stay accurate") {
  const double k = 0.01;  // |1 - z| ~ 0.01
  const Complex got = latticespread::conditional_power_sum(1.0, unit(k));
  const Complex want = -std::log(1.0 - unit(k));
  CHECK(std::abs(got - want) < 1e-9);
}

TEST_CASE("generic coefficient sequences are accepted") {
  const Complex z = unit(1.1);
  const auto c = [](double r) { return 1.0 / (r + 1.0); };
  const Complex got = latticespread::accelerated_unit_circle_sum(c, z, 3000, 8);
  const Complex want = (-std::log(1.0 - z) - z) / z;
  CHECK(std::abs(got - want) < 1e-10);
}

TEST_CASE("z = 1 and off-circle arguments are rejected") {
  CHECK_THROWS_AS(latticespread::conditional_power_sum(2.0, Complex(1.0, 0.0)),
                  latticespread::Error);
  CHECK_THROWS_AS(latticespread::conditional_power_sum(2.0, Complex(0.5, 0.0)),
                  latticespread::Error);
}
