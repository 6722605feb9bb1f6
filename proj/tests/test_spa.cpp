#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "latticespread/dispersion1d.hpp"
#include "latticespread/spa.hpp"

using latticespread::Complex;
using latticespread::kPi;
using latticespread::kTwoPi;

namespace {

// Nearest-neighbor band. Stationary points, curvature zeros, and the exact
// propagator psi_x(t) = (-i)^|x| J_|x|(2t) are all known in closed form.
class CosineBand : public latticespread::Dispersion1D {
 public:
  Complex omega(double k) const override { return {-2.0 * std::cos(k), 0.0}; }
  Complex domega(double k) const override { return {2.0 * std::sin(k), 0.0}; }
  Complex d2omega(double k) const override { return {2.0 * std::cos(k), 0.0}; }
  std::vector<double> singular_points() const override { return {}; }
  double guard_radius() const override { return 0.0; }
  std::string name() const override { return "cosine"; }
};

// Free-particle band omega = k^2 / (2m): exactly one stationary point per
// velocity and |psi|^2 = m / (2 pi t) independent of x.
class QuadraticBand : public latticespread::Dispersion1D {
 public:
  explicit QuadraticBand(double mass) : mass_(mass) {}
  Complex omega(double k) const override { return {k * k / (2.0 * mass_), 0.0}; }
  Complex domega(double k) const override { return {k / mass_, 0.0}; }
  Complex d2omega(double) const override { return {1.0 / mass_, 0.0}; }
  std::vector<double> singular_points() const override { return {}; }
  double guard_radius() const override { return 0.0; }
  std::string name() const override { return "quadratic"; }

 private:
  double mass_;
};

bool contains_near(const std::vector<double>& values, double target, double tol) {
  return std::any_of(values.begin(), values.end(),
                     [&](double v) { return std::abs(v - target) < tol; });
}

}  // namespace

TEST_CASE("stationary points of the nearest-neighbor band") {
  CosineBand band;

  auto at_rest = latticespread::stationary_points(band, 0.0);
  REQUIRE(at_rest.size() == 2);
  CHECK(contains_near(at_rest, 0.0, 1e-10));
  const bool has_edge_point =
      std::abs(std::abs(at_rest.front()) - kPi) < 1e-10 ||
      std::abs(std::abs(at_rest.back()) - kPi) < 1e-10;
  CHECK(has_edge_point);

  auto at_two = latticespread::stationary_points(band, 2.0);
  REQUIRE(at_two.size() == 1);
  CHECK(at_two[0] == doctest::Approx(kPi / 2).epsilon(1e-10));

  CHECK(latticespread::stationary_points(band, 3.0).empty());
  CHECK(latticespread::stationary_points(band, -2.5).empty());

  // Returned points satisfy the stationarity condition itself.
  for (double v : {0.3, -1.1, 1.9}) {
    for (double k : latticespread::stationary_points(band, v)) {
      CHECK(std::abs(band.domega(k).real() - v) < 1e-9);
    }
  }
}

TEST_CASE("stationary points avoid singular neighborhoods") {
  latticespread::PowerLawDispersion1D band(1.0);

  // Slope -cot(k/2) vanishes only at the zone edge.
  auto at_rest = latticespread::stationary_points(band, 0.0);
  REQUIRE(at_rest.size() == 1);
  CHECK(std::abs(std::abs(at_rest[0]) - kPi) < 1e-10);

  // Large velocities push the root toward the k = 0 singularity; the
  // returned point still satisfies the condition to full precision.
  auto fast = latticespread::stationary_points(band, 40.0);
  REQUIRE(fast.size() == 1);
  CHECK(std::abs(band.domega(fast[0]).real() - 40.0) < 1e-9 * 40.0);
}

TEST_CASE("quadratic band reproduces the free propagator modulus") {
  const double mass = 1.7;
  QuadraticBand band(mass);
  const double t = 3.0;

  for (double x : {0.0, 0.7, -2.4}) {
    const Complex amp = latticespread::spa_amplitude(band, x, t);
    CHECK(std::norm(amp) == doctest::Approx(mass / (kTwoPi * t)).epsilon(1e-12));
  }

  // 1/t envelope at fixed x/t.
  const double a1 = std::norm(latticespread::spa_amplitude(band, 1.0, 2.0));
  const double a2 = std::norm(latticespread::spa_amplitude(band, 2.0, 4.0));
  CHECK(a1 == doctest::Approx(2.0 * a2).epsilon(1e-12));
}

TEST_CASE("two stationary points interfere at the origin") {
  CosineBand band;
  const double t = 10.0;

  // k = 0 and the zone edge both arrive at x = 0; their phase difference is
  // 4t - pi/2, giving |psi|^2 = (1 + cos(4t - pi/2)) / (2 pi t).
  const Complex amp = latticespread::spa_amplitude(band, 0.0, t);
  const double expected = (1.0 + std::cos(4.0 * t - kPi / 2)) / (kTwoPi * t);
  CHECK(std::norm(amp) == doctest::Approx(expected).epsilon(1e-12));

  // The exact return probability is |J_0(2t)|^2; the quadratic expansion at
  // t = 10 is good to a few percent.
  const double exact = std::pow(std::cyl_bessel_j(0, 2.0 * t), 2);
  CHECK(std::abs(std::norm(amp) - exact) < 0.15 * exact);
}

TEST_CASE("waveform symmetry, support, and normalization") {
  CosineBand band;
  const double t = 12.0;
  std::vector<double> grid;
  for (int x = -40; x <= 40; ++x) grid.push_back(static_cast<double>(x));

  latticespread::SpaOptions options;
  options.normalization = latticespread::SpaNormalization::ToSurvival;
  options.survival = 1.0;
  const auto wave = latticespread::spa_waveform(band, grid, t, options);

  REQUIRE(wave.x.size() == grid.size());
  double total = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(wave.probability[i] >= 0.0);
    total += wave.probability[i];
    // Mirror symmetry of the even band.
    const std::size_t mirror = grid.size() - 1 - i;
    CHECK(wave.probability[i] == doctest::Approx(wave.probability[mirror]).epsilon(1e-9));
    if (std::abs(grid[i]) > 2.0 * t + 1.0) {
      CHECK(wave.probability[i] == 0.0);
      CHECK(wave.stationary_k[i].empty());
    }
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

  latticespread::SpaOptions bad = options;
  bad.survival = 1.5;
  CHECK_THROWS_AS(latticespread::spa_waveform(band, grid, t, bad),
                  latticespread::Error);
  CHECK_THROWS_AS(latticespread::spa_waveform(band, grid, 0.0, {}),
                  latticespread::Error);
}

TEST_CASE("caustics at the band inflection are flagged, not evaluated") {
  CosineBand band;
  const double t = 8.0;

  // x = 2t rides the inflection point k = pi/2 exactly.
  CHECK_THROWS_WITH_AS(latticespread::spa_amplitude(band, 2.0 * t, t),
                       doctest::Contains("caustic"), latticespread::Error);

  const auto wave = latticespread::spa_waveform(
      band, {0.0, 2.0 * t, 2.0 * t - 4.0}, t, {});
  CHECK(wave.caustic[0] == 0);
  CHECK(wave.caustic[1] == 1);
  CHECK(wave.probability[1] == 0.0);
  CHECK_FALSE(wave.stationary_k[1].empty());
  CHECK(wave.caustic[2] == 0);
  CHECK(wave.probability[2] > 0.0);
}

TEST_CASE("predicted peaks ride the curvature zeros") {
  const double t = 5.0;

  CosineBand cosine;
  auto peaks = latticespread::predicted_peaks(cosine, t);
  REQUIRE(peaks.size() == 2);
  CHECK(std::abs(peaks.front().k + kPi / 2) < 1e-9);
  CHECK(std::abs(peaks.back().k - kPi / 2) < 1e-9);
  CHECK(peaks.front().x == doctest::Approx(-2.0 * t).epsilon(1e-9));
  CHECK(peaks.back().x == doctest::Approx(2.0 * t).epsilon(1e-9));

  // 1/r^3 chain: curvature zeros at +-pi/3 moving at the known speed.
  latticespread::PowerLawDispersion1D cubic(3.0);
  auto cubic_peaks = latticespread::predicted_peaks(cubic, t);
  REQUIRE(cubic_peaks.size() == 2);
  for (const auto& peak : cubic_peaks) {
    CHECK(std::abs(std::abs(peak.k) - kPi / 3) < 1e-9);
    CHECK(std::abs(peak.velocity) == doctest::Approx(2.0298832128193).epsilon(1e-9));
    CHECK(peak.x == doctest::Approx(peak.velocity * t).epsilon(1e-12));
  }

  // 1/r chain: curvature +1/(2 sin^2(k/2)) never vanishes.
  latticespread::PowerLawDispersion1D coulomb(1.0);
  CHECK(latticespread::predicted_peaks(coulomb, t).empty());

  // Waveguide band: curvature is single-signed on each side of the light
  // line, so no ballistic peak is predicted at all.
  latticespread::WaveguideDispersion1D waveguide(0.3 * kPi);
  CHECK(latticespread::predicted_peaks(waveguide, t).empty());
}

TEST_CASE("subradiant-only search stays beyond the light line") {
  const double k_a = 0.3 * kPi;
  latticespread::FreeSpaceChainDispersion1D chain(k_a, Eigen::Vector3cd(0, 0, 1));

  const auto full = latticespread::stationary_points(chain, 0.0);
  const auto sub = latticespread::stationary_points(chain, 0.0, 4096, true);
  CHECK(full.size() > sub.size());
  REQUIRE(!sub.empty());
  for (double k : sub) {
    CHECK(std::abs(k) > k_a);
    CHECK(contains_near(full, k, 1e-9));
  }
  // The radiant stationary point at k = 0 is present only in the full search.
  CHECK(contains_near(full, 0.0, 1e-9));
  CHECK_FALSE(contains_near(sub, 0.0, 1e-9));
}
