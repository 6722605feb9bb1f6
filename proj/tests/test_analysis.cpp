#include <cmath>
#include <vector>

#include "doctest.h"
#include "latticespread/analysis.hpp"
#include "latticespread/battery.hpp"
#include "latticespread/dispersion2d.hpp"

using latticespread::ClassifyParams;
using latticespread::kPi;
using latticespread::kTwoPi;
using latticespread::SectionProfile;
using latticespread::SpreadingLabel;

namespace {

double gaussian(double x, double center, double sigma) {
  const double u = (x - center) / sigma;
  return std::exp(-0.5 * u * u);
}

SectionProfile make_section(double time, const std::vector<double>& probability) {
  SectionProfile section;
  section.time = time;
  section.probability = probability;
  for (std::size_t i = 0; i < probability.size(); ++i) {
    section.coordinate.push_back(static_cast<double>(i) - 100.0);
  }
  return section;
}

}  // namespace

TEST_CASE("peak detection on canonical profiles") {
  SUBCASE("delta profile") {
    std::vector<double> profile(101, 0.0);
    profile[40] = 1.0;
    const auto peaks = latticespread::detect_peaks(profile, 7, 0.25);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].position == doctest::Approx(40.0));
    CHECK(peaks[0].height == doctest::Approx(1.0 / 7.0));
  }

  SUBCASE("symmetric double gaussian") {
    std::vector<double> profile;
    for (int i = 0; i < 161; ++i) {
      const double x = i - 80.0;
      profile.push_back(gaussian(x, -50.0, 3.0) + gaussian(x, 50.0, 3.0));
    }
    const auto peaks = latticespread::detect_peaks(profile, 5, 0.2);
    REQUIRE(peaks.size() == 2);
    CHECK(std::abs(peaks[0].position - 30.0) < 0.5);
    CHECK(std::abs(peaks[1].position - 130.0) < 0.5);
  }

  SUBCASE("flat profile collapses to the plateau center") {
    const std::vector<double> profile(51, 0.3);
    const auto peaks = latticespread::detect_peaks(profile, 7, 0.25);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].position == doctest::Approx(25.0));
  }

  SUBCASE("returned peaks are never closer than the window") {
    std::vector<double> profile;
    for (int i = 0; i < 80; ++i) {
      profile.push_back(gaussian(i, 30.0, 2.0) + 0.9 * gaussian(i, 35.0, 2.0));
    }
    const auto peaks = latticespread::detect_peaks(profile, 7, 0.1);
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0].position > 29.0);
    CHECK(peaks[0].position < 36.0);
  }

  SUBCASE("contract violations") {
    CHECK_THROWS_AS(latticespread::detect_peaks({}, 7, 0.25), latticespread::Error);
    CHECK_THROWS_AS(latticespread::detect_peaks({1.0, 2.0}, 4, 0.25),
                    latticespread::Error);
    CHECK_THROWS_AS(latticespread::detect_peaks({1.0, 2.0}, 7, 0.0),
                    latticespread::Error);
    CHECK_THROWS_AS(latticespread::detect_peaks({1.0, 2.0}, 7, 1.0),
                    latticespread::Error);
  }
}

TEST_CASE("classification of separating packets") {
  std::vector<SectionProfile> sections;
  for (double t : {5.0, 10.0, 15.0}) {
    std::vector<double> p(201);
    for (int i = 0; i < 201; ++i) {
      const double x = i - 100.0;
      const double edge = 5.0 + 2.0 * t;
      p[i] = gaussian(x, edge, 3.0) + gaussian(x, -edge, 3.0);
    }
    sections.push_back(make_section(t, p));
  }
  const auto result = latticespread::classify_spreading(sections);
  CHECK(result.label == SpreadingLabel::Split);
  CHECK(result.diagnostics.rate_floor > 0.05);
  CHECK(result.diagnostics.rate_floor < 0.2);

  double fastest = 0.0, slowest = 0.0;
  for (const auto& track : result.tracks) {
    if (track.points.size() < 2) continue;
    fastest = std::max(fastest, track.separation_rate);
    slowest = std::min(slowest, track.separation_rate);
  }
  CHECK(fastest == doctest::Approx(2.0).epsilon(0.02));
  CHECK(slowest == doctest::Approx(-2.0).epsilon(0.02));

  // Determinism: identical input, identical result.
  const auto again = latticespread::classify_spreading(sections);
  CHECK(again.label == result.label);
  REQUIRE(again.tracks.size() == result.tracks.size());
  for (std::size_t i = 0; i < again.tracks.size(); ++i) {
    CHECK(again.tracks[i].separation_rate == result.tracks[i].separation_rate);
  }
}

TEST_CASE("classification of a single spreading packet") {
  std::vector<SectionProfile> sections;
  for (double t : {5.0, 10.0, 15.0}) {
    std::vector<double> p(201);
    for (int i = 0; i < 201; ++i) {
      p[i] = gaussian(i - 100.0, 0.0, 2.0 + t);
    }
    sections.push_back(make_section(t, p));
  }
  const auto result = latticespread::classify_spreading(sections);
  CHECK(result.label == SpreadingLabel::Unsplit);
}

TEST_CASE("an expanding rippled plateau stays unsplit") {
  // Outward-moving interference ripples on a widening plateau: the edge
  // maxima recede at the front speed, but no valley ever separates them.
  std::vector<SectionProfile> sections;
  for (double t : {5.0, 10.0, 15.0}) {
    std::vector<double> p(201);
    for (int i = 0; i < 201; ++i) {
      const double x = i - 100.0;
      const double edge = 5.0 + 2.0 * t;
      const double base =
          std::abs(x) <= edge ? 1.0 : gaussian(std::abs(x), edge, 2.0);
      p[i] = base * (1.0 + 0.3 * std::cos(kTwoPi * (std::abs(x) - 2.0 * t) / 15.0));
    }
    sections.push_back(make_section(t, p));
  }
  const auto result = latticespread::classify_spreading(sections);
  CHECK(result.label == SpreadingLabel::Unsplit);

  // The velocity criterion alone would have split this profile: receding
  // tracks of both signs exist above the floor. The valley test is what
  // keeps the plateau connected.
  bool outward_right = false, outward_left = false;
  for (const auto& track : result.tracks) {
    if (track.points.size() < 2) continue;
    if (track.separation_rate > result.diagnostics.rate_floor) outward_right = true;
    if (track.separation_rate < -result.diagnostics.rate_floor) outward_left = true;
  }
  CHECK(outward_right);
  CHECK(outward_left);
}

TEST_CASE("a few-site split is resolved at the raw-profile scale") {
  // Slow packets only a handful of sites from the origin, with a narrow
  // static remnant between them: the window-sized valley cannot resolve the
  // gap, the raw profile can.
  std::vector<SectionProfile> sections;
  for (double t : {3.0, 6.0, 9.0}) {
    std::vector<double> p(201);
    for (int i = 0; i < 201; ++i) {
      const double x = i - 100.0;
      const double edge = (2.0 / 3.0) * t;
      p[i] = gaussian(x, edge, 0.9) + gaussian(x, -edge, 0.9) +
             0.8 * gaussian(x, 0.0, 0.5) * std::exp(-0.3 * t);
    }
    sections.push_back(make_section(t, p));
  }
  latticespread::ClassifyParams params;
  params.window = 3;
  const auto result = latticespread::classify_spreading(sections, params);
  CHECK(result.label == SpreadingLabel::Split);
}

TEST_CASE("a narrow raw-flat plateau stays unsplit") {
  // Same small scale, but the region between the edge crests is filled at
  // the raw level: connected spreading, not a split.
  std::vector<SectionProfile> sections;
  for (double t : {3.0, 6.0, 9.0}) {
    std::vector<double> p(201);
    for (int i = 0; i < 201; ++i) {
      const double x = i - 100.0;
      const double edge = (2.0 / 3.0) * t;
      const double interior = 0.5 * (std::tanh(edge + 1.0 - std::abs(x)) + 1.0);
      p[i] = interior + 0.4 * (gaussian(x, edge, 0.9) + gaussian(x, -edge, 0.9));
    }
    sections.push_back(make_section(t, p));
  }
  latticespread::ClassifyParams params;
  params.window = 3;
  const auto result = latticespread::classify_spreading(sections, params);
  CHECK(result.label == SpreadingLabel::Unsplit);
}

TEST_CASE("classification input validation") {
  std::vector<SectionProfile> two;
  two.push_back(make_section(1.0, std::vector<double>(201, 0.1)));
  two.push_back(make_section(2.0, std::vector<double>(201, 0.1)));
  CHECK_THROWS_AS(latticespread::classify_spreading(two), latticespread::Error);

  auto three = two;
  three.push_back(make_section(3.0, std::vector<double>(199, 0.1)));
  CHECK_THROWS_WITH_AS(latticespread::classify_spreading(three),
                       doctest::Contains("inconsistent"), latticespread::Error);

  auto unordered = two;
  unordered.push_back(make_section(1.5, std::vector<double>(201, 0.1)));
  CHECK_THROWS_AS(latticespread::classify_spreading(unordered), latticespread::Error);
}

TEST_CASE("moment integrals vanish on the smooth battery") {
  for (const auto& band : latticespread::battery_1d()) {
    for (int n : {1, 2}) {
      const auto moment = latticespread::moment_integrals(band, n);
      CHECK(moment.applicable);
      CHECK(std::abs(moment.value) < 1e-9);
    }
  }

  // The flat band integrates to exactly zero.
  const auto& flat = latticespread::battery_1d().front();
  REQUIRE(flat.flat());
  CHECK(latticespread::moment_integrals(flat, 1).value == 0.0);

  // Dispersions with singular points are outside the identity's hypotheses.
  latticespread::PowerLawDispersion1D coulomb(1.0);
  const auto flagged = latticespread::moment_integrals(coulomb, 1);
  CHECK_FALSE(flagged.applicable);

  CHECK_THROWS_AS(latticespread::moment_integrals(flat, 3), latticespread::Error);
}

TEST_CASE("moment quadrature converges fast on an analytic band") {
  latticespread::SmoothDispersion1D sharp(
      "sharp", false, [](double k) { return std::exp(2.0 * std::cos(k)); },
      [](double k) { return -2.0 * std::sin(k) * std::exp(2.0 * std::cos(k)); },
      [](double k) {
        const double e = std::exp(2.0 * std::cos(k));
        return e * (4.0 * std::sin(k) * std::sin(k) - 2.0 * std::cos(k));
      });
  const double coarse = std::abs(latticespread::moment_integrals(sharp, 2, 16).value);
  const double fine = std::abs(latticespread::moment_integrals(sharp, 2, 32).value);
  REQUIRE(coarse > 1e-14);
  // At least second order; the periodic trapezoid rule is in fact spectral.
  CHECK(fine <= coarse / std::pow(2.0, 1.8) + 1e-15);
}

TEST_CASE("every non-flat battery band has curvature zeros of both velocities") {
  for (const auto& band : latticespread::battery_1d()) {
    if (band.flat()) continue;
    const auto set = latticespread::find_inflection_points(band);
    CHECK(set.inflection_k.size() >= 2);
    bool positive = false, negative = false;
    for (const double v : set.group_velocity) {
      if (v > 0.0) positive = true;
      if (v < 0.0) negative = true;
    }
    CHECK(positive);
    CHECK(negative);
  }
}

TEST_CASE("torus curvature integral vanishes on the planar battery") {
  for (const auto& band : latticespread::battery_2d()) {
    const auto coarse = latticespread::gauss_bonnet_check(band.omega, 64);
    const auto fine = latticespread::gauss_bonnet_check(band.omega, 128);
    CHECK(coarse.applicable);
    CHECK(fine.applicable);
    CHECK(std::abs(fine.value) < 5e-3);
    // Halving the spacing reduces the residual (down to rounding noise).
    CHECK(std::abs(fine.value) <= 0.5 * std::abs(coarse.value) + 1e-12);
  }

  const auto constant = latticespread::gauss_bonnet_check(
      [](double, double) { return 0.7; }, 64);
  CHECK(constant.applicable);
  CHECK(constant.value == 0.0);

  // Non-periodic sampling leaves masked border nodes: flagged, not silently
  // integrated.
  const auto masked = latticespread::gauss_bonnet_check(latticespread::hessian_field(
      [](double kx, double ky) { return std::cos(kx) + std::cos(ky); }, 64, -kPi,
      kPi, false));
  CHECK_FALSE(masked.applicable);
}

TEST_CASE("sign census of curvature fields") {
  std::vector<double> nn_curvature, coulomb_curvature;
  latticespread::PowerLawDispersion1D coulomb(1.0);
  const int n = 256;
  for (int j = 0; j < n; ++j) {
    const double k = -kPi + (j + 0.5) * kTwoPi / n;
    nn_curvature.push_back(2.0 * std::cos(k));
    coulomb_curvature.push_back(coulomb.d2omega(k).real());
  }
  const auto nn = latticespread::sign_coverage(nn_curvature);
  CHECK(nn.has_positive);
  CHECK(nn.has_negative);
  CHECK(nn.zero_fraction == 0.0);

  const auto single = latticespread::sign_coverage(coulomb_curvature);
  CHECK(single.has_positive);
  CHECK_FALSE(single.has_negative);

  const auto zeros = latticespread::sign_coverage(std::vector<double>(32, 0.0));
  CHECK_FALSE(zeros.has_positive);
  CHECK_FALSE(zeros.has_negative);
  CHECK(zeros.zero_fraction == 1.0);
}
