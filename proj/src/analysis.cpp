#include "latticespread/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace latticespread {

namespace {

// Moving average with a truncated window at the edges.
std::vector<double> smooth_profile(const std::vector<double>& profile, int window) {
  const int n = static_cast<int>(profile.size());
  const int r = (window - 1) / 2;
  std::vector<double> smooth(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - r);
    const int hi = std::min(n - 1, i + r);
    double acc = 0.0;
    for (int j = lo; j <= hi; ++j) acc += profile[j];
    smooth[i] = acc / (hi - lo + 1);
  }
  return smooth;
}

// Least-squares slope of y against t.
double fit_slope(const std::vector<double>& t, const std::vector<double>& y) {
  const std::size_t n = t.size();
  double mt = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mt += t[i];
    my += y[i];
  }
  mt /= n;
  my /= n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    num += (t[i] - mt) * (y[i] - my);
    den += (t[i] - mt) * (t[i] - mt);
  }
  require(den > 0.0, "analysis", "degenerate time axis in slope fit");
  return num / den;
}

// Radius around coordinate zero holding the given probability share.
double containment_radius(const SectionProfile& section, double share) {
  std::vector<std::size_t> order(section.probability.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(section.coordinate[a]) < std::abs(section.coordinate[b]);
  });
  double total = 0.0;
  for (const double p : section.probability) total += p;
  if (total <= 0.0) return 0.0;
  double acc = 0.0;
  for (const std::size_t i : order) {
    acc += section.probability[i];
    if (acc >= share * total) return std::abs(section.coordinate[i]);
  }
  return std::abs(section.coordinate[order.back()]);
}

}  // namespace

std::vector<Peak> detect_peaks(const std::vector<double>& profile, int window,
                               double threshold_frac) {
  require_usage(!profile.empty(), "analysis", "peak detection needs a profile");
  require_usage(window >= 1 && window % 2 == 1, "analysis",
                "smoothing window must be odd and positive");
  require_usage(threshold_frac > 0.0 && threshold_frac < 1.0, "analysis",
                "threshold fraction must lie in (0, 1)");
  const std::vector<double> s = smooth_profile(profile, window);
  const int n = static_cast<int>(s.size());
  const double cut = threshold_frac * *std::max_element(s.begin(), s.end());

  std::vector<Peak> peaks;
  // Runs of equal smoothed values: a run strictly above both neighbors (or
  // touching an end) is one maximum at the run center.
  for (int i = 0; i < n;) {
    int j = i;
    while (j + 1 < n && s[j + 1] == s[i]) ++j;
    const bool rises = i == 0 || s[i - 1] < s[i];
    const bool falls = j == n - 1 || s[j + 1] < s[j];
    if (rises && falls && s[i] >= cut) {
      double position = 0.5 * (i + j);
      if (i == j && i > 0 && i < n - 1) {
        const double den = s[i - 1] - 2.0 * s[i] + s[i + 1];
        if (den < 0.0) position = i + 0.5 * (s[i - 1] - s[i + 1]) / den;
      }
      peaks.push_back({position, s[i]});
    }
    i = j + 1;
  }

  // Merge neighbors closer than the window, keeping the higher (leftmost on
  // ties); repeat until stable so chains collapse deterministically.
  bool merged = true;
  while (merged && peaks.size() > 1) {
    merged = false;
    for (std::size_t i = 0; i + 1 < peaks.size(); ++i) {
      if (peaks[i + 1].position - peaks[i].position < window) {
        const std::size_t drop = peaks[i + 1].height > peaks[i].height ? i : i + 1;
        peaks.erase(peaks.begin() + static_cast<std::ptrdiff_t>(drop));
        merged = true;
        break;
      }
    }
  }
  return peaks;
}

ClassificationResult classify_spreading(const std::vector<SectionProfile>& sections,
                                        const ClassifyParams& params) {
  require_usage(sections.size() >= 3, "analysis",
                "classification needs at least three snapshot times");
  const std::size_t width = sections.front().probability.size();
  require_usage(width >= 2, "analysis", "profiles are too short to classify");
  for (const auto& section : sections) {
    require(section.probability.size() == width &&
                section.coordinate.size() == width,
            "analysis", "inconsistent snapshot lengths");
  }
  for (std::size_t s = 1; s < sections.size(); ++s) {
    require_usage(sections[s].time > sections[s - 1].time, "analysis",
                  "snapshot times must increase");
  }
  const double spacing =
      std::abs(sections.front().coordinate[1] - sections.front().coordinate[0]);

  // Front velocity from the growth of the 99.5%-probability radius.
  std::vector<double> times, radii;
  for (const auto& section : sections) {
    times.push_back(section.time);
    radii.push_back(containment_radius(section, 0.995));
  }
  const double front_velocity = std::max(fit_slope(times, radii), 0.0);
  const double rate_floor =
      params.rate_floor > 0.0 ? params.rate_floor : 0.05 * front_velocity;

  // Track peaks across snapshots by nearest position within the gate.
  struct OpenTrack {
    std::vector<TrackPoint> points;
  };
  std::vector<OpenTrack> tracks;
  for (std::size_t s = 0; s < sections.size(); ++s) {
    const auto& section = sections[s];
    const auto found = detect_peaks(section.probability, params.window,
                                    params.threshold_frac);
    std::vector<TrackPoint> incoming;
    for (const auto& peak : found) {
      const double x = section.coordinate.front() + peak.position * spacing;
      incoming.push_back({section.time, x, peak.height});
    }
    if (s == 0) {
      for (const auto& point : incoming) tracks.push_back({{point}});
      continue;
    }
    const double dt = section.time - sections[s - 1].time;
    const double gate = front_velocity * dt + 2.0 * params.window * spacing;
    // Greedy assignment; taller peaks claim their nearest track first, so a
    // dominant packet keeps its track even when a subsidiary ripple sits
    // closer to the previous position than the packet's new position does.
    struct Pair {
      double height;
      double distance;
      std::size_t track, peak;
    };
    std::vector<Pair> pairs;
    for (std::size_t ti = 0; ti < tracks.size(); ++ti) {
      if (tracks[ti].points.back().time != sections[s - 1].time) continue;
      for (std::size_t pi = 0; pi < incoming.size(); ++pi) {
        const double d = std::abs(tracks[ti].points.back().position -
                                  incoming[pi].position);
        if (d <= gate) pairs.push_back({incoming[pi].height, d, ti, pi});
      }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
      if (a.height != b.height) return a.height > b.height;
      if (a.distance != b.distance) return a.distance < b.distance;
      if (a.track != b.track) return a.track < b.track;
      return a.peak < b.peak;
    });
    std::vector<std::uint8_t> track_used(tracks.size(), 0), peak_used(incoming.size(), 0);
    for (const auto& pair : pairs) {
      if (track_used[pair.track] || peak_used[pair.peak]) continue;
      track_used[pair.track] = 1;
      peak_used[pair.peak] = 1;
      tracks[pair.track].points.push_back(incoming[pair.peak]);
    }
    for (std::size_t pi = 0; pi < incoming.size(); ++pi) {
      if (!peak_used[pi]) tracks.push_back({{incoming[pi]}});
    }
  }

  ClassificationResult result;
  result.diagnostics = {params.window, params.threshold_frac, rate_floor,
                        params.valley_frac, front_velocity};
  for (const auto& track : tracks) {
    PeakTrack out;
    out.points = track.points;
    if (track.points.size() >= 2) {
      std::vector<double> t, x;
      for (const auto& point : track.points) {
        t.push_back(point.time);
        x.push_back(point.position);
      }
      out.separation_rate = fit_slope(t, x);
    }
    result.tracks.push_back(std::move(out));
  }

  // Split: some pair of multi-point tracks recedes in opposite directions
  // above the floor, with the profile between them dropping well below both
  // peaks at the last time they share.
  result.label = SpreadingLabel::Unsplit;
  for (std::size_t a = 0; a < result.tracks.size() && result.label == SpreadingLabel::Unsplit; ++a) {
    const auto& right = result.tracks[a];
    if (right.points.size() < 2 || right.separation_rate <= rate_floor) continue;
    for (std::size_t b = 0; b < result.tracks.size(); ++b) {
      const auto& left = result.tracks[b];
      if (left.points.size() < 2 || left.separation_rate >= -rate_floor) continue;
      // Last common time of the two tracks.
      const TrackPoint* rp = nullptr;
      const TrackPoint* lp = nullptr;
      for (auto ri = right.points.rbegin(); ri != right.points.rend() && !rp; ++ri) {
        for (auto li = left.points.rbegin(); li != left.points.rend(); ++li) {
          if (li->time == ri->time) {
            rp = &*ri;
            lp = &*li;
            break;
          }
        }
      }
      if (!rp) continue;
      const SectionProfile* section = nullptr;
      for (const auto& candidate : sections) {
        if (candidate.time == rp->time) section = &candidate;
      }
      const double x_lo = std::min(lp->position, rp->position);
      const double x_hi = std::max(lp->position, rp->position);
      // The valley is only meaningful at a smoothing scale that can resolve
      // the claimed packets; when they sit within a few windows of each
      // other, re-measure on a finer window (down to the raw profile).
      int valley_window = params.window;
      const double resolvable = (x_hi - x_lo) / (4.0 * spacing);
      if (resolvable < valley_window) {
        valley_window = std::max(1, static_cast<int>(std::floor(resolvable)));
        if (valley_window % 2 == 0) --valley_window;
      }
      const auto smooth = smooth_profile(section->probability, valley_window);
      const double reach = params.window * spacing;
      double valley = std::numeric_limits<double>::infinity();
      double crest_left = 0.0, crest_right = 0.0;
      for (std::size_t i = 0; i < width; ++i) {
        const double x = section->coordinate[i];
        if (x > x_lo && x < x_hi) valley = std::min(valley, smooth[i]);
        if (std::abs(x - lp->position) <= reach) crest_left = std::max(crest_left, smooth[i]);
        if (std::abs(x - rp->position) <= reach) crest_right = std::max(crest_right, smooth[i]);
      }
      if (valley < params.valley_frac * std::min(crest_left, crest_right)) {
        result.label = SpreadingLabel::Split;
        break;
      }
    }
  }
  return result;
}

MomentIntegral moment_integrals(const Dispersion1D& dispersion, int n, int n_points) {
  require_usage(n == 1 || n == 2, "analysis", "moment order must be 1 or 2");
  require_usage(n_points >= 16, "analysis", "moment grid needs at least 16 points");
  if (!dispersion.singular_points().empty()) {
    return {std::numeric_limits<double>::quiet_NaN(), false};
  }
  const double h = kTwoPi / n_points;
  double acc = 0.0;
  for (int j = 0; j < n_points; ++j) {
    const double k = -kPi + (j + 0.5) * h;
    acc += n == 1 ? dispersion.domega(k).real() : dispersion.d2omega(k).real();
  }
  return {acc * h / kTwoPi, true};
}

GaussBonnetResult gauss_bonnet_check(const HessianField& field) {
  double acc = 0.0;
  bool applicable = true;
  const std::size_t size = field.det.size();
  for (std::size_t i = 0; i < size; ++i) {
    if (!field.valid[i]) {
      applicable = false;
      continue;
    }
    const double g2 = field.gx[i] * field.gx[i] + field.gy[i] * field.gy[i];
    acc += field.det[i] / std::pow(1.0 + g2, 1.5);
  }
  return {acc * field.spacing * field.spacing / kTwoPi, applicable};
}

GaussBonnetResult gauss_bonnet_check(const std::function<double(double, double)>& re_omega,
                                     int n_points) {
  require_usage(n_points >= 16, "analysis", "curvature grid needs at least 16 points");
  return gauss_bonnet_check(hessian_field(re_omega, n_points, -kPi, kPi, true));
}

SignCoverage sign_coverage(const std::vector<double>& field) {
  double peak = 0.0;
  for (const double v : field) peak = std::max(peak, std::abs(v));
  const double tol = 1e-10 * peak;
  SignCoverage coverage{false, false, 0.0};
  if (field.empty()) return coverage;
  std::size_t zeros = 0;
  for (const double v : field) {
    if (v > tol) coverage.has_positive = true;
    else if (v < -tol) coverage.has_negative = true;
    else ++zeros;
  }
  coverage.zero_fraction = static_cast<double>(zeros) / static_cast<double>(field.size());
  return coverage;
}

}  // namespace latticespread
