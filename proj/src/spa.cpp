#include "latticespread/spa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace latticespread {

namespace {

constexpr double kCausticCurvature = 1e-10;
constexpr double kCausticDistance = 1e-6;

// Everything the per-velocity root search needs, built once per dispersion
// so a waveform sweep over many x reuses it. Slope samples sit on an offset
// grid (keeping them off k = 0 and +-pi, where exact roots and jumps like to
// live) and are NaN where the dispersion is singular or excluded by the
// subradiant restriction.
struct StationaryContext {
  std::vector<double> k;
  std::vector<double> d1;
  std::vector<double> singular;
  StationarySet extrema;  // curvature zeros, for tangential roots
  double k_light = 0.0;
  bool subradiant_only = false;
};

StationaryContext make_context(const Dispersion1D& dispersion, int n_scan,
                               bool subradiant_only) {
  require_usage(n_scan >= 64, "spa", "scan grid needs at least 64 points");
  StationaryContext ctx;
  ctx.k.resize(n_scan);
  ctx.d1.assign(n_scan, std::numeric_limits<double>::quiet_NaN());
  ctx.singular = dispersion.singular_points();
  ctx.extrema = find_inflection_points(dispersion, n_scan);
  ctx.k_light = dispersion.light_wavenumber();
  ctx.subradiant_only = subradiant_only;
  const double h = kTwoPi / n_scan;
  const double guard = dispersion.guard_radius();
  for (int j = 0; j < n_scan; ++j) {
    const double k = -kPi + (j + 0.5) * h;
    ctx.k[j] = k;
    if (subradiant_only && std::abs(k) <= ctx.k_light) continue;
    bool excluded = false;
    for (const double s : ctx.singular) {
      if (std::abs(wrap_to_zone(k - s)) <= guard) {
        excluded = true;
        break;
      }
    }
    if (excluded) continue;
    ctx.d1[j] = dispersion.domega(k).real();
  }
  return ctx;
}

// Bisection of d1(k) - v on a bracket with opposite signs. The bracket may
// extend past pi (wrap interval); evaluation wraps back into the zone.
double bisect_slope(const Dispersion1D& dispersion, double lo, double hi,
                    double f_lo, double v) {
  for (int iter = 0; iter < 64 && hi - lo > 1e-14; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = dispersion.domega(wrap_to_zone(mid)).real() - v;
    if (f_mid == 0.0) return mid;
    if ((f_lo < 0.0) == (f_mid < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// A refined midpoint is a root only if the residual there is small on the
// local curvature scale; a jump discontinuity straddled by the bracket
// leaves an O(jump) residual and is rejected.
bool genuine_root(const Dispersion1D& dispersion, double k, double v, double width) {
  const double residual = std::abs(dispersion.domega(k).real() - v);
  const double curvature = std::abs(dispersion.d2omega(k).real());
  const double tolerance =
      std::max(1e-9 * std::max(1.0, std::abs(v)), 2.0 * curvature * width);
  return residual <= tolerance;
}

double wrap_distance(double a, double b) { return std::abs(wrap_to_zone(a - b)); }

std::vector<double> find_roots(const Dispersion1D& dispersion,
                               const StationaryContext& ctx, double v) {
  require_usage(std::isfinite(v), "spa", "target velocity must be finite");
  const int n = static_cast<int>(ctx.k.size());
  std::vector<double> roots;
  for (int j = 0; j < n; ++j) {
    const int j_next = (j + 1) % n;
    const double f_lo = ctx.d1[j] - v;
    const double f_hi = ctx.d1[j_next] - v;
    if (std::isnan(f_lo) || std::isnan(f_hi)) continue;
    if (f_lo == 0.0) {
      roots.push_back(ctx.k[j]);
      continue;
    }
    if ((f_lo < 0.0) == (f_hi < 0.0)) continue;
    const double lo = ctx.k[j];
    const double hi = j_next == 0 ? ctx.k[0] + kTwoPi : ctx.k[j_next];
    // A pole flips the sign too; never bisect into a singular point.
    bool blocked = false;
    for (const double s : ctx.singular) {
      if ((s > lo && s < hi) || (s + kTwoPi > lo && s + kTwoPi < hi)) {
        blocked = true;
        break;
      }
    }
    if (blocked) continue;
    const double mid = bisect_slope(dispersion, lo, hi, f_lo, v);
    const double k = wrap_to_zone(mid);
    if (genuine_root(dispersion, k, v, 1e-14)) roots.push_back(k);
  }
  // Tangential roots: v exactly at an extremum of the slope produces no sign
  // change, but the extremum is a curvature zero already refined.
  for (std::size_t i = 0; i < ctx.extrema.inflection_k.size(); ++i) {
    const double k = ctx.extrema.inflection_k[i];
    if (ctx.subradiant_only && std::abs(k) <= ctx.k_light) continue;
    if (std::abs(ctx.extrema.group_velocity[i] - v) <=
        1e-9 * std::max(1.0, std::abs(v))) {
      roots.push_back(k);
    }
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (const double k : roots) {
    if (!unique.empty() && wrap_distance(k, unique.back()) < 1e-9) continue;
    unique.push_back(k);
  }
  if (unique.size() > 1 && wrap_distance(unique.front(), unique.back()) < 1e-9) {
    unique.pop_back();
  }
  return unique;
}

Complex spa_sum(const Dispersion1D& dispersion, const std::vector<double>& roots,
                double x, double t) {
  Complex total(0.0, 0.0);
  for (const double k : roots) {
    const DispersionSample s = dispersion.evaluate(k);
    const double curvature = s.d2.real();
    if (std::abs(curvature) < kCausticCurvature) {
      std::ostringstream msg;
      msg << "stationary point k = " << k
          << " is a caustic: |curvature| = " << std::abs(curvature);
      throw Error(ErrorCategory::Runtime, "spa", msg.str());
    }
    const double sign = curvature > 0.0 ? 1.0 : -1.0;
    const double phase = k * x - s.omega.real() * t - 0.25 * kPi * sign;
    const double modulus =
        std::exp(s.omega.imag() * t) / std::sqrt(kTwoPi * t * std::abs(curvature));
    total += std::polar(modulus, phase);
  }
  return total;
}

}  // namespace

std::vector<double> stationary_points(const Dispersion1D& dispersion, double v,
                                      int n_scan, bool subradiant_only) {
  const StationaryContext ctx = make_context(dispersion, n_scan, subradiant_only);
  return find_roots(dispersion, ctx, v);
}

Complex spa_amplitude(const Dispersion1D& dispersion, double x, double t, int n_scan) {
  require_usage(t > 0.0, "spa", "time must be positive");
  const StationaryContext ctx = make_context(dispersion, n_scan, false);
  return spa_sum(dispersion, find_roots(dispersion, ctx, x / t), x, t);
}

SpaWaveform spa_waveform(const Dispersion1D& dispersion, std::vector<double> x,
                         double t, const SpaOptions& options) {
  require_usage(t > 0.0, "spa", "time must be positive");
  if (options.normalization == SpaNormalization::ToSurvival) {
    require_usage(options.survival > 0.0 && options.survival <= 1.0, "spa",
                  "survival target must lie in (0, 1]");
  }
  const StationaryContext ctx =
      make_context(dispersion, options.n_scan, options.subradiant_only);

  SpaWaveform wave;
  wave.x = std::move(x);
  wave.t = t;
  const std::size_t n = wave.x.size();
  wave.probability.assign(n, 0.0);
  wave.stationary_k.resize(n);
  wave.caustic.assign(n, 0);

  for (std::size_t i = 0; i < n; ++i) {
    const auto roots = find_roots(dispersion, ctx, wave.x[i] / t);
    wave.stationary_k[i] = roots;
    if (roots.empty()) continue;
    bool caustic = false;
    for (const double k : roots) {
      for (const double k_zero : ctx.extrema.inflection_k) {
        if (wrap_distance(k, k_zero) < kCausticDistance) caustic = true;
      }
      if (std::abs(dispersion.d2omega(k).real()) < kCausticCurvature) caustic = true;
    }
    if (caustic) {
      wave.caustic[i] = 1;
      continue;
    }
    const Complex amplitude = spa_sum(dispersion, roots, wave.x[i], t);
    wave.probability[i] = std::norm(amplitude);
  }

  if (options.normalization == SpaNormalization::ToSurvival) {
    double raw = 0.0;
    for (const double p : wave.probability) raw += p;
    require(raw > 0.0, "spa", "cannot rescale an all-zero waveform");
    wave.normalization = options.survival / raw;
    for (double& p : wave.probability) p *= wave.normalization;
  }
  return wave;
}

std::vector<SpaPeak> predicted_peaks(const Dispersion1D& dispersion, double t,
                                     int n_scan) {
  require_usage(t > 0.0, "spa", "time must be positive");
  const StationarySet set = find_inflection_points(dispersion, n_scan);
  std::vector<SpaPeak> peaks;
  peaks.reserve(set.inflection_k.size());
  for (std::size_t i = 0; i < set.inflection_k.size(); ++i) {
    SpaPeak peak;
    peak.k = set.inflection_k[i];
    peak.velocity = set.group_velocity[i];
    peak.x = peak.velocity * t;
    peaks.push_back(peak);
  }
  return peaks;
}

}  // namespace latticespread
