#include "latticespread/dispersion1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "latticespread/green.hpp"
#include "latticespread/series.hpp"

namespace latticespread {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

double circular_distance(double k, double s) { return std::abs(wrap_to_zone(k - s)); }

std::string format_k(double k) {
  std::ostringstream out;
  out.precision(12);
  out << k;
  return out.str();
}

Complex unit_phase(double angle) { return std::polar(1.0, angle); }

}  // namespace

DispersionSample Dispersion1D::evaluate(double k) const {
  return {omega(k), domega(k), d2omega(k)};
}

void Dispersion1D::check_regular(double k) const {
  for (const double s : singular_points()) {
    if (circular_distance(k, s) < guard_radius()) {
      throw Error(ErrorCategory::Runtime, "dispersion",
                  name() + " dispersion is singular at k = " + format_k(s) +
                      "; requested k = " + format_k(k));
    }
  }
}

PowerLawDispersion1D::PowerLawDispersion1D(double alpha) : alpha_(alpha) {
  require(alpha > 0.0, "dispersion", "power-law exponent must be positive");
}

double PowerLawDispersion1D::guard_radius() const {
  return (alpha_ == 1.0 || alpha_ == 2.0) ? 1e-9 : 3e-3;
}

std::string PowerLawDispersion1D::name() const {
  return "power_law(alpha=" + format_k(alpha_) + ")";
}

Complex PowerLawDispersion1D::omega(double k) const {
  check_regular(k);
  if (alpha_ == 1.0) {
    const double s = 2.0 * std::abs(std::sin(0.5 * k));
    return Complex(-2.0 * std::log(s), 0.0);
  }
  if (alpha_ == 2.0) {
    const double kw = std::abs(wrap_to_zone(k));
    return Complex((3.0 * kw * kw - 6.0 * kPi * kw + 2.0 * kPi * kPi) / 6.0, 0.0);
  }
  return Complex(2.0 * conditional_power_sum(alpha_, unit_phase(k)).real(), 0.0);
}

Complex PowerLawDispersion1D::domega(double k) const {
  check_regular(k);
  if (alpha_ == 1.0) {
    return Complex(-std::cos(0.5 * k) / std::sin(0.5 * k), 0.0);
  }
  if (alpha_ == 2.0) {
    const double kw = wrap_to_zone(k);
    return Complex(kw - kPi * (kw > 0.0 ? 1.0 : -1.0), 0.0);
  }
  return Complex(-2.0 * conditional_power_sum(alpha_ - 1.0, unit_phase(k)).imag(), 0.0);
}

Complex PowerLawDispersion1D::d2omega(double k) const {
  check_regular(k);
  if (alpha_ == 1.0) {
    const double s = std::sin(0.5 * k);
    return Complex(0.5 / (s * s), 0.0);
  }
  if (alpha_ == 2.0) {
    return Complex(1.0, 0.0);
  }
  if (alpha_ == 3.0) {
    const double s = 2.0 * std::sin(0.5 * k);
    return Complex(std::log(s * s), 0.0);
  }
  return Complex(-2.0 * conditional_power_sum(alpha_ - 2.0, unit_phase(k)).real(), 0.0);
}

WaveguideDispersion1D::WaveguideDispersion1D(double k_a) : k_a_(k_a) {
  require(k_a > 0.0 && k_a < kPi, "dispersion",
          "waveguide dispersion needs 0 < k_a < pi");
}

std::vector<double> WaveguideDispersion1D::singular_points() const {
  return {wrap_to_zone(-k_a_), wrap_to_zone(k_a_)};
}

Complex WaveguideDispersion1D::omega(double k) const {
  check_regular(k);
  const double up = 0.5 * (k_a_ + k);
  const double um = 0.5 * (k_a_ - k);
  return Complex(0.25 * (std::cos(up) / std::sin(up) + std::cos(um) / std::sin(um)), 0.0);
}

Complex WaveguideDispersion1D::domega(double k) const {
  check_regular(k);
  const double sp = std::sin(0.5 * (k_a_ + k));
  const double sm = std::sin(0.5 * (k_a_ - k));
  return Complex(0.125 * (1.0 / (sm * sm) - 1.0 / (sp * sp)), 0.0);
}

Complex WaveguideDispersion1D::d2omega(double k) const {
  check_regular(k);
  const double up = 0.5 * (k_a_ + k);
  const double um = 0.5 * (k_a_ - k);
  const double cp = std::cos(up) / std::sin(up);
  const double cm = std::cos(um) / std::sin(um);
  const double s2p = std::sin(up) * std::sin(up);
  const double s2m = std::sin(um) * std::sin(um);
  return Complex(0.125 * (cm / s2m + cp / s2p), 0.0);
}

FreeSpaceChainDispersion1D::FreeSpaceChainDispersion1D(double k_a,
                                                       const Eigen::Vector3cd& polarization)
    : k_a_(k_a) {
  require(k_a > 0.0, "dispersion", "light wavenumber must be positive");
  const double norm = polarization.norm();
  require(norm > 0.0, "dispersion", "polarization must be nonzero");
  mu_ = std::norm(polarization(0) / norm);
}

std::vector<double> FreeSpaceChainDispersion1D::singular_points() const {
  std::vector<double> pts = {wrap_to_zone(-k_a_), wrap_to_zone(k_a_)};
  std::sort(pts.begin(), pts.end());
  if (std::abs(pts[1] - pts[0]) < 1e-12) pts.pop_back();
  return pts;
}

DispersionSample FreeSpaceChainDispersion1D::evaluate_orders(double k, bool want_d1,
                                                             bool want_d2) const {
  check_regular(k);
  const Complex zp = unit_phase(k_a_ + k);
  const Complex zm = unit_phase(k_a_ - k);

  // J(r) = sum_s c_s e^{i k_a r} r^{-s} for r >= 1, so each derivative in k
  // shifts the needed exponents down by one.
  const double k2 = k_a_ * k_a_;
  const Complex cs[3] = {
      Complex(-3.0 * (1.0 - mu_) / (4.0 * k_a_), 0.0),
      Complex(0.0, -3.0 * (1.0 - 3.0 * mu_) / (4.0 * k2)),
      Complex(3.0 * (1.0 - 3.0 * mu_) / (4.0 * k2 * k_a_), 0.0),
  };

  const int s_min = want_d2 ? -1 : (want_d1 ? 0 : 1);
  Complex pp[5];
  Complex pm[5];
  for (int s = s_min; s <= 3; ++s) {
    pp[s + 1] = conditional_power_sum(static_cast<double>(s), zp);
    pm[s + 1] = conditional_power_sum(static_cast<double>(s), zm);
  }

  DispersionSample out{Complex(0.0, -0.5), Complex(0.0, 0.0), Complex(0.0, 0.0)};
  for (int s = 1; s <= 3; ++s) {
    const Complex c = cs[s - 1];
    out.omega += c * (pp[s + 1] + pm[s + 1]);
    if (want_d1) out.d1 += c * kI * (pp[s] - pm[s]);
    if (want_d2) out.d2 -= c * (pp[s - 1] + pm[s - 1]);
  }
  return out;
}

Complex FreeSpaceChainDispersion1D::omega(double k) const {
  return evaluate_orders(k, false, false).omega;
}

Complex FreeSpaceChainDispersion1D::domega(double k) const {
  return evaluate_orders(k, true, false).d1;
}

Complex FreeSpaceChainDispersion1D::d2omega(double k) const {
  return evaluate_orders(k, true, true).d2;
}

DispersionSample FreeSpaceChainDispersion1D::evaluate(double k) const {
  return evaluate_orders(k, true, true);
}

std::unique_ptr<Dispersion1D> make_dispersion(const CouplingModel& model) {
  if (model.is_power_law()) {
    return std::make_unique<PowerLawDispersion1D>(model.power_law().alpha);
  }
  if (model.is_waveguide()) {
    return std::make_unique<WaveguideDispersion1D>(model.waveguide().k_a);
  }
  const auto& fs = model.free_space();
  return std::make_unique<FreeSpaceChainDispersion1D>(fs.k_a, fs.polarization);
}

Dispersion1DGrid sample_dispersion(const Dispersion1D& disp, int n_points, double k_lo,
                                   DerivativeScheme scheme) {
  require(n_points >= 5, "dispersion", "grid needs at least 5 points");
  const double h = kTwoPi / n_points;
  const double mask_radius = std::max(h, disp.guard_radius());
  const auto singular = disp.singular_points();
  const double k_a = disp.light_wavenumber();

  Dispersion1DGrid grid;
  grid.k_a = k_a;
  grid.spacing = h;
  grid.k.resize(n_points);
  grid.omega.assign(n_points, Complex(kNaN, kNaN));
  grid.d1.assign(n_points, kNaN);
  grid.d2.assign(n_points, kNaN);
  grid.masked.assign(n_points, false);
  grid.subradiant.assign(n_points, false);

  for (int i = 0; i < n_points; ++i) {
    const double k = k_lo + i * h;
    grid.k[i] = k;
    grid.subradiant[i] = std::abs(wrap_to_zone(k)) > k_a;
    for (const double s : singular) {
      if (circular_distance(k, s) < mask_radius) {
        grid.masked[i] = true;
        break;
      }
    }
    if (grid.masked[i]) continue;
    if (scheme == DerivativeScheme::Analytic) {
      const DispersionSample sample = disp.evaluate(k);
      grid.omega[i] = sample.omega;
      grid.d1[i] = sample.d1.real();
      grid.d2[i] = sample.d2.real();
    } else {
      grid.omega[i] = disp.omega(k);
    }
  }

  if (scheme == DerivativeScheme::CentralDifference) {
    for (int i = 0; i < n_points; ++i) {
      if (grid.masked[i]) continue;
      const int prev = (i + n_points - 1) % n_points;
      const int next = (i + 1) % n_points;
      if (grid.masked[prev] || grid.masked[next]) continue;
      const double wp = grid.omega[prev].real();
      const double w0 = grid.omega[i].real();
      const double wn = grid.omega[next].real();
      grid.d1[i] = (wn - wp) / (2.0 * h);
      grid.d2[i] = (wn - 2.0 * w0 + wp) / (h * h);
    }
  }
  return grid;
}

DerivativeField central_differences(const std::function<double(double)>& f, double k_lo,
                                    double k_hi, int n_points, bool periodic) {
  require(n_points >= 5, "dispersion", "central differences need at least 5 points");
  require(k_hi > k_lo, "dispersion", "grid interval must be nonempty");

  const double h = (k_hi - k_lo) / (periodic ? n_points : n_points - 1);
  DerivativeField field;
  field.k.resize(n_points);
  field.value.resize(n_points);
  field.d1.assign(n_points, kNaN);
  field.d2.assign(n_points, kNaN);
  for (int i = 0; i < n_points; ++i) {
    field.k[i] = k_lo + i * h;
    field.value[i] = f(field.k[i]);
  }
  const int lo = periodic ? 0 : 1;
  const int hi = periodic ? n_points : n_points - 1;
  for (int i = lo; i < hi; ++i) {
    const double wp = field.value[(i + n_points - 1) % n_points];
    const double wn = field.value[(i + 1) % n_points];
    field.d1[i] = (wn - wp) / (2.0 * h);
    field.d2[i] = (wn - 2.0 * field.value[i] + wp) / (h * h);
  }
  return field;
}

StationarySet find_inflection_points(const Dispersion1D& disp, int n_scan) {
  require(n_scan >= 64, "dispersion", "inflection scan needs at least 64 points");
  const double h = kTwoPi / n_scan;
  const double skip_radius = std::max(h, disp.guard_radius());
  const auto singular = disp.singular_points();

  std::vector<double> ks;
  std::vector<double> d2s;
  std::vector<bool> valid;
  ks.reserve(n_scan);
  double scale = 0.0;
  for (int i = 0; i < n_scan; ++i) {
    const double k = -kPi + (i + 0.5) * h;
    bool ok = true;
    for (const double s : singular) {
      if (circular_distance(k, s) < skip_radius) {
        ok = false;
        break;
      }
    }
    ks.push_back(k);
    valid.push_back(ok);
    d2s.push_back(ok ? disp.d2omega(k).real() : kNaN);
    if (ok) scale = std::max(scale, std::abs(d2s.back()));
  }

  const double tol = 1e-8 * std::max(scale, 1e-30);
  // The last interval wraps past pi so a curvature zero at the zone edge is
  // still bracketed; evaluation folds back into the zone.
  std::vector<std::pair<double, double>> roots;
  for (int i = 0; i < n_scan; ++i) {
    const int j = (i + 1) % n_scan;
    if (!valid[i] || !valid[j]) continue;
    double a = ks[i];
    double b = j == 0 ? ks[0] + kTwoPi : ks[j];
    double fa = d2s[i];
    const double fb = d2s[j];
    if (fa == 0.0) {
      roots.emplace_back(a, disp.domega(a).real());
      continue;
    }
    if (fa * fb >= 0.0) continue;
    double mid = a;
    double fm = fa;
    for (int iter = 0; iter < 200 && (b - a) > 1e-13; ++iter) {
      mid = 0.5 * (a + b);
      fm = disp.d2omega(wrap_to_zone(mid)).real();
      if (fm == 0.0) break;
      if ((fm > 0.0) == (fa > 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    if (std::abs(fm) <= tol) {
      const double k_root = wrap_to_zone(mid);
      roots.emplace_back(k_root, disp.domega(k_root).real());
    }
  }
  std::sort(roots.begin(), roots.end());
  StationarySet set;
  for (const auto& [k_root, v] : roots) {
    set.inflection_k.push_back(k_root);
    set.group_velocity.push_back(v);
  }
  return set;
}

StationarySet find_inflection_points(const std::vector<double>& k,
                                     const std::vector<double>& d1,
                                     const std::vector<double>& d2) {
  require(k.size() >= 64, "dispersion", "inflection search needs at least 64 samples");
  require(k.size() == d1.size() && k.size() == d2.size(), "dispersion",
          "field arrays must have matching length");

  StationarySet set;
  for (std::size_t i = 0; i + 1 < k.size(); ++i) {
    const double fa = d2[i];
    const double fb = d2[i + 1];
    if (!std::isfinite(fa) || !std::isfinite(fb)) continue;
    if (fa == 0.0) {
      set.inflection_k.push_back(k[i]);
      set.group_velocity.push_back(d1[i]);
      continue;
    }
    if (fa * fb >= 0.0) continue;
    const double t = fa / (fa - fb);
    set.inflection_k.push_back(k[i] + t * (k[i + 1] - k[i]));
    const bool v_ok = std::isfinite(d1[i]) && std::isfinite(d1[i + 1]);
    set.group_velocity.push_back(v_ok ? d1[i] + t * (d1[i + 1] - d1[i]) : kNaN);
  }
  return set;
}

Complex lattice_sum_omega(const std::function<Complex(long long)>& coupling, double k,
                          long long r_max) {
  require(r_max >= 1, "dispersion", "cutoff must be at least 1");
  // phase = e^{-ikr}, advanced incrementally with periodic resync.
  Complex sum(0.0, 0.0);
  const Complex step = unit_phase(-k);
  Complex phase(1.0, 0.0);
  for (long long r = 1; r <= r_max; ++r) {
    if (r % 4096 == 0) {
      phase = unit_phase(-k * static_cast<double>(r));
    } else {
      phase *= step;
    }
    sum += coupling(r) * phase + coupling(-r) * std::conj(phase);
  }
  require(is_finite(sum), "dispersion", "lattice sum produced a non-finite value");
  return sum;
}

LatticeSumResult lattice_sum_dispersion(const CouplingModel& model, double k,
                                        long long r_max) {
  require(r_max >= 1, "dispersion", "cutoff must be at least 1");
  const double rr = static_cast<double>(r_max);
  LatticeSumResult result{Complex(0.0, 0.0), kInf};

  if (model.is_power_law()) {
    const double alpha = model.power_law().alpha;
    const auto j = [alpha](long long r) {
      return Complex(std::pow(std::abs(static_cast<double>(r)), -alpha), 0.0);
    };
    result.omega = lattice_sum_omega(j, k, r_max);
    if (alpha > 1.0) {
      result.tail_bound = 2.0 * std::pow(rr, 1.0 - alpha) / (alpha - 1.0);
    }
    return result;
  }

  if (model.is_waveguide()) {
    const double k_a = model.waveguide().k_a;
    const auto j = [k_a](long long r) {
      return Complex(0.0, -0.5) * unit_phase(-k_a * std::abs(static_cast<double>(r)));
    };
    result.omega = Complex(0.0, -0.5) + lattice_sum_omega(j, k, r_max);
    return result;
  }

  const auto& fs = model.free_space();
  const Eigen::Vector3cd pol = fs.polarization;
  const double k_a = fs.k_a;
  const auto j = [&](long long r) {
    const Eigen::Vector3d rv(static_cast<double>(std::abs(r)), 0.0, 0.0);
    return free_space_coupling(rv, k_a, pol);
  };
  result.omega = Complex(0.0, -0.5) + lattice_sum_omega(j, k, r_max);
  const double mu = std::norm(pol(0));
  if (mu == 1.0) {
    const double c = 3.0 / (4.0 * k_a * k_a * k_a);
    result.tail_bound = 2.0 * c * (2.0 * k_a / rr + 1.0 / (rr * rr));
  }
  return result;
}

}  // namespace latticespread
