#include "latticespread/dispersion2d.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "latticespread/green.hpp"

namespace latticespread {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// J(dx, dy) for the square-lattice models; the diagonal is handled by the
// caller. Waveguide couplings are one-dimensional and rejected upstream.
std::function<Complex(long long, long long)> coupling_function(const CouplingModel& model) {
  if (model.is_power_law()) {
    const double alpha = model.power_law().alpha;
    return [alpha](long long dx, long long dy) {
      const double r2 = static_cast<double>(dx * dx + dy * dy);
      return Complex(std::pow(r2, -0.5 * alpha), 0.0);
    };
  }
  const auto& fs = model.free_space();
  const double k_a = fs.k_a;
  const Eigen::Vector3cd pol = fs.polarization;
  return [k_a, pol](long long dx, long long dy) {
    const Eigen::Vector3d r(static_cast<double>(dx), static_cast<double>(dy), 0.0);
    return free_space_coupling(r, k_a, pol);
  };
}

Complex model_diagonal(const CouplingModel& model) {
  return model.is_power_law() ? Complex(0.0, 0.0) : Complex(0.0, -0.5);
}

}  // namespace

Dispersion2DGrid sample_dispersion_2d(const CouplingModel& model, int n_points,
                                      long long window_radius, bool centered) {
  require(!model.is_waveguide(), "dispersion", "waveguide couplings are one-dimensional");
  require(n_points >= 8 && n_points % 2 == 0, "dispersion",
          "2D grid needs an even point count of at least 8");
  require(window_radius >= 1, "dispersion", "window radius must be at least 1");

  const int n = n_points;
  const auto j = coupling_function(model);

  std::vector<Complex> acc(static_cast<std::size_t>(n) * n, Complex(0.0, 0.0));
  for (long long dy = -window_radius; dy <= window_radius; ++dy) {
    const int my = static_cast<int>(((dy % n) + n) % n);
    for (long long dx = -window_radius; dx <= window_radius; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const int mx = static_cast<int>(((dx % n) + n) % n);
      acc[static_cast<std::size_t>(my) * n + mx] += j(dx, dy);
    }
  }

  // Forward DFT evaluates sum_m acc_m e^{-i k_j m} = omega(k_j) - diagonal.
  std::vector<Complex> spectrum(acc.size());
  {
    fftw_plan plan = fftw_plan_dft_2d(n, n, reinterpret_cast<fftw_complex*>(acc.data()),
                                      reinterpret_cast<fftw_complex*>(spectrum.data()),
                                      FFTW_FORWARD, FFTW_ESTIMATE);
    require(plan != nullptr, "dispersion", "FFT plan creation failed");
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }

  Dispersion2DGrid grid;
  grid.n = n;
  grid.k_lo = centered ? -kPi : 0.0;
  grid.spacing = kTwoPi / n;
  grid.k_a = model.is_power_law() ? 0.0 : model.light_wavenumber();
  grid.omega.assign(acc.size(), Complex(kNaN, kNaN));
  grid.masked.assign(acc.size(), 0);
  grid.subradiant.assign(acc.size(), 0);

  const Complex diag = model_diagonal(model);
  const double ring_halfwidth = 3.0 * grid.spacing;
  const int shift = centered ? n / 2 : 0;
  for (int iy = 0; iy < n; ++iy) {
    const int jy = (iy + shift) % n;
    for (int ix = 0; ix < n; ++ix) {
      const int jx = (ix + shift) % n;
      const std::size_t at = grid.index(ix, iy);
      const double kr = std::hypot(wrap_to_zone(grid.kx(ix)), wrap_to_zone(grid.ky(iy)));
      grid.subradiant[at] = kr > grid.k_a ? 1 : 0;
      if (model.is_power_law()) {
        grid.masked[at] = kr < grid.spacing ? 1 : 0;
      } else {
        grid.masked[at] = std::abs(kr - grid.k_a) < ring_halfwidth ? 1 : 0;
      }
      if (!grid.masked[at]) {
        grid.omega[at] = diag + spectrum[static_cast<std::size_t>(jy) * n + jx];
      }
    }
  }
  return grid;
}

Complex lattice_sum_omega_2d(const CouplingModel& model, double kx, double ky,
                             long long window_radius) {
  require(!model.is_waveguide(), "dispersion", "waveguide couplings are one-dimensional");
  require(window_radius >= 1, "dispersion", "window radius must be at least 1");
  const auto j = coupling_function(model);
  Complex sum = model_diagonal(model);
  for (long long dy = -window_radius; dy <= window_radius; ++dy) {
    for (long long dx = -window_radius; dx <= window_radius; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const double phase = -(kx * static_cast<double>(dx) + ky * static_cast<double>(dy));
      sum += j(dx, dy) * std::polar(1.0, phase);
    }
  }
  require(is_finite(sum), "dispersion", "lattice sum produced a non-finite value");
  return sum;
}

namespace {

HessianField hessian_from_samples(const std::vector<double>& w,
                                  const std::vector<std::uint8_t>& ok, int n, double k_lo,
                                  double h, bool periodic) {
  HessianField field;
  field.n = n;
  field.k_lo = k_lo;
  field.spacing = h;
  const std::size_t total = static_cast<std::size_t>(n) * n;
  field.gx.assign(total, kNaN);
  field.gy.assign(total, kNaN);
  field.dxx.assign(total, kNaN);
  field.dyy.assign(total, kNaN);
  field.dxy.assign(total, kNaN);
  field.det.assign(total, kNaN);
  field.valid.assign(total, 0);

  const auto at = [n](int ix, int iy) { return static_cast<std::size_t>(iy) * n + ix; };
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      if (!periodic && (ix == 0 || iy == 0 || ix == n - 1 || iy == n - 1)) continue;
      const int xm = (ix + n - 1) % n;
      const int xp = (ix + 1) % n;
      const int ym = (iy + n - 1) % n;
      const int yp = (iy + 1) % n;
      bool usable = true;
      for (const int jy : {ym, iy, yp}) {
        for (const int jx : {xm, ix, xp}) {
          if (!ok[at(jx, jy)]) usable = false;
        }
      }
      if (!usable) continue;

      const std::size_t c = at(ix, iy);
      const double h2 = h * h;
      field.gx[c] = (w[at(xp, iy)] - w[at(xm, iy)]) / (2.0 * h);
      field.gy[c] = (w[at(ix, yp)] - w[at(ix, ym)]) / (2.0 * h);
      field.dxx[c] = (w[at(xp, iy)] - 2.0 * w[c] + w[at(xm, iy)]) / h2;
      field.dyy[c] = (w[at(ix, yp)] - 2.0 * w[c] + w[at(ix, ym)]) / h2;
      field.dxy[c] =
          (w[at(xp, yp)] - w[at(xp, ym)] - w[at(xm, yp)] + w[at(xm, ym)]) / (4.0 * h2);
      field.det[c] = field.dxx[c] * field.dyy[c] - field.dxy[c] * field.dxy[c];
      field.valid[c] = 1;
    }
  }
  return field;
}

}  // namespace

HessianField hessian_field(const Dispersion2DGrid& grid) {
  require(grid.n >= 8, "dispersion", "Hessian needs a grid of at least 8x8");
  const std::size_t total = grid.omega.size();
  std::vector<double> w(total, 0.0);
  std::vector<std::uint8_t> ok(total, 0);
  for (std::size_t i = 0; i < total; ++i) {
    const bool good = !grid.masked[i] && is_finite(grid.omega[i]);
    ok[i] = good ? 1 : 0;
    if (good) w[i] = grid.omega[i].real();
  }
  return hessian_from_samples(w, ok, grid.n, grid.k_lo, grid.spacing, true);
}

HessianField hessian_field(const std::function<double(double, double)>& re_omega,
                           int n_points, double k_lo, double k_hi, bool periodic) {
  require(n_points >= 8, "dispersion", "Hessian needs a grid of at least 8x8");
  require(k_hi > k_lo, "dispersion", "grid interval must be nonempty");
  const int n = n_points;
  const double h = (k_hi - k_lo) / (periodic ? n : n - 1);
  const std::size_t total = static_cast<std::size_t>(n) * n;
  std::vector<double> w(total);
  std::vector<std::uint8_t> ok(total, 1);
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      w[static_cast<std::size_t>(iy) * n + ix] = re_omega(k_lo + ix * h, k_lo + iy * h);
    }
  }
  return hessian_from_samples(w, ok, n, k_lo, h, periodic);
}

double hessian_det_at(const std::function<double(double, double)>& re_omega, double kx,
                      double ky, double h) {
  require(h > 0.0, "dispersion", "step must be positive");
  const double h2 = h * h;
  const double c = re_omega(kx, ky);
  const double dxx = (re_omega(kx + h, ky) - 2.0 * c + re_omega(kx - h, ky)) / h2;
  const double dyy = (re_omega(kx, ky + h) - 2.0 * c + re_omega(kx, ky - h)) / h2;
  const double dxy = (re_omega(kx + h, ky + h) - re_omega(kx + h, ky - h) -
                      re_omega(kx - h, ky + h) + re_omega(kx - h, ky - h)) /
                     (4.0 * h2);
  return dxx * dyy - dxy * dxy;
}

namespace {

// Grid edges carry stable integer keys so the same crossing point is shared
// by both adjacent cells: horizontal edge (ix,iy)-(ix+1,iy) has key 2*node,
// vertical edge (ix,iy)-(ix,iy+1) has key 2*node+1.
struct Segment {
  long long a;
  long long b;
};

}  // namespace

ContourSet zero_contours(const std::vector<double>& field,
                         const std::vector<std::uint8_t>& valid, int n, double x_lo,
                         double y_lo, double spacing) {
  require(n >= 2, "contours", "contour grid needs at least 2x2 nodes");
  require(field.size() == static_cast<std::size_t>(n) * n &&
              valid.size() == field.size(),
          "contours", "field size must match the grid");

  const auto at = [n](int ix, int iy) { return static_cast<std::size_t>(iy) * n + ix; };
  const auto usable = [&](int ix, int iy) {
    return valid[at(ix, iy)] && std::isfinite(field[at(ix, iy)]);
  };
  const auto edge_key = [n](int ix, int iy, bool vertical) {
    return 2LL * (static_cast<long long>(iy) * n + ix) + (vertical ? 1 : 0);
  };

  // Crossing point of a sign-change edge, computed from the two node values.
  const auto edge_point = [&](long long key) -> std::array<double, 2> {
    const bool vertical = (key & 1) != 0;
    const long long node = key >> 1;
    const int ix = static_cast<int>(node % n);
    const int iy = static_cast<int>(node / n);
    const double va = field[at(ix, iy)];
    const double vb = vertical ? field[at(ix, iy + 1)] : field[at(ix + 1, iy)];
    const double t = va / (va - vb);
    if (vertical) return {x_lo + ix * spacing, y_lo + (iy + t) * spacing};
    return {x_lo + (ix + t) * spacing, y_lo + iy * spacing};
  };

  std::vector<Segment> segments;
  std::map<long long, std::vector<int>> by_edge;

  for (int iy = 0; iy + 1 < n; ++iy) {
    for (int ix = 0; ix + 1 < n; ++ix) {
      if (!usable(ix, iy) || !usable(ix + 1, iy) || !usable(ix, iy + 1) ||
          !usable(ix + 1, iy + 1)) {
        continue;
      }
      const double f00 = field[at(ix, iy)];
      const double f10 = field[at(ix + 1, iy)];
      const double f11 = field[at(ix + 1, iy + 1)];
      const double f01 = field[at(ix, iy + 1)];
      // f == 0 counts as positive; crossings need a strict sign change.
      const int c = (f00 >= 0.0 ? 1 : 0) | (f10 >= 0.0 ? 2 : 0) | (f11 >= 0.0 ? 4 : 0) |
                    (f01 >= 0.0 ? 8 : 0);
      if (c == 0 || c == 15) continue;

      const long long bottom = edge_key(ix, iy, false);
      const long long right = edge_key(ix + 1, iy, true);
      const long long top = edge_key(ix, iy + 1, false);
      const long long left = edge_key(ix, iy, true);

      const auto emit = [&](long long e1, long long e2) {
        const int idx = static_cast<int>(segments.size());
        segments.push_back({e1, e2});
        by_edge[e1].push_back(idx);
        by_edge[e2].push_back(idx);
      };

      switch (c) {
        case 1: case 14: emit(left, bottom); break;
        case 2: case 13: emit(bottom, right); break;
        case 4: case 11: emit(right, top); break;
        case 8: case 7: emit(top, left); break;
        case 3: case 12: emit(left, right); break;
        case 6: case 9: emit(bottom, top); break;
        case 5: case 10: {
          // saddle: connect according to the sign of the center average
          const double center = 0.25 * (f00 + f10 + f11 + f01);
          const bool center_pos = center >= 0.0;
          const bool corners_pos = (c == 5);  // f00, f11 positive
          if (center_pos == corners_pos) {
            emit(left, top);
            emit(bottom, right);
          } else {
            emit(left, bottom);
            emit(right, top);
          }
          break;
        }
        default: break;
      }
    }
  }

  ContourSet set;
  std::vector<bool> used(segments.size(), false);

  const auto walk = [&](int start_seg, long long start_edge) {
    Contour contour;
    contour.points.push_back(edge_point(start_edge));
    int seg = start_seg;
    long long edge = start_edge;
    while (true) {
      used[seg] = true;
      edge = (segments[seg].a == edge) ? segments[seg].b : segments[seg].a;
      contour.points.push_back(edge_point(edge));
      int next = -1;
      for (const int cand : by_edge[edge]) {
        if (!used[cand]) {
          next = cand;
          break;
        }
      }
      if (next < 0) break;
      seg = next;
    }
    if (contour.points.size() >= 4 && edge == start_edge) {
      contour.closed = true;
      contour.points.pop_back();  // drop the duplicated start vertex
      double area2 = 0.0;
      for (std::size_t i = 0; i < contour.points.size(); ++i) {
        const auto& p = contour.points[i];
        const auto& q = contour.points[(i + 1) % contour.points.size()];
        area2 += p[0] * q[1] - q[0] * p[1];
      }
      contour.signed_area = 0.5 * area2;
    }
    set.contours.push_back(std::move(contour));
  };

  // open chains first (their ends sit on edges used exactly once)
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    for (const long long e : {segments[s].a, segments[s].b}) {
      if (by_edge[e].size() == 1) {
        walk(static_cast<int>(s), e);
        break;
      }
    }
  }
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (!used[s]) walk(static_cast<int>(s), segments[s].a);
  }
  return set;
}

ContourSet zero_contours(const HessianField& hessian) {
  return zero_contours(hessian.det, hessian.valid, hessian.n, hessian.k_lo, hessian.k_lo,
                       hessian.spacing);
}

}  // namespace latticespread
