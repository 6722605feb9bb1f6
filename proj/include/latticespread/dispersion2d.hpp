#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "latticespread/coupling.hpp"
#include "latticespread/numeric.hpp"

namespace latticespread {

// Dispersion sampled on a uniform n x n grid over one Brillouin zone,
// k = k_lo + i * (2pi/n) per axis, in lattice units (spacing 1).
// Storage is row-major in ky: index = iy * n + ix.
struct Dispersion2DGrid {
  int n = 0;
  double k_lo = -kPi;
  double spacing = 0.0;
  double k_a = 0.0;
  std::vector<Complex> omega;  // NaN at masked nodes
  std::vector<std::uint8_t> masked;
  std::vector<std::uint8_t> subradiant;  // |k| > k_a

  std::size_t index(int ix, int iy) const { return static_cast<std::size_t>(iy) * n + ix; }
  double kx(int ix) const { return k_lo + ix * spacing; }
  double ky(int iy) const { return k_lo + iy * spacing; }
};

// Exact periodized transform of the windowed couplings: every J(r) with
// max(|dx|,|dy|) <= window_radius is folded modulo n into an n x n
// accumulator whose FFT evaluates sum_r J(r) e^{-i k r} at all grid nodes at
// once. Includes the model's uniform diagonal. Power-law grids mask the zone
// center; light models mask a band of +-3 spacings around the |k| = k_a ring
// (mask distances always use the wrapped wavevector). centered selects the
// window [-pi, pi) per axis; pass false for [0, 2pi), which puts the zone
// corner in the interior so level sets around it are not cut by the window.
Dispersion2DGrid sample_dispersion_2d(const CouplingModel& model, int n_points,
                                      long long window_radius = 400, bool centered = true);

// Direct windowed sum at a single wavevector; agrees with the grid values
// bitwise up to summation order. Cross-check path for the folding.
Complex lattice_sum_omega_2d(const CouplingModel& model, double kx, double ky,
                             long long window_radius = 400);

// Central-difference gradient and Hessian of Re omega. Nodes whose 3x3
// stencil touches a masked or non-finite sample are invalid (NaN fields).
struct HessianField {
  int n = 0;
  double k_lo = 0.0;
  double spacing = 0.0;
  std::vector<double> gx, gy;
  std::vector<double> dxx, dyy, dxy, det;
  std::vector<std::uint8_t> valid;

  std::size_t index(int ix, int iy) const { return static_cast<std::size_t>(iy) * n + ix; }
};

HessianField hessian_field(const Dispersion2DGrid& grid);

// Same stencils on a plain callable; periodic grids wrap (the interval
// [k_lo, k_hi) is one full period), non-periodic grids leave the border
// invalid.
HessianField hessian_field(const std::function<double(double, double)>& re_omega,
                           int n_points, double k_lo, double k_hi, bool periodic);

// Single-point Hessian determinant by central differences with step h.
double hessian_det_at(const std::function<double(double, double)>& re_omega, double kx,
                      double ky, double h);

// Zero level set by marching squares with linear interpolation on cell
// edges. Every vertex lies on a grid edge whose endpoint values have
// strictly opposite signs; saddle cells are disambiguated by the center
// average. Chains are stitched across cells; closed loops report their
// shoelace area (sign = orientation).
struct Contour {
  std::vector<std::array<double, 2>> points;
  bool closed = false;
  double signed_area = 0.0;
};

struct ContourSet {
  std::vector<Contour> contours;
};

ContourSet zero_contours(const std::vector<double>& field,
                         const std::vector<std::uint8_t>& valid, int n, double x_lo,
                         double y_lo, double spacing);

// det(H) = 0 contours of a Hessian field.
ContourSet zero_contours(const HessianField& hessian);

}  // namespace latticespread
