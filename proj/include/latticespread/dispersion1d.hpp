#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "latticespread/coupling.hpp"
#include "latticespread/numeric.hpp"

namespace latticespread {

struct DispersionSample {
  Complex omega;
  Complex d1;  // d omega / dk
  Complex d2;  // d^2 omega / dk^2
};

// One-dimensional dispersion relation with analytic derivatives. Evaluation
// within guard_radius() of a singular point throws an Error naming the
// singularity; grids mask those neighborhoods instead.
class Dispersion1D {
 public:
  virtual ~Dispersion1D() = default;

  virtual Complex omega(double k) const = 0;
  virtual Complex domega(double k) const = 0;
  virtual Complex d2omega(double k) const = 0;
  virtual DispersionSample evaluate(double k) const;

  // Singular wavenumbers, wrapped into (-pi, pi].
  virtual std::vector<double> singular_points() const = 0;
  virtual double guard_radius() const = 0;
  // Light-line wavenumber defining the subradiant zone |k| > k_a; 0 when the
  // model has no light cone (Im omega == 0 everywhere).
  virtual double light_wavenumber() const { return 0.0; }
  virtual std::string name() const = 0;

 protected:
  // Throws when k is within guard_radius() of a singular point.
  void check_regular(double k) const;
};

// omega(k) = 2 sum_{r>=1} cos(kr)/r^alpha. Closed forms for alpha = 1, 2 and
// for the curvature at alpha = 3; Abel-regularized series otherwise. The
// alpha = 1 curvature is +1/(2 sin^2(k/2)): positive, as both the series and
// finite differences of the slope confirm.
class PowerLawDispersion1D : public Dispersion1D {
 public:
  explicit PowerLawDispersion1D(double alpha);

  Complex omega(double k) const override;
  Complex domega(double k) const override;
  Complex d2omega(double k) const override;
  std::vector<double> singular_points() const override { return {0.0}; }
  double guard_radius() const override;
  std::string name() const override;

  double alpha() const { return alpha_; }

 private:
  double alpha_;
};

// Closed-form waveguide band: Re omega = (1/4) [cot((k_a+k)/2) + cot((k_a-k)/2)]
// in units of gamma_a. Im omega is 0 away from the light lines; the
// delta-function decay concentrated at k = +-k_a is flagged via
// delta_at_light_lines(), never added numerically.
class WaveguideDispersion1D : public Dispersion1D {
 public:
  explicit WaveguideDispersion1D(double k_a);

  Complex omega(double k) const override;
  Complex domega(double k) const override;
  Complex d2omega(double k) const override;
  std::vector<double> singular_points() const override;
  double guard_radius() const override { return 1e-9; }
  double light_wavenumber() const override { return k_a_; }
  std::string name() const override { return "waveguide"; }

  static constexpr bool delta_at_light_lines() { return true; }

 private:
  double k_a_;
};

// Free-space chain along x with spacing 1: the coupling splits into 1/r,
// 1/r^2, 1/r^3 channels weighted by mu = |d.x|^2, each summed in closed
// Abel-regularized form. Includes the -i/2 single-site pole, so Im omega
// vanishes identically for |k| > k_a when k_a < pi.
class FreeSpaceChainDispersion1D : public Dispersion1D {
 public:
  FreeSpaceChainDispersion1D(double k_a, const Eigen::Vector3cd& polarization);

  Complex omega(double k) const override;
  Complex domega(double k) const override;
  Complex d2omega(double k) const override;
  DispersionSample evaluate(double k) const override;
  std::vector<double> singular_points() const override;
  double guard_radius() const override { return 3e-3; }
  double light_wavenumber() const override { return k_a_; }
  std::string name() const override { return "free_space_chain"; }

 private:
  DispersionSample evaluate_orders(double k, bool want_d1, bool want_d2) const;

  double k_a_;
  double mu_;  // |d.x|^2 of the normalized polarization
};

// Chain dispersion for any coupling model (free space taken along x).
std::unique_ptr<Dispersion1D> make_dispersion(const CouplingModel& model);

// Uniform k-grid over one period starting at k_lo, with singular
// neighborhoods masked (NaN samples) and the subradiant zone flagged.
struct Dispersion1DGrid {
  std::vector<double> k;
  std::vector<Complex> omega;
  std::vector<double> d1;  // derivatives of Re omega
  std::vector<double> d2;
  std::vector<bool> masked;
  std::vector<bool> subradiant;  // |wrap(k)| > k_a
  double k_a = 0.0;
  double spacing = 0.0;
};

enum class DerivativeScheme { Analytic, CentralDifference };

Dispersion1DGrid sample_dispersion(const Dispersion1D& disp, int n_points,
                                   double k_lo = -kPi,
                                   DerivativeScheme scheme = DerivativeScheme::Analytic);

// Second-order central differences of a scalar callable on a uniform grid.
// Periodic grids treat the n samples as one full period; non-periodic grids
// leave NaN at the ends. Fewer than 5 points is an error.
struct DerivativeField {
  std::vector<double> k;
  std::vector<double> value;
  std::vector<double> d1;
  std::vector<double> d2;
};

DerivativeField central_differences(const std::function<double(double)>& f, double k_lo,
                                    double k_hi, int n_points, bool periodic);

// Inflection points k* with d2 Re omega(k*) = 0, each verified by a sign
// change of the curvature across the bracketing interval and refined by
// bisection; group velocities are d1 Re omega(k*).
struct StationarySet {
  std::vector<double> inflection_k;
  std::vector<double> group_velocity;
};

StationarySet find_inflection_points(const Dispersion1D& disp, int n_scan = 2048);

// Same search on pre-sampled fields (linear interpolation for the roots and
// velocities); NaN samples break brackets. Needs at least 64 points.
StationarySet find_inflection_points(const std::vector<double>& k,
                                     const std::vector<double>& d1,
                                     const std::vector<double>& d2);

// Truncated coupling transform: sum_{0 < |r| <= r_max} J(r) e^{-ikr} over a
// chain, from a caller-supplied J(r) for signed r (no diagonal term).
Complex lattice_sum_omega(const std::function<Complex(long long)>& coupling, double k,
                          long long r_max);

// Model-aware truncated dispersion: adds the model's uniform diagonal and
// reports sum_{|r| > r_max} |J(r)| (infinity when the couplings decay too
// slowly for an absolute bound).
struct LatticeSumResult {
  Complex omega;
  double tail_bound;
};

LatticeSumResult lattice_sum_dispersion(const CouplingModel& model, double k,
                                        long long r_max = 100000);

}  // namespace latticespread
