#pragma once

#include <functional>
#include <string>
#include <vector>

#include "latticespread/dispersion1d.hpp"

namespace latticespread {

// Dispersion defined by closed-form callables with no singular points, for
// exercising the periodic-band identities on known-smooth inputs.
class SmoothDispersion1D final : public Dispersion1D {
 public:
  using Fn = std::function<double(double)>;

  SmoothDispersion1D(std::string label, bool flat, Fn w, Fn d1, Fn d2)
      : label_(std::move(label)), flat_(flat), w_(std::move(w)),
        d1_(std::move(d1)), d2_(std::move(d2)) {}

  Complex omega(double k) const override { return {w_(k), 0.0}; }
  Complex domega(double k) const override { return {d1_(k), 0.0}; }
  Complex d2omega(double k) const override { return {d2_(k), 0.0}; }
  std::vector<double> singular_points() const override { return {}; }
  double guard_radius() const override { return 0.0; }
  std::string name() const override { return label_; }

  bool flat() const { return flat_; }

 private:
  std::string label_;
  bool flat_;
  Fn w_, d1_, d2_;
};

struct SmoothBand2D {
  std::string name;
  std::function<double(double, double)> omega;
};

// Ten smooth periodic chains (one deliberately flat) and five smooth planar
// bands. Every non-flat member must show at least two curvature zeros with
// group velocities of both signs, and its derivative integrals over the zone
// must vanish; the planar members drive the torus curvature check.
const std::vector<SmoothDispersion1D>& battery_1d();
const std::vector<SmoothBand2D>& battery_2d();

}  // namespace latticespread
