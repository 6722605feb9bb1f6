#pragma once

#include <cstdint>
#include <vector>

#include "latticespread/dispersion1d.hpp"
#include "latticespread/numeric.hpp"

namespace latticespread {

// All wavenumbers with d Re omega / dk = v, in ascending order within
// (-pi, pi]. Roots are bracketed by sign changes on an offset scan grid
// (including the periodic wrap interval) and refined by bisection; brackets
// touching a singular neighborhood are skipped, and a refined point is kept
// only when its residual slope error is consistent with a genuine root
// rather than a jump. subradiant_only restricts the search to wavenumbers
// beyond the light line.
std::vector<double> stationary_points(const Dispersion1D& dispersion, double v,
                                      int n_scan = 4096, bool subradiant_only = false);

// Stationary-phase amplitude at position x and time t > 0:
//
//   sum_i  exp(i (k_i x - Re omega(k_i) t)) * exp(Im omega(k_i) t)
//          * exp(-i (pi/4) sgn(d2_i)) / sqrt(2 pi t |d2_i|)
//
// over the stationary points k_i of the slope at v = x / t; d2_i is the
// curvature of Re omega there. The relative phases carry the interference
// between coexisting stationary points. Evaluation at a caustic
// (|d2_i| < 1e-10, where the quadratic expansion fails) is an error; no
// stationary point yields exactly 0.
Complex spa_amplitude(const Dispersion1D& dispersion, double x, double t,
                      int n_scan = 4096);

enum class SpaNormalization { None, ToSurvival };

struct SpaOptions {
  SpaNormalization normalization = SpaNormalization::None;
  double survival = 1.0;         // target probability sum for ToSurvival
  bool subradiant_only = false;  // search only beyond the light line
  int n_scan = 4096;
};

struct SpaWaveform {
  std::vector<double> x;
  double t = 0.0;
  std::vector<double> probability;                // |psi|^2, 0 where no point
  std::vector<std::vector<double>> stationary_k;  // contributing wavenumbers
  std::vector<std::uint8_t> caustic;              // quadratic expansion invalid
  double normalization = 1.0;                     // factor applied
};

// Waveform on an x grid at time t > 0. Positions whose stationary points
// come within 1e-6 of a curvature zero (or carry |d2| < 1e-10) are flagged
// caustic and carry probability 0 instead of a divergent estimate.
// ToSurvival rescales the probabilities to sum to options.survival, which
// must lie in (0, 1].
SpaWaveform spa_waveform(const Dispersion1D& dispersion, std::vector<double> x,
                         double t, const SpaOptions& options = {});

// Kinematic peak prediction: each curvature zero k* travels along
// x(t) = v_g(k*) t. Empty when the curvature never vanishes (no splitting).
struct SpaPeak {
  double k;
  double velocity;
  double x;
};

std::vector<SpaPeak> predicted_peaks(const Dispersion1D& dispersion, double t,
                                     int n_scan = 2048);

}  // namespace latticespread
