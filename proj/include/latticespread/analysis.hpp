#pragma once

#include <functional>
#include <vector>

#include "latticespread/dispersion1d.hpp"
#include "latticespread/dispersion2d.hpp"
#include "latticespread/snapshot.hpp"

namespace latticespread {

struct Peak {
  double position;  // fractional index into the profile
  double height;    // smoothed value at the peak
};

// Local maxima of the moving-average-smoothed profile that exceed
// threshold_frac times the smoothed maximum. Sub-grid positions come from a
// parabolic fit through the three smoothed values around each maximum; a
// plateau of equal values counts once, at its center. Maxima closer than
// window indices merge into the higher one.
std::vector<Peak> detect_peaks(const std::vector<double>& profile, int window = 7,
                               double threshold_frac = 0.25);

enum class SpreadingLabel { Split, Unsplit };

struct TrackPoint {
  double time;
  double position;  // signed distance from the excitation origin
  double height;
};

struct PeakTrack {
  std::vector<TrackPoint> points;
  double separation_rate = 0.0;  // least-squares d(position)/dt
};

struct ClassifyParams {
  int window = 7;
  double threshold_frac = 0.25;
  // Minimum speed for a track to count as a separating packet; 0 derives
  // 0.05 times the front velocity fitted from the 99.5%-probability radius.
  double rate_floor = 0.0;
  // Two opposite tracks are distinct packets only if the profile between
  // them dips below valley_frac times the lower of their crest heights; an
  // expanding rippled plateau stays connected and classifies Unsplit. The
  // valley is measured at a smoothing scale that resolves the pair: the
  // window shrinks (down to the raw profile) when the separation is less
  // than four windows.
  double valley_frac = 0.5;
};

struct ClassifyDiagnostics {
  int window = 7;
  double threshold_frac = 0.25;
  double rate_floor = 0.0;
  double valley_frac = 0.5;
  double front_velocity = 0.0;
};

struct ClassificationResult {
  SpreadingLabel label = SpreadingLabel::Unsplit;
  std::vector<PeakTrack> tracks;
  ClassifyDiagnostics diagnostics;
};

// Labels a time series of profiles (chain sites or one 2D cross-section,
// all sharing one coordinate grid) as Split or Unsplit. Peaks are tracked
// across snapshots within a gate of front_velocity * dt + 2 * window *
// spacing (taller peaks claim their nearest track first, so a dominant
// packet is not stolen by a nearby subsidiary ripple), each track's position
// is fitted linearly in time, and the series splits when some pair of tracks
// recedes in opposite directions faster than the rate floor with a genuine
// valley between the packets. Deterministic for identical inputs.
ClassificationResult classify_spreading(const std::vector<SectionProfile>& sections,
                                        const ClassifyParams& params = {});

// Integral of the n-th derivative of Re omega over one Brillouin zone,
// divided by 2 pi; midpoint rule on n_points. For a smooth periodic band the
// result vanishes to quadrature accuracy. Dispersions with singular points
// are flagged not applicable: the identity says nothing there.
struct MomentIntegral {
  double value;
  bool applicable;
};
MomentIntegral moment_integrals(const Dispersion1D& dispersion, int n,
                                int n_points = 4096);

// Curvature integral of the dispersion graph over the torus, normalized by
// 2 pi: sum of det(H) / (1 + |grad omega|^2)^(3/2) times the cell area. The
// Euler characteristic of the torus forces 0 for smooth periodic bands, so
// the value measures discretization error. Fields with masked nodes are
// flagged not applicable.
struct GaussBonnetResult {
  double value;
  bool applicable;
};
GaussBonnetResult gauss_bonnet_check(const HessianField& field);
GaussBonnetResult gauss_bonnet_check(const std::function<double(double, double)>& re_omega,
                                     int n_points);

// Sign census of a sampled field (a 1D curvature or a 2D Hessian
// determinant). Entries within 1e-10 of the field's maximum magnitude count
// as zero; zero_fraction reports their share.
struct SignCoverage {
  bool has_positive;
  bool has_negative;
  double zero_fraction;
};
SignCoverage sign_coverage(const std::vector<double>& field);

}  // namespace latticespread
