#pragma once

#include <vector>

#include "latticespread/geometry.hpp"

namespace latticespread {

// Amplitudes of the single-excitation wavefunction at one instant.
struct WaveformSnapshot {
  double time = 0.0;
  ComplexVector amplitudes;

  double survival() const { return amplitudes.squaredNorm(); }

  // For evolution that started from a normalized state under a
  // positive-semidefinite decay matrix the norm can only shrink.
  void check_physical() const {
    require(all_finite(amplitudes), "snapshot", "non-finite amplitude");
    require(survival() <= 1.0 + 1e-9, "snapshot", "survival exceeds one");
  }
};

inline double survival_probability(const ComplexVector& psi) { return psi.squaredNorm(); }

// One-dimensional cut through a snapshot, used by peak tracking.
enum class SectionKind { Row, Column, DiagonalMain, DiagonalAnti, Radial };

struct SectionProfile {
  SectionKind kind = SectionKind::Row;
  double time = 0.0;
  std::vector<int> sites;             // empty for radial bins
  std::vector<double> coordinate;     // signed distance along the cut
  std::vector<double> probability;
};

// Extracts a cut passing through the origin site (rows/columns through the
// origin; diagonals require a square lattice). Radial profiles average the
// probability over rings of unit width in r.
SectionProfile cross_section(const WaveformSnapshot& snap, const LatticeGeometry& geom,
                             SectionKind kind);

}  // namespace latticespread
