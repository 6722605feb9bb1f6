#pragma once

#include <memory>
#include <vector>

#include "latticespread/coupling.hpp"
#include "latticespread/geometry.hpp"

namespace latticespread {

namespace detail {
struct ConvPlan;  // cached FFT machinery for the displacement convolution
}

// Scratch buffers for one concurrent apply() stream. Each thread that wants
// to apply the same Hamiltonian concurrently must own its workspace.
class ApplyWorkspace {
 public:
  ApplyWorkspace() = default;

 private:
  friend class Hamiltonian;
  std::vector<Complex> padded_;
};

// Effective single-excitation Hamiltonian on a finite lattice. Because every
// model couples through the displacement r_i - r_j only, the full N x N matrix
// is never stored: couplings live in a (2 n_x - 1) x (2 n_y - 1) table and
// M * v is evaluated as an exact zero-padded FFT convolution.
//
// Matrices are complex symmetric (M_ij = M_ji, no conjugate); the photonic
// models are non-Hermitian with decay matrix Gamma = i (M - M^dag) >= 0.
class Hamiltonian {
 public:
  Hamiltonian(LatticeGeometry geometry, CouplingModel model);

  const LatticeGeometry& geometry() const { return geometry_; }
  const CouplingModel& model() const { return model_; }
  int size() const { return geometry_.size(); }
  bool is_hermitian() const { return model_.is_hermitian(); }
  Complex diagonal() const { return diagonal_; }

  // Coupling for site displacement (dx, dy); zero at the origin
  // (the on-site term is tracked separately).
  Complex coupling(int dx, int dy) const;

  // Matrix element including the diagonal.
  Complex element(int i, int j) const;

  // Full matrix; refuses sizes whose dense storage is unreasonable.
  static constexpr int kDenseLimit = 2000;
  ComplexMatrix dense() const;

  // out = M * in via cached FFT convolution. The two-argument form reuses an
  // internal workspace and must not be called concurrently on one instance;
  // the three-argument form is safe with distinct workspaces.
  void apply(const ComplexVector& in, ComplexVector& out) const;
  void apply(const ComplexVector& in, ComplexVector& out, ApplyWorkspace& ws) const;

  // Reference O(N^2) table application, for cross-checks.
  void apply_direct(const ComplexVector& in, ComplexVector& out) const;

  // Upper bound on the induced 1-norm (worst row of |M|), used for
  // propagator step sizing.
  double coupling_l1_bound() const;

  // Access to the raw displacement table for export: rows (dx, dy, J).
  struct TableEntry {
    int dx, dy;
    Complex value;
  };
  std::vector<TableEntry> table_rows() const;

 private:
  int table_index(int dx, int dy) const;

  LatticeGeometry geometry_;
  CouplingModel model_;
  Complex diagonal_{0.0, 0.0};
  std::vector<Complex> table_;  // (2 n_x - 1) * (2 n_y - 1), row-major in dy
  std::shared_ptr<detail::ConvPlan> plan_;
  mutable ApplyWorkspace internal_ws_;
};

Hamiltonian build_power_law(const LatticeGeometry& geometry, double alpha);
Hamiltonian build_waveguide(const LatticeGeometry& geometry, double k_a);
Hamiltonian build_free_space(const LatticeGeometry& geometry, double k_a,
                             const Eigen::Vector3cd& polarization);
Hamiltonian build_hamiltonian(const LatticeGeometry& geometry, const CouplingModel& model);

}  // namespace latticespread
