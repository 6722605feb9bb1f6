#pragma once

#include <functional>
#include <vector>

#include "latticespread/hamiltonian.hpp"
#include "latticespread/snapshot.hpp"

namespace latticespread {

// Applies the generator to a vector: out = H * in.
using ApplyFn = std::function<void(const ComplexVector&, ComplexVector&)>;

struct EvolveOptions {
  double tol = 1e-11;      // local error target, relative to the current norm
  int krylov_dim = 36;     // Arnoldi subspace size per step
  double safety = 0.7;     // step controller damping
  long max_steps = 5'000'000;
};

struct EvolveDiagnostics {
  long steps = 0;
  long rejected = 0;
  long applies = 0;
  double error_bound = 0.0;  // accumulated local error estimates
};

// Propagates psi through exp(-i H t) at the requested times (non-negative,
// strictly increasing) with an adaptive Arnoldi scheme: per step the
// Hessenberg projection is exponentiated densely and the step size adapts to
// an augmented-matrix local error estimate. norm_bound is any upper bound on
// the operator norm of H (used only to seed the first step).
std::vector<ComplexVector> krylov_propagate(const ApplyFn& apply, ComplexVector psi0,
                                            const std::vector<double>& times,
                                            double norm_bound,
                                            const EvolveOptions& options = {},
                                            EvolveDiagnostics* diagnostics = nullptr);

// Lattice front end: starts from a delta excitation and checks physicality
// (survival cannot grow for these models).
std::vector<WaveformSnapshot> evolve(const Hamiltonian& h, int initial_site,
                                     const std::vector<double>& times,
                                     const EvolveOptions& options = {},
                                     EvolveDiagnostics* diagnostics = nullptr);

// Dense-diagonalization propagator, usable for modest N as a reference route
// or fallback: psi(t) = U exp(-i D t) U^{-1} psi0.
class DensePropagator {
 public:
  explicit DensePropagator(const ComplexMatrix& h);

  ComplexVector at(const ComplexVector& psi0, double t) const;

 private:
  ComplexMatrix vectors_;
  ComplexMatrix inverse_;
  ComplexVector values_;
};

}  // namespace latticespread
