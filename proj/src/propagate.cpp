#include "latticespread/propagate.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace latticespread {

namespace {

struct ArnoldiBasis {
  ComplexMatrix v;          // n x (m+1) orthonormal columns
  ComplexMatrix h;          // (m+2) x (m+2), augmented Hessenberg
  int m = 0;                // effective subspace dimension
  bool invariant = false;   // happy breakdown: subspace is exact
  double avnorm = 0.0;      // ||H v_{m+1}||, for the second-order error term
};

// Builds an orthonormal Krylov basis of span{psi, H psi, ...} with modified
// Gram-Schmidt and one reorthogonalization pass.
ArnoldiBasis arnoldi(const ApplyFn& apply, const ComplexVector& psi, double beta,
                     int m_max, EvolveDiagnostics& diag) {
  const Eigen::Index n = psi.size();
  ArnoldiBasis b;
  b.v.resize(n, m_max + 1);
  b.h = ComplexMatrix::Zero(m_max + 2, m_max + 2);
  b.v.col(0) = psi / beta;

  ComplexVector w(n);
  const double breakdown = 1e-14;
  for (int j = 0; j < m_max; ++j) {
    apply(b.v.col(j), w);
    ++diag.applies;
    double pre_norm = w.norm();
    for (int i = 0; i <= j; ++i) {
      const Complex hij = b.v.col(i).dot(w);
      b.h(i, j) = hij;
      w.noalias() -= hij * b.v.col(i);
    }
    // second orthogonalization pass guards against loss of orthogonality
    for (int i = 0; i <= j; ++i) {
      const Complex corr = b.v.col(i).dot(w);
      b.h(i, j) += corr;
      w.noalias() -= corr * b.v.col(i);
    }
    const double hnext = w.norm();
    b.m = j + 1;
    if (hnext <= breakdown * std::max(1.0, pre_norm)) {
      b.invariant = true;
      return b;
    }
    b.h(j + 1, j) = hnext;
    b.v.col(j + 1) = w / hnext;
  }

  // augmented corner used by the two-term local error estimate
  b.h(b.m + 1, b.m) = Complex(1.0, 0.0);
  apply(b.v.col(b.m), w);
  ++diag.applies;
  b.avnorm = w.norm();
  return b;
}

}  // namespace

std::vector<ComplexVector> krylov_propagate(const ApplyFn& apply, ComplexVector psi,
                                            const std::vector<double>& times,
                                            double norm_bound,
                                            const EvolveOptions& options,
                                            EvolveDiagnostics* diagnostics) {
  require(!times.empty(), "propagate", "no sample times given");
  require(times.front() >= 0.0, "propagate", "sample times must be non-negative");
  for (size_t i = 1; i < times.size(); ++i)
    require(times[i] > times[i - 1], "propagate", "sample times must increase");
  require(options.krylov_dim >= 2, "propagate", "krylov_dim must be at least 2");
  require(all_finite(psi), "propagate", "non-finite initial state");

  EvolveDiagnostics local;
  EvolveDiagnostics& diag = diagnostics ? *diagnostics : local;
  diag = EvolveDiagnostics{};

  std::vector<ComplexVector> out;
  out.reserve(times.size());

  const double t_final = times.back();
  double t = 0.0;
  size_t next_sample = 0;

  auto emit_samples_at = [&](double t_now) {
    while (next_sample < times.size() &&
           times[next_sample] <= t_now + 1e-14 * std::max(1.0, t_final)) {
      out.push_back(psi);
      ++next_sample;
    }
  };
  emit_samples_at(t);
  if (next_sample == times.size()) return out;

  double dt = 1.0 / std::max(norm_bound, 1e-30);  // conservative seed; adapts quickly

  while (next_sample < times.size()) {
    require(diag.steps + diag.rejected < options.max_steps, "propagate",
            "step limit exceeded (generator norm too large for the time span?)");

    const double beta = psi.norm();
    if (beta == 0.0) {
      // fully decayed; all remaining samples are zero
      while (next_sample < times.size()) {
        out.push_back(psi);
        ++next_sample;
      }
      break;
    }

    ArnoldiBasis basis = arnoldi(apply, psi, beta, options.krylov_dim, diag);
    const int m = basis.m;

    // never step past the next requested sample
    double step = std::min(dt, times[next_sample] - t);

    for (;;) {
      const int aug = basis.invariant ? m : m + 2;
      ComplexMatrix hs = basis.h.topLeftCorner(aug, aug);
      hs *= Complex(0.0, -step);
      const ComplexMatrix f = hs.exp();

      double err = 0.0;
      if (!basis.invariant) {
        const double err1 = std::abs(beta * f(m, 0));
        const double err2 = std::abs(beta * f(m + 1, 0)) * basis.avnorm;
        if (err1 > 10.0 * err2)
          err = err2;
        else if (err1 > err2)
          err = err1 * err2 / (err1 - err2);
        else
          err = err1;
      }

      const double tol_step = options.tol * beta;  // relative to current norm
      if (basis.invariant || err <= tol_step) {
        psi = basis.v.leftCols(m) * (beta * f.topLeftCorner(m, 1));
        t += step;
        ++diag.steps;
        diag.error_bound += err;
        if (!basis.invariant) {
          const double grow =
              options.safety * std::pow(tol_step / std::max(err, 1e-300), 1.0 / m);
          dt = step * std::min(5.0, std::max(0.2, grow));
        } else {
          dt = std::max(dt, 2.0 * step);
        }
        break;
      }
      ++diag.rejected;
      const double shrink =
          options.safety * std::pow(tol_step / err, 1.0 / m);
      step *= std::min(0.9, std::max(0.1, shrink));
      require(step > 1e-15 * std::max(1.0, t_final), "propagate",
              "step size underflow; generator may be ill-conditioned");
    }

    emit_samples_at(t);
  }

  return out;
}

std::vector<WaveformSnapshot> evolve(const Hamiltonian& h, int initial_site,
                                     const std::vector<double>& times,
                                     const EvolveOptions& options,
                                     EvolveDiagnostics* diagnostics) {
  require(h.geometry().contains(initial_site), "propagate", "initial site out of range");
  ComplexVector psi0 = ComplexVector::Zero(h.size());
  psi0[initial_site] = 1.0;

  ApplyWorkspace ws;
  ApplyFn apply = [&h, &ws](const ComplexVector& in, ComplexVector& out) {
    h.apply(in, out, ws);
  };

  auto states = krylov_propagate(apply, std::move(psi0), times, h.coupling_l1_bound(),
                                 options, diagnostics);

  std::vector<WaveformSnapshot> snaps;
  snaps.reserve(states.size());
  for (size_t i = 0; i < states.size(); ++i) {
    WaveformSnapshot s;
    s.time = times[i];
    s.amplitudes = std::move(states[i]);
    s.check_physical();
    snaps.push_back(std::move(s));
  }
  return snaps;
}

DensePropagator::DensePropagator(const ComplexMatrix& h) {
  require(h.rows() == h.cols(), "propagate", "matrix must be square");
  require(all_finite(h), "propagate", "non-finite matrix entry");
  Eigen::ComplexEigenSolver<ComplexMatrix> es(h, /*computeEigenvectors=*/true);
  require(es.info() == Eigen::Success, "propagate", "eigendecomposition failed");
  vectors_ = es.eigenvectors();
  values_ = es.eigenvalues();
  inverse_ = vectors_.partialPivLu().inverse();
}

ComplexVector DensePropagator::at(const ComplexVector& psi0, double t) const {
  ComplexVector c = inverse_ * psi0;
  for (Eigen::Index i = 0; i < c.size(); ++i)
    c[i] *= std::exp(Complex(0.0, -t) * values_[i]);
  return vectors_ * c;
}

}  // namespace latticespread
