#include "latticespread/hamiltonian.hpp"

#include <cmath>
#include <cstring>

#include <fftw3.h>

#include "latticespread/green.hpp"

namespace latticespread {

namespace detail {

// FFTW plans for the padded grid plus the precomputed kernel spectrum.
// Plans are created once per Hamiltonian and shared by copies; execution on
// distinct buffers is safe concurrently.
struct ConvPlan {
  int px = 0, py = 0;  // padded extents, >= 2n-1 for exact linear convolution
  std::vector<Complex> kernel_spectrum;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~ConvPlan() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

}  // namespace detail

namespace {

fftw_complex* as_fftw(std::vector<Complex>& v) {
  return reinterpret_cast<fftw_complex*>(v.data());
}

}  // namespace

Hamiltonian::Hamiltonian(LatticeGeometry geometry, CouplingModel model)
    : geometry_(std::move(geometry)), model_(std::move(model)) {
  geometry_.validate();
  model_.validate();

  const int nx = geometry_.n_x;
  const int ny = geometry_.n_y;

  if (model_.is_waveguide())
    require(geometry_.dimension == 1, "hamiltonian", "waveguide coupling is chain-only");
  if (model_.is_power_law())
    require(geometry_.dimension == 1 || geometry_.a_x == geometry_.a_y, "hamiltonian",
            "power-law model expects a square lattice (a_x == a_y)");

  diagonal_ = model_.is_hermitian() ? Complex(0.0, 0.0) : Complex(0.0, -0.5);

  const int tx = 2 * nx - 1;
  const int ty = 2 * ny - 1;
  table_.assign(static_cast<size_t>(tx) * ty, Complex(0.0, 0.0));

  const double ax = geometry_.a_x;
  const double ay = geometry_.a_y;
  for (int dy = -(ny - 1); dy <= ny - 1; ++dy) {
    for (int dx = -(nx - 1); dx <= nx - 1; ++dx) {
      if (dx == 0 && dy == 0) continue;
      Complex j;
      if (model_.is_power_law()) {
        // r in units of the lattice constant; t0 = a^alpha sets the clock
        const double r = std::hypot(dx, dy);
        j = std::pow(r, -model_.power_law().alpha);
      } else if (model_.is_waveguide()) {
        const double phase = model_.waveguide().k_a * std::abs(dx) * ax;
        j = Complex(0.0, -0.5) * std::exp(Complex(0.0, -phase));
      } else {
        const Eigen::Vector3d r(dx * ax, dy * ay, 0.0);
        j = free_space_coupling(r, model_.free_space().k_a,
                                model_.free_space().polarization);
      }
      table_[static_cast<size_t>(table_index(dx, dy))] = j;
    }
  }

  // Kernel spectrum for the convolution apply.
  plan_ = std::make_shared<detail::ConvPlan>();
  plan_->px = 2 * nx - 1;
  plan_->py = 2 * ny - 1;
  const int px = plan_->px, py = plan_->py;
  std::vector<Complex> kernel(static_cast<size_t>(px) * py, Complex(0.0, 0.0));
  for (int dy = -(ny - 1); dy <= ny - 1; ++dy) {
    for (int dx = -(nx - 1); dx <= nx - 1; ++dx) {
      const int wx = (dx % px + px) % px;
      const int wy = (dy % py + py) % py;
      Complex v = (dx == 0 && dy == 0) ? diagonal_
                                       : table_[static_cast<size_t>(table_index(dx, dy))];
      kernel[static_cast<size_t>(wy) * px + wx] = v;
    }
  }

  plan_->kernel_spectrum.resize(kernel.size());
  {
    fftw_plan k = fftw_plan_dft_2d(py, px, as_fftw(kernel),
                                   as_fftw(plan_->kernel_spectrum), FFTW_FORWARD,
                                   FFTW_ESTIMATE);
    fftw_execute(k);
    fftw_destroy_plan(k);
  }
  const double norm = 1.0 / (static_cast<double>(px) * py);
  for (auto& c : plan_->kernel_spectrum) c *= norm;

  // In-place transforms over the shared padded layout.
  std::vector<Complex> probe(kernel.size());
  plan_->forward = fftw_plan_dft_2d(py, px, as_fftw(probe), as_fftw(probe),
                                    FFTW_FORWARD, FFTW_ESTIMATE);
  plan_->backward = fftw_plan_dft_2d(py, px, as_fftw(probe), as_fftw(probe),
                                     FFTW_BACKWARD, FFTW_ESTIMATE);
}

int Hamiltonian::table_index(int dx, int dy) const {
  const int tx = 2 * geometry_.n_x - 1;
  return (dy + geometry_.n_y - 1) * tx + (dx + geometry_.n_x - 1);
}

Complex Hamiltonian::coupling(int dx, int dy) const {
  require(std::abs(dx) < geometry_.n_x && std::abs(dy) < geometry_.n_y, "hamiltonian",
          "displacement outside lattice");
  return table_[static_cast<size_t>(table_index(dx, dy))];
}

Complex Hamiltonian::element(int i, int j) const {
  require(geometry_.contains(i) && geometry_.contains(j), "hamiltonian",
          "site index out of range");
  if (i == j) return diagonal_;
  const int dx = geometry_.index_x(i) - geometry_.index_x(j);
  const int dy = geometry_.index_y(i) - geometry_.index_y(j);
  return table_[static_cast<size_t>(table_index(dx, dy))];
}

ComplexMatrix Hamiltonian::dense() const {
  const int n = size();
  require(n <= kDenseLimit, "hamiltonian",
          "dense materialization limited to N <= " + std::to_string(kDenseLimit) +
              "; use the matrix-free apply");
  ComplexMatrix m(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m(i, j) = element(i, j);
  return m;
}

void Hamiltonian::apply(const ComplexVector& in, ComplexVector& out) const {
  apply(in, out, internal_ws_);
}

void Hamiltonian::apply(const ComplexVector& in, ComplexVector& out,
                        ApplyWorkspace& ws) const {
  const int nx = geometry_.n_x, ny = geometry_.n_y;
  require(in.size() == size(), "hamiltonian", "vector length mismatch");
  const int px = plan_->px, py = plan_->py;

  auto& pad = ws.padded_;
  pad.assign(static_cast<size_t>(px) * py, Complex(0.0, 0.0));
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix)
      pad[static_cast<size_t>(iy) * px + ix] = in[static_cast<Eigen::Index>(iy) * nx + ix];

  fftw_execute_dft(plan_->forward, as_fftw(pad), as_fftw(pad));
  const auto& ks = plan_->kernel_spectrum;
  for (size_t i = 0; i < pad.size(); ++i) pad[i] *= ks[i];
  fftw_execute_dft(plan_->backward, as_fftw(pad), as_fftw(pad));

  out.resize(size());
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix)
      out[static_cast<Eigen::Index>(iy) * nx + ix] = pad[static_cast<size_t>(iy) * px + ix];
}

void Hamiltonian::apply_direct(const ComplexVector& in, ComplexVector& out) const {
  const int n = size();
  require(in.size() == n, "hamiltonian", "vector length mismatch");
  out.resize(n);
  const int nx = geometry_.n_x;
  for (int i = 0; i < n; ++i) {
    const int ixi = i % nx, iyi = i / nx;
    Complex acc = diagonal_ * in[i];
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const int dx = ixi - (j % nx);
      const int dy = iyi - (j / nx);
      acc += table_[static_cast<size_t>(table_index(dx, dy))] * in[j];
    }
    out[i] = acc;
  }
}

double Hamiltonian::coupling_l1_bound() const {
  double sum = std::abs(diagonal_);
  for (const auto& v : table_) sum += std::abs(v);
  return sum;
}

std::vector<Hamiltonian::TableEntry> Hamiltonian::table_rows() const {
  std::vector<TableEntry> rows;
  rows.reserve(table_.size());
  for (int dy = -(geometry_.n_y - 1); dy <= geometry_.n_y - 1; ++dy)
    for (int dx = -(geometry_.n_x - 1); dx <= geometry_.n_x - 1; ++dx) {
      const Complex v = (dx == 0 && dy == 0)
                            ? diagonal_
                            : table_[static_cast<size_t>(table_index(dx, dy))];
      rows.push_back({dx, dy, v});
    }
  return rows;
}

Hamiltonian build_power_law(const LatticeGeometry& geometry, double alpha) {
  return Hamiltonian(geometry, CouplingModel(PowerLawCoupling{alpha}));
}

Hamiltonian build_waveguide(const LatticeGeometry& geometry, double k_a) {
  return Hamiltonian(geometry, CouplingModel(WaveguideCoupling{k_a}));
}

Hamiltonian build_free_space(const LatticeGeometry& geometry, double k_a,
                             const Eigen::Vector3cd& polarization) {
  FreeSpaceCoupling fs;
  fs.k_a = k_a;
  fs.polarization = polarization;
  return Hamiltonian(geometry, CouplingModel(fs));
}

Hamiltonian build_hamiltonian(const LatticeGeometry& geometry, const CouplingModel& model) {
  return Hamiltonian(geometry, model);
}

}  // namespace latticespread
