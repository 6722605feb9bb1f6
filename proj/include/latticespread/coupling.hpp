#pragma once

#include <string>
#include <variant>

#include "latticespread/numeric.hpp"

namespace latticespread {

// Hopping amplitudes J_ij = 1/|r_i - r_j|^alpha in units where the
// nearest-neighbour hop sets the clock, t0 = a^alpha. Hermitian.
struct PowerLawCoupling {
  double alpha = 3.0;
};

// Chain coupled through a 1D photonic channel: J_ij = -(i/2) e^{-i k_a |x_i - x_j|}
// with on-site term -(i/2), all in units of the single-emitter rate gamma_a.
// k_a is the channel wavenumber in units of 1/a.
struct WaveguideCoupling {
  double k_a = 0.3 * kPi;
};

// Emitters in three-dimensional vacuum with a common dipole orientation;
// couplings are the projected dyadic Green tensor, units of gamma_a.
struct FreeSpaceCoupling {
  double k_a = 0.3 * kPi;
  Eigen::Vector3cd polarization = Eigen::Vector3cd(0.0, 0.0, 1.0);
};

class CouplingModel {
 public:
  using Variant = std::variant<PowerLawCoupling, WaveguideCoupling, FreeSpaceCoupling>;

  CouplingModel() : model_(PowerLawCoupling{}) {}
  CouplingModel(PowerLawCoupling m) : model_(m) { validate(); }
  CouplingModel(WaveguideCoupling m) : model_(m) { validate(); }
  CouplingModel(FreeSpaceCoupling m) : model_(m) { normalize(); validate(); }

  const Variant& variant() const { return model_; }

  bool is_power_law() const { return std::holds_alternative<PowerLawCoupling>(model_); }
  bool is_waveguide() const { return std::holds_alternative<WaveguideCoupling>(model_); }
  bool is_free_space() const { return std::holds_alternative<FreeSpaceCoupling>(model_); }

  const PowerLawCoupling& power_law() const { return std::get<PowerLawCoupling>(model_); }
  const WaveguideCoupling& waveguide() const { return std::get<WaveguideCoupling>(model_); }
  const FreeSpaceCoupling& free_space() const { return std::get<FreeSpaceCoupling>(model_); }

  // Only the power-law model conserves the excitation; the photon-mediated
  // models carry a positive-semidefinite decay part.
  bool is_hermitian() const { return is_power_law(); }

  // Wavenumber of the mediating field, or 0 where the notion does not apply.
  double light_wavenumber() const {
    if (is_waveguide()) return waveguide().k_a;
    if (is_free_space()) return free_space().k_a;
    return 0.0;
  }

  std::string name() const {
    if (is_power_law()) return "power_law";
    if (is_waveguide()) return "waveguide";
    return "free_space";
  }

  std::string energy_unit() const {
    return is_power_law() ? "1/t0 (t0 = a^alpha)" : "gamma_a";
  }
  std::string time_unit() const {
    return is_power_law() ? "t0 (t0 = a^alpha)" : "1/gamma_a";
  }

  void validate() const {
    if (is_power_law())
      require(power_law().alpha > 0.0, "coupling", "power-law exponent must be positive");
    if (is_waveguide())
      require(waveguide().k_a > 0.0, "coupling", "waveguide wavenumber must be positive");
    if (is_free_space()) {
      require(free_space().k_a > 0.0, "coupling", "light wavenumber must be positive");
      require(std::abs(free_space().polarization.norm() - 1.0) < 1e-12, "coupling",
              "polarization must be a unit vector");
    }
  }

 private:
  void normalize() {
    auto& fs = std::get<FreeSpaceCoupling>(model_);
    const double norm = fs.polarization.norm();
    require(norm > 0.0, "coupling", "polarization must be nonzero");
    fs.polarization /= norm;
  }

  Variant model_;
};

}  // namespace latticespread
