#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace latticespread {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr Complex kI{0.0, 1.0};

// Failure category drives the CLI exit code: Usage -> 1, Runtime -> 2.
enum class ErrorCategory { Usage, Runtime };

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, std::string stage, const std::string& message)
      : std::runtime_error(message), category(category), stage(std::move(stage)) {}

  ErrorCategory category;
  std::string stage;  // pipeline stage that failed, for machine-parseable reporting
};

inline void require(bool condition, const char* stage, const std::string& message) {
  if (!condition) throw Error(ErrorCategory::Runtime, stage, message);
}

inline void require_usage(bool condition, const char* stage, const std::string& message) {
  if (!condition) throw Error(ErrorCategory::Usage, stage, message);
}

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline bool all_finite(const ComplexVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!is_finite(v[i])) return false;
  return true;
}

inline bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!is_finite(m(i, j))) return false;
  return true;
}

// Wraps k into (-pi, pi]; dispersions are 2*pi periodic in each component.
inline double wrap_to_zone(double k) {
  double w = std::remainder(k, kTwoPi);
  if (w <= -kPi) w += kTwoPi;
  return w;
}

}  // namespace latticespread
