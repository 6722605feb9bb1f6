#include "latticespread/battery.hpp"

#include <cmath>

namespace latticespread {

const std::vector<SmoothDispersion1D>& battery_1d() {
  static const std::vector<SmoothDispersion1D> bands = [] {
    std::vector<SmoothDispersion1D> b;
    b.reserve(10);
    b.emplace_back("flat", true,
                   [](double) { return 0.7; },
                   [](double) { return 0.0; },
                   [](double) { return 0.0; });
    b.emplace_back("nearest-neighbor", false,
                   [](double k) { return -2.0 * std::cos(k); },
                   [](double k) { return 2.0 * std::sin(k); },
                   [](double k) { return 2.0 * std::cos(k); });
    b.emplace_back("two-harmonic", false,
                   [](double k) { return -2.0 * std::cos(k) + 0.7 * std::cos(2.0 * k); },
                   [](double k) { return 2.0 * std::sin(k) - 1.4 * std::sin(2.0 * k); },
                   [](double k) { return 2.0 * std::cos(k) - 2.8 * std::cos(2.0 * k); });
    b.emplace_back("odd-harmonics", false,
                   [](double k) { return std::sin(k) + 0.3 * std::sin(3.0 * k); },
                   [](double k) { return std::cos(k) + 0.9 * std::cos(3.0 * k); },
                   [](double k) { return -std::sin(k) - 2.7 * std::sin(3.0 * k); });
    b.emplace_back("exponential", false,
                   [](double k) { return std::exp(0.8 * std::cos(k)); },
                   [](double k) { return -0.8 * std::sin(k) * std::exp(0.8 * std::cos(k)); },
                   [](double k) {
                     const double e = std::exp(0.8 * std::cos(k));
                     return e * (0.64 * std::sin(k) * std::sin(k) - 0.8 * std::cos(k));
                   });
    b.emplace_back("sine-of-sine", false,
                   [](double k) { return std::sin(std::sin(k)); },
                   [](double k) { return std::cos(std::sin(k)) * std::cos(k); },
                   [](double k) {
                     const double s = std::sin(k), c = std::cos(k);
                     return -std::sin(s) * c * c - std::cos(s) * s;
                   });
    b.emplace_back("resonant", false,
                   [](double k) { return 1.0 / (2.0 + std::cos(k)); },
                   [](double k) {
                     const double d = 2.0 + std::cos(k);
                     return std::sin(k) / (d * d);
                   },
                   [](double k) {
                     const double s = std::sin(k), c = std::cos(k), d = 2.0 + c;
                     return (c * d + 2.0 * s * s) / (d * d * d);
                   });
    b.emplace_back("asymmetric", false,
                   [](double k) { return std::cos(k) + 0.5 * std::sin(2.0 * k); },
                   [](double k) { return -std::sin(k) + std::cos(2.0 * k); },
                   [](double k) { return -std::cos(k) - 2.0 * std::sin(2.0 * k); });
    b.emplace_back("third-harmonic", false,
                   [](double k) { return std::cos(3.0 * k); },
                   [](double k) { return -3.0 * std::sin(3.0 * k); },
                   [](double k) { return -9.0 * std::cos(3.0 * k); });
    b.emplace_back("cosh-band", false,
                   [](double k) { return std::cosh(std::cos(k)); },
                   [](double k) { return -std::sinh(std::cos(k)) * std::sin(k); },
                   [](double k) {
                     const double s = std::sin(k), c = std::cos(k);
                     return s * s * std::cosh(c) - c * std::sinh(c);
                   });
    return b;
  }();
  return bands;
}

const std::vector<SmoothBand2D>& battery_2d() {
  static const std::vector<SmoothBand2D> bands = {
      {"separable",
       [](double kx, double ky) { return std::cos(kx) + std::cos(ky); }},
      {"sheared",
       [](double kx, double ky) {
         return std::cos(kx) + std::cos(ky) + 0.3 * std::cos(kx + ky);
       }},
      {"exponential-2d",
       [](double kx, double ky) {
         return std::exp(0.5 * (std::cos(kx) + std::cos(ky)));
       }},
      {"modulated",
       [](double kx, double ky) {
         return std::cos(kx) * std::cos(ky) + 0.2 * std::cos(2.0 * kx);
       }},
      {"oblique",
       [](double kx, double ky) {
         return std::sin(kx) * std::sin(ky) + 0.4 * std::cos(ky);
       }},
  };
  return bands;
}

}  // namespace latticespread
