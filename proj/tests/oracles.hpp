#pragma once

// Reference values computed independently of the library: closed forms
// written out longhand, and published 802.11n numbers.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

namespace oracle {

inline double deg(double d) { return d * std::numbers::pi / 180.0; }

// (m+1) A / (2 pi d^2) cos^m(phi) cos(psi), angles in degrees.
inline double lambertian_gain(double m, double area, double d, double phi_deg, double psi_deg) {
  return (m + 1.0) * area / (2.0 * std::numbers::pi * d * d) * std::pow(std::cos(deg(phi_deg)), m) *
         std::cos(deg(psi_deg));
}

inline double q(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// 802.11n HT data rates, Mbit/s, one spatial stream, MCS 0-7.
inline constexpr std::array<double, 8> kRate20LongGi = {6.5, 13.0, 19.5, 26.0, 39.0, 52.0, 58.5, 65.0};
inline constexpr std::array<double, 8> kRate40ShortGi = {15.0, 30.0, 45.0, 60.0, 90.0, 120.0, 135.0, 150.0};

// Diagonal of (H^H H)^-1 for an N x 2 complex H, by the 2x2 adjugate.
template <std::size_t N>
std::array<double, 2> zf_inverse_diag(const std::array<std::array<std::complex<double>, 2>, N>& h) {
  double a = 0.0, d = 0.0;
  std::complex<double> b = 0.0;
  for (const auto& row : h) {
    a += std::norm(row[0]);
    d += std::norm(row[1]);
    b += std::conj(row[0]) * row[1];
  }
  const double det = a * d - std::norm(b);
  return {d / det, a / det};
}

}  // namespace oracle
