#pragma once

// Per-subcarrier scalar reference. The vector variants use these for their
// tails and mirror the operation order exactly.

#include <cmath>
#include <cstddef>
#include <limits>

#include "vlcsim/simd/planar.hpp"

namespace vlcsim::simd::detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline void gram_inverse_1_at(const PlanarChannel& h, std::size_t k, double* inv, double* cond) {
  double a = 0.0;
  for (std::size_t i = 0; i < h.n_rx(); ++i) {
    const double r = h.re(i, 0)[k];
    const double m = h.im(i, 0)[k];
    a = a + (r * r + m * m);
  }
  const bool live = a > 0.0;
  inv[k] = live ? 1.0 / a : kInf;
  cond[k] = live ? 1.0 : kInf;
}

struct Gram2 {
  double a = 0.0;   // sum |h0|^2
  double d = 0.0;   // sum |h1|^2
  double br = 0.0;  // sum conj(h0) h1
  double bi = 0.0;
};

inline Gram2 gram_2_at(const PlanarChannel& h, std::size_t k) {
  Gram2 g;
  for (std::size_t i = 0; i < h.n_rx(); ++i) {
    const double r0 = h.re(i, 0)[k];
    const double m0 = h.im(i, 0)[k];
    const double r1 = h.re(i, 1)[k];
    const double m1 = h.im(i, 1)[k];
    g.a = g.a + (r0 * r0 + m0 * m0);
    g.d = g.d + (r1 * r1 + m1 * m1);
    g.br = g.br + (r0 * r1 + m0 * m1);
    g.bi = g.bi + (r0 * m1 - m0 * r1);
  }
  return g;
}

inline void gram_inverse_2_at(const PlanarChannel& h, std::size_t k, double* inv0, double* inv1,
                              double* cond) {
  const Gram2 g = gram_2_at(h, k);
  const double bb = g.br * g.br + g.bi * g.bi;
  const double det = g.a * g.d - bb;
  const double half_sum = (g.a + g.d) * 0.5;
  const double half_diff = (g.a - g.d) * 0.5;
  const double lmax = half_sum + std::sqrt(half_diff * half_diff + bb);
  const bool ok = det > 0.0;
  inv0[k] = ok ? g.d / det : kInf;
  inv1[k] = ok ? g.a / det : kInf;
  cond[k] = ok ? (lmax * lmax) / det : kInf;
}

inline void equalize_1_at(const PlanarChannel& h, const PlanarSignal& y, PlanarSignal& s,
                          std::size_t k) {
  double a = 0.0;
  double zr = 0.0;
  double zi = 0.0;
  for (std::size_t i = 0; i < h.n_rx(); ++i) {
    const double r = h.re(i, 0)[k];
    const double m = h.im(i, 0)[k];
    const double yr = y.re(i)[k];
    const double yi = y.im(i)[k];
    a = a + (r * r + m * m);
    zr = zr + (r * yr + m * yi);
    zi = zi + (r * yi - m * yr);
  }
  const bool live = a > 0.0;
  s.re(0)[k] = live ? zr / a : 0.0;
  s.im(0)[k] = live ? zi / a : 0.0;
}

inline void equalize_2_at(const PlanarChannel& h, const PlanarSignal& y, PlanarSignal& s,
                          std::size_t k) {
  Gram2 g;
  double z0r = 0.0, z0i = 0.0, z1r = 0.0, z1i = 0.0;
  for (std::size_t i = 0; i < h.n_rx(); ++i) {
    const double r0 = h.re(i, 0)[k];
    const double m0 = h.im(i, 0)[k];
    const double r1 = h.re(i, 1)[k];
    const double m1 = h.im(i, 1)[k];
    const double yr = y.re(i)[k];
    const double yi = y.im(i)[k];
    g.a = g.a + (r0 * r0 + m0 * m0);
    g.d = g.d + (r1 * r1 + m1 * m1);
    g.br = g.br + (r0 * r1 + m0 * m1);
    g.bi = g.bi + (r0 * m1 - m0 * r1);
    z0r = z0r + (r0 * yr + m0 * yi);
    z0i = z0i + (r0 * yi - m0 * yr);
    z1r = z1r + (r1 * yr + m1 * yi);
    z1i = z1i + (r1 * yi - m1 * yr);
  }
  const double det = g.a * g.d - (g.br * g.br + g.bi * g.bi);
  const bool ok = det > 0.0;
  // s0 = (d z0 - b z1) / det, s1 = (a z1 - conj(b) z0) / det
  const double s0r = g.d * z0r - (g.br * z1r - g.bi * z1i);
  const double s0i = g.d * z0i - (g.br * z1i + g.bi * z1r);
  const double s1r = g.a * z1r - (g.br * z0r + g.bi * z0i);
  const double s1i = g.a * z1i - (g.br * z0i - g.bi * z0r);
  s.re(0)[k] = ok ? s0r / det : 0.0;
  s.im(0)[k] = ok ? s0i / det : 0.0;
  s.re(1)[k] = ok ? s1r / det : 0.0;
  s.im(1)[k] = ok ? s1i / det : 0.0;
}

}  // namespace vlcsim::simd::detail
