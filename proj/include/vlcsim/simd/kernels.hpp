#pragma once

// Per-subcarrier linear-receiver kernels. Every variant implements the same
// arithmetic in the same order, so the SIMD builds reproduce the scalar
// reference bit for bit (the project is built with -ffp-contract=off and
// the vector code never fuses multiply-adds).

#include <span>
#include <string_view>

#include "vlcsim/simd/planar.hpp"

namespace vlcsim::simd {

struct Kernels {
  std::string_view name;

  // One stream: inv[k] = 1 / sum_i |h_i0[k]|^2 and cond[k] = 1, or +inf for
  // both when the column is all zero.
  void (*gram_inverse_1)(const PlanarChannel& h, std::span<double> inv, std::span<double> cond);

  // Two streams: diagonal of (H^H H)^-1 and the 2-norm condition number of
  // H^H H. Singular subcarriers (det <= 0) report +inf everywhere.
  void (*gram_inverse_2)(const PlanarChannel& h, std::span<double> inv0, std::span<double> inv1,
                         std::span<double> cond);

  // MRC: s = sum_i conj(h_i0) y_i / sum_i |h_i0|^2, zero where the column is dead.
  void (*equalize_1)(const PlanarChannel& h, const PlanarSignal& y, PlanarSignal& s);

  // ZF: s = (H^H H)^-1 H^H y per subcarrier, zero where H^H H is singular.
  void (*equalize_2)(const PlanarChannel& h, const PlanarSignal& y, PlanarSignal& s);
};

const Kernels& scalar_kernels();

// nullptr when the variant is not compiled in or the CPU lacks it.
const Kernels* avx2_kernels();
const Kernels* neon_kernels();

// Best variant for this CPU. VLCSIM_SIMD=scalar|avx2|neon forces a choice
// (ignored if unavailable).
const Kernels& active_kernels();

}  // namespace vlcsim::simd
