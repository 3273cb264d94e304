#include "scalar_ops.hpp"
#include "vlcsim/simd/kernels.hpp"

namespace vlcsim::simd {

namespace {

void gram_inverse_1(const PlanarChannel& h, std::span<double> inv, std::span<double> cond) {
  for (std::size_t k = 0; k < h.n_sc(); ++k) detail::gram_inverse_1_at(h, k, inv.data(), cond.data());
}

void gram_inverse_2(const PlanarChannel& h, std::span<double> inv0, std::span<double> inv1,
                    std::span<double> cond) {
  for (std::size_t k = 0; k < h.n_sc(); ++k)
    detail::gram_inverse_2_at(h, k, inv0.data(), inv1.data(), cond.data());
}

void equalize_1(const PlanarChannel& h, const PlanarSignal& y, PlanarSignal& s) {
  for (std::size_t k = 0; k < h.n_sc(); ++k) detail::equalize_1_at(h, y, s, k);
}

void equalize_2(const PlanarChannel& h, const PlanarSignal& y, PlanarSignal& s) {
  for (std::size_t k = 0; k < h.n_sc(); ++k) detail::equalize_2_at(h, y, s, k);
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{"scalar", gram_inverse_1, gram_inverse_2, equalize_1, equalize_2};
  return k;
}

}  // namespace vlcsim::simd
