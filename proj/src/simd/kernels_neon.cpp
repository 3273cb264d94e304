// NEON variants, two subcarriers per iteration (AArch64 only).

#include <arm_neon.h>

#include "scalar_ops.hpp"
#include "vlcsim/simd/kernels.hpp"

namespace vlcsim::simd {

namespace {

constexpr std::size_t kLanes = 2;

inline float64x2_t select(uint64x2_t mask, float64x2_t if_true, float64x2_t if_false) {
  return vbslq_f64(mask, if_true, if_false);
}

inline float64x2_t norm2(float64x2_t r, float64x2_t m) {
  return vaddq_f64(vmulq_f64(r, r), vmulq_f64(m, m));
}

void gram_inverse_1(const PlanarChannel& h, std::span<double> inv, std::span<double> cond) {
  const std::size_t n = h.n_sc();
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t one = vdupq_n_f64(1.0);
  const float64x2_t inf = vdupq_n_f64(detail::kInf);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    float64x2_t a = zero;
    for (std::size_t i = 0; i < h.n_rx(); ++i)
      a = vaddq_f64(a, norm2(vld1q_f64(h.re(i, 0) + k), vld1q_f64(h.im(i, 0) + k)));
    const uint64x2_t live = vcgtq_f64(a, zero);
    vst1q_f64(inv.data() + k, select(live, vdivq_f64(one, a), inf));
    vst1q_f64(cond.data() + k, select(live, one, inf));
  }
  for (; k < n; ++k) detail::gram_inverse_1_at(h, k, inv.data(), cond.data());
}

void gram_inverse_2(const PlanarChannel& h, std::span<double> inv0, std::span<double> inv1,
                    std::span<double> cond) {
  const std::size_t n = h.n_sc();
  const float64x2_t zero = vdupq_n_f64(0.0);
  const float64x2_t half = vdupq_n_f64(0.5);
  const float64x2_t inf = vdupq_n_f64(detail::kInf);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    float64x2_t a = zero, d = zero, br = zero, bi = zero;
    for (std::size_t i = 0; i < h.n_rx(); ++i) {
      const float64x2_t r0 = vld1q_f64(h.re(i, 0) + k);
      const float64x2_t m0 = vld1q_f64(h.im(i, 0) + k);
      const float64x2_t r1 = vld1q_f64(h.re(i, 1) + k);
      const float64x2_t m1 = vld1q_f64(h.im(i, 1) + k);
      a = vaddq_f64(a, norm2(r0, m0));
      d = vaddq_f64(d, norm2(r1, m1));
      br = vaddq_f64(br, vaddq_f64(vmulq_f64(r0, r1), vmulq_f64(m0, m1)));
      bi = vaddq_f64(bi, vsubq_f64(vmulq_f64(r0, m1), vmulq_f64(m0, r1)));
    }
    const float64x2_t bb = norm2(br, bi);
    const float64x2_t det = vsubq_f64(vmulq_f64(a, d), bb);
    const float64x2_t half_sum = vmulq_f64(vaddq_f64(a, d), half);
    const float64x2_t half_diff = vmulq_f64(vsubq_f64(a, d), half);
    const float64x2_t lmax =
        vaddq_f64(half_sum, vsqrtq_f64(vaddq_f64(vmulq_f64(half_diff, half_diff), bb)));
    const uint64x2_t ok = vcgtq_f64(det, zero);
    vst1q_f64(inv0.data() + k, select(ok, vdivq_f64(d, det), inf));
    vst1q_f64(inv1.data() + k, select(ok, vdivq_f64(a, det), inf));
    vst1q_f64(cond.data() + k, select(ok, vdivq_f64(vmulq_f64(lmax, lmax), det), inf));
  }
  for (; k < n; ++k) detail::gram_inverse_2_at(h, k, inv0.data(), inv1.data(), cond.data());
}

void equalize_1(const PlanarChannel& h, const PlanarSignal& y, PlanarSignal& s) {
  const std::size_t n = h.n_sc();
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    float64x2_t a = zero, zr = zero, zi = zero;
    for (std::size_t i = 0; i < h.n_rx(); ++i) {
      const float64x2_t r = vld1q_f64(h.re(i, 0) + k);
      const float64x2_t m = vld1q_f64(h.im(i, 0) + k);
      const float64x2_t yr = vld1q_f64(y.re(i) + k);
      const float64x2_t yi = vld1q_f64(y.im(i) + k);
      a = vaddq_f64(a, norm2(r, m));
      zr = vaddq_f64(zr, vaddq_f64(vmulq_f64(r, yr), vmulq_f64(m, yi)));
      zi = vaddq_f64(zi, vsubq_f64(vmulq_f64(r, yi), vmulq_f64(m, yr)));
    }
    const uint64x2_t live = vcgtq_f64(a, zero);
    vst1q_f64(s.re(0) + k, select(live, vdivq_f64(zr, a), zero));
    vst1q_f64(s.im(0) + k, select(live, vdivq_f64(zi, a), zero));
  }
  for (; k < n; ++k) detail::equalize_1_at(h, y, s, k);
}

void equalize_2(const PlanarChannel& h, const PlanarSignal& y, PlanarSignal& s) {
  const std::size_t n = h.n_sc();
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    float64x2_t a = zero, d = zero, br = zero, bi = zero;
    float64x2_t z0r = zero, z0i = zero, z1r = zero, z1i = zero;
    for (std::size_t i = 0; i < h.n_rx(); ++i) {
      const float64x2_t r0 = vld1q_f64(h.re(i, 0) + k);
      const float64x2_t m0 = vld1q_f64(h.im(i, 0) + k);
      const float64x2_t r1 = vld1q_f64(h.re(i, 1) + k);
      const float64x2_t m1 = vld1q_f64(h.im(i, 1) + k);
      const float64x2_t yr = vld1q_f64(y.re(i) + k);
      const float64x2_t yi = vld1q_f64(y.im(i) + k);
      a = vaddq_f64(a, norm2(r0, m0));
      d = vaddq_f64(d, norm2(r1, m1));
      br = vaddq_f64(br, vaddq_f64(vmulq_f64(r0, r1), vmulq_f64(m0, m1)));
      bi = vaddq_f64(bi, vsubq_f64(vmulq_f64(r0, m1), vmulq_f64(m0, r1)));
      z0r = vaddq_f64(z0r, vaddq_f64(vmulq_f64(r0, yr), vmulq_f64(m0, yi)));
      z0i = vaddq_f64(z0i, vsubq_f64(vmulq_f64(r0, yi), vmulq_f64(m0, yr)));
      z1r = vaddq_f64(z1r, vaddq_f64(vmulq_f64(r1, yr), vmulq_f64(m1, yi)));
      z1i = vaddq_f64(z1i, vsubq_f64(vmulq_f64(r1, yi), vmulq_f64(m1, yr)));
    }
    const float64x2_t det = vsubq_f64(vmulq_f64(a, d), norm2(br, bi));
    const uint64x2_t ok = vcgtq_f64(det, zero);
    const float64x2_t s0r =
        vsubq_f64(vmulq_f64(d, z0r), vsubq_f64(vmulq_f64(br, z1r), vmulq_f64(bi, z1i)));
    const float64x2_t s0i =
        vsubq_f64(vmulq_f64(d, z0i), vaddq_f64(vmulq_f64(br, z1i), vmulq_f64(bi, z1r)));
    const float64x2_t s1r =
        vsubq_f64(vmulq_f64(a, z1r), vaddq_f64(vmulq_f64(br, z0r), vmulq_f64(bi, z0i)));
    const float64x2_t s1i =
        vsubq_f64(vmulq_f64(a, z1i), vsubq_f64(vmulq_f64(br, z0i), vmulq_f64(bi, z0r)));
    vst1q_f64(s.re(0) + k, select(ok, vdivq_f64(s0r, det), zero));
    vst1q_f64(s.im(0) + k, select(ok, vdivq_f64(s0i, det), zero));
    vst1q_f64(s.re(1) + k, select(ok, vdivq_f64(s1r, det), zero));
    vst1q_f64(s.im(1) + k, select(ok, vdivq_f64(s1i, det), zero));
  }
  for (; k < n; ++k) detail::equalize_2_at(h, y, s, k);
}

}  // namespace

namespace detail {
const Kernels& neon_table() {
  static const Kernels k{"neon", gram_inverse_1, gram_inverse_2, equalize_1, equalize_2};
  return k;
}
}  // namespace detail

}  // namespace vlcsim::simd
