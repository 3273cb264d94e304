// AVX2 variants, four subcarriers per iteration. Compiled with -mavx2 only;
// selected at runtime after a CPUID check.

#include <immintrin.h>

#include "scalar_ops.hpp"
#include "vlcsim/simd/kernels.hpp"

namespace vlcsim::simd {

namespace {

constexpr std::size_t kLanes = 4;

inline __m256d select(__m256d mask, __m256d if_true, __m256d if_false) {
  return _mm256_blendv_pd(if_false, if_true, mask);
}

inline __m256d norm2(__m256d r, __m256d m) {
  return _mm256_add_pd(_mm256_mul_pd(r, r), _mm256_mul_pd(m, m));
}

void gram_inverse_1(const PlanarChannel& h, std::span<double> inv, std::span<double> cond) {
  const std::size_t n = h.n_sc();
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d inf = _mm256_set1_pd(detail::kInf);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    __m256d a = zero;
    for (std::size_t i = 0; i < h.n_rx(); ++i)
      a = _mm256_add_pd(a, norm2(_mm256_loadu_pd(h.re(i, 0) + k), _mm256_loadu_pd(h.im(i, 0) + k)));
    const __m256d live = _mm256_cmp_pd(a, zero, _CMP_GT_OQ);
    _mm256_storeu_pd(inv.data() + k, select(live, _mm256_div_pd(one, a), inf));
    _mm256_storeu_pd(cond.data() + k, select(live, one, inf));
  }
  for (; k < n; ++k) detail::gram_inverse_1_at(h, k, inv.data(), cond.data());
}

void gram_inverse_2(const PlanarChannel& h, std::span<double> inv0, std::span<double> inv1,
                    std::span<double> cond) {
  const std::size_t n = h.n_sc();
  const __m256d zero = _mm256_setzero_pd();
  const __m256d half = _mm256_set1_pd(0.5);
  const __m256d inf = _mm256_set1_pd(detail::kInf);
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    __m256d a = zero, d = zero, br = zero, bi = zero;
    for (std::size_t i = 0; i < h.n_rx(); ++i) {
      const __m256d r0 = _mm256_loadu_pd(h.re(i, 0) + k);
      const __m256d m0 = _mm256_loadu_pd(h.im(i, 0) + k);
      const __m256d r1 = _mm256_loadu_pd(h.re(i, 1) + k);
      const __m256d m1 = _mm256_loadu_pd(h.im(i, 1) + k);
      a = _mm256_add_pd(a, norm2(r0, m0));
      d = _mm256_add_pd(d, norm2(r1, m1));
      br = _mm256_add_pd(br, _mm256_add_pd(_mm256_mul_pd(r0, r1), _mm256_mul_pd(m0, m1)));
      bi = _mm256_add_pd(bi, _mm256_sub_pd(_mm256_mul_pd(r0, m1), _mm256_mul_pd(m0, r1)));
    }
    const __m256d bb = norm2(br, bi);
    const __m256d det = _mm256_sub_pd(_mm256_mul_pd(a, d), bb);
    const __m256d half_sum = _mm256_mul_pd(_mm256_add_pd(a, d), half);
    const __m256d half_diff = _mm256_mul_pd(_mm256_sub_pd(a, d), half);
    const __m256d lmax = _mm256_add_pd(
        half_sum, _mm256_sqrt_pd(_mm256_add_pd(_mm256_mul_pd(half_diff, half_diff), bb)));
    const __m256d ok = _mm256_cmp_pd(det, zero, _CMP_GT_OQ);
    _mm256_storeu_pd(inv0.data() + k, select(ok, _mm256_div_pd(d, det), inf));
    _mm256_storeu_pd(inv1.data() + k, select(ok, _mm256_div_pd(a, det), inf));
    _mm256_storeu_pd(cond.data() + k, select(ok, _mm256_div_pd(_mm256_mul_pd(lmax, lmax), det), inf));
  }
  for (; k < n; ++k) detail::gram_inverse_2_at(h, k, inv0.data(), inv1.data(), cond.data());
}

void equalize_1(const PlanarChannel& h, const PlanarSignal& y, PlanarSignal& s) {
  const std::size_t n = h.n_sc();
  const __m256d zero = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    __m256d a = zero, zr = zero, zi = zero;
    for (std::size_t i = 0; i < h.n_rx(); ++i) {
      const __m256d r = _mm256_loadu_pd(h.re(i, 0) + k);
      const __m256d m = _mm256_loadu_pd(h.im(i, 0) + k);
      const __m256d yr = _mm256_loadu_pd(y.re(i) + k);
      const __m256d yi = _mm256_loadu_pd(y.im(i) + k);
      a = _mm256_add_pd(a, norm2(r, m));
      zr = _mm256_add_pd(zr, _mm256_add_pd(_mm256_mul_pd(r, yr), _mm256_mul_pd(m, yi)));
      zi = _mm256_add_pd(zi, _mm256_sub_pd(_mm256_mul_pd(r, yi), _mm256_mul_pd(m, yr)));
    }
    const __m256d live = _mm256_cmp_pd(a, zero, _CMP_GT_OQ);
    _mm256_storeu_pd(s.re(0) + k, select(live, _mm256_div_pd(zr, a), zero));
    _mm256_storeu_pd(s.im(0) + k, select(live, _mm256_div_pd(zi, a), zero));
  }
  for (; k < n; ++k) detail::equalize_1_at(h, y, s, k);
}

void equalize_2(const PlanarChannel& h, const PlanarSignal& y, PlanarSignal& s) {
  const std::size_t n = h.n_sc();
  const __m256d zero = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + kLanes <= n; k += kLanes) {
    __m256d a = zero, d = zero, br = zero, bi = zero;
    __m256d z0r = zero, z0i = zero, z1r = zero, z1i = zero;
    for (std::size_t i = 0; i < h.n_rx(); ++i) {
      const __m256d r0 = _mm256_loadu_pd(h.re(i, 0) + k);
      const __m256d m0 = _mm256_loadu_pd(h.im(i, 0) + k);
      const __m256d r1 = _mm256_loadu_pd(h.re(i, 1) + k);
      const __m256d m1 = _mm256_loadu_pd(h.im(i, 1) + k);
      const __m256d yr = _mm256_loadu_pd(y.re(i) + k);
      const __m256d yi = _mm256_loadu_pd(y.im(i) + k);
      a = _mm256_add_pd(a, norm2(r0, m0));
      d = _mm256_add_pd(d, norm2(r1, m1));
      br = _mm256_add_pd(br, _mm256_add_pd(_mm256_mul_pd(r0, r1), _mm256_mul_pd(m0, m1)));
      bi = _mm256_add_pd(bi, _mm256_sub_pd(_mm256_mul_pd(r0, m1), _mm256_mul_pd(m0, r1)));
      z0r = _mm256_add_pd(z0r, _mm256_add_pd(_mm256_mul_pd(r0, yr), _mm256_mul_pd(m0, yi)));
      z0i = _mm256_add_pd(z0i, _mm256_sub_pd(_mm256_mul_pd(r0, yi), _mm256_mul_pd(m0, yr)));
      z1r = _mm256_add_pd(z1r, _mm256_add_pd(_mm256_mul_pd(r1, yr), _mm256_mul_pd(m1, yi)));
      z1i = _mm256_add_pd(z1i, _mm256_sub_pd(_mm256_mul_pd(r1, yi), _mm256_mul_pd(m1, yr)));
    }
    const __m256d det = _mm256_sub_pd(_mm256_mul_pd(a, d), norm2(br, bi));
    const __m256d ok = _mm256_cmp_pd(det, zero, _CMP_GT_OQ);
    const __m256d s0r = _mm256_sub_pd(
        _mm256_mul_pd(d, z0r), _mm256_sub_pd(_mm256_mul_pd(br, z1r), _mm256_mul_pd(bi, z1i)));
    const __m256d s0i = _mm256_sub_pd(
        _mm256_mul_pd(d, z0i), _mm256_add_pd(_mm256_mul_pd(br, z1i), _mm256_mul_pd(bi, z1r)));
    const __m256d s1r = _mm256_sub_pd(
        _mm256_mul_pd(a, z1r), _mm256_add_pd(_mm256_mul_pd(br, z0r), _mm256_mul_pd(bi, z0i)));
    const __m256d s1i = _mm256_sub_pd(
        _mm256_mul_pd(a, z1i), _mm256_sub_pd(_mm256_mul_pd(br, z0i), _mm256_mul_pd(bi, z0r)));
    _mm256_storeu_pd(s.re(0) + k, select(ok, _mm256_div_pd(s0r, det), zero));
    _mm256_storeu_pd(s.im(0) + k, select(ok, _mm256_div_pd(s0i, det), zero));
    _mm256_storeu_pd(s.re(1) + k, select(ok, _mm256_div_pd(s1r, det), zero));
    _mm256_storeu_pd(s.im(1) + k, select(ok, _mm256_div_pd(s1i, det), zero));
  }
  for (; k < n; ++k) detail::equalize_2_at(h, y, s, k);
}

}  // namespace

namespace detail {
const Kernels& avx2_table() {
  static const Kernels k{"avx2", gram_inverse_1, gram_inverse_2, equalize_1, equalize_2};
  return k;
}
}  // namespace detail

}  // namespace vlcsim::simd
