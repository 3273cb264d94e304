#include <cstdlib>
#include <cstring>
#include <random>

#include "doctest.h"
#include "vlcsim/simd/kernels.hpp"

using namespace vlcsim::simd;

namespace {

PlanarChannel random_channel(std::mt19937_64& rng, std::size_t n_rx, std::size_t n_tx, std::size_t n_sc) {
  std::normal_distribution<double> g(0.0, 1.0);
  PlanarChannel h(n_rx, n_tx, n_sc);
  for (std::size_t i = 0; i < n_rx; ++i)
    for (std::size_t j = 0; j < n_tx; ++j)
      for (std::size_t k = 0; k < n_sc; ++k) h.set(k, i, j, {g(rng), g(rng)});
  // a few degenerate subcarriers: dead column, proportional rows
  if (n_sc > 3) {
    for (std::size_t i = 0; i < n_rx; ++i) h.set(1, i, 0, 0.0);
    if (n_tx == 2 && n_rx >= 2) {
      h.set(3, 1, 0, 2.0 * h.at(3, 0, 0));
      h.set(3, 1, 1, 2.0 * h.at(3, 0, 1));
    }
  }
  return h;
}

PlanarSignal random_signal(std::mt19937_64& rng, std::size_t n, std::size_t n_sc) {
  std::normal_distribution<double> g(0.0, 1.0);
  PlanarSignal y(n, n_sc);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t k = 0; k < n_sc; ++k) y.set(c, k, {g(rng), g(rng)});
  return y;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

bool same_bits(const PlanarSignal& a, const PlanarSignal& b) {
  if (a.n_chains() != b.n_chains() || a.n_sc() != b.n_sc()) return false;
  for (std::size_t c = 0; c < a.n_chains(); ++c)
    if (std::memcmp(a.re(c), b.re(c), a.n_sc() * sizeof(double)) != 0 ||
        std::memcmp(a.im(c), b.im(c), a.n_sc() * sizeof(double)) != 0)
      return false;
  return true;
}

void compare(const Kernels& ref, const Kernels& alt) {
  std::mt19937_64 rng(2024);
  for (std::size_t n_sc : {1u, 3u, 4u, 5u, 52u, 108u, 111u}) {
    for (std::size_t n_rx : {1u, 2u, 3u, 4u}) {
      {
        const PlanarChannel h = random_channel(rng, n_rx, 1, n_sc);
        std::vector<double> i1(n_sc), c1(n_sc), i2(n_sc), c2(n_sc);
        ref.gram_inverse_1(h, i1, c1);
        alt.gram_inverse_1(h, i2, c2);
        CHECK(same_bits(i1, i2));
        CHECK(same_bits(c1, c2));
        const PlanarSignal y = random_signal(rng, n_rx, n_sc);
        PlanarSignal s1(1, n_sc), s2(1, n_sc);
        ref.equalize_1(h, y, s1);
        alt.equalize_1(h, y, s2);
        CHECK(same_bits(s1, s2));
      }
      if (n_rx >= 2) {
        const PlanarChannel h = random_channel(rng, n_rx, 2, n_sc);
        std::vector<double> a0(n_sc), a1(n_sc), ac(n_sc), b0(n_sc), b1(n_sc), bc(n_sc);
        ref.gram_inverse_2(h, a0, a1, ac);
        alt.gram_inverse_2(h, b0, b1, bc);
        CHECK(same_bits(a0, b0));
        CHECK(same_bits(a1, b1));
        CHECK(same_bits(ac, bc));
        const PlanarSignal y = random_signal(rng, n_rx, n_sc);
        PlanarSignal s1(2, n_sc), s2(2, n_sc);
        ref.equalize_2(h, y, s1);
        alt.equalize_2(h, y, s2);
        CHECK(same_bits(s1, s2));
      }
    }
  }
}

}  // namespace

TEST_CASE("scalar kernels solve a known 2x2") {
  PlanarChannel h(2, 2, 1);
  h.set(0, 0, 0, 2.0);
  h.set(0, 1, 1, 4.0);
  std::vector<double> i0(1), i1(1), c(1);
  scalar_kernels().gram_inverse_2(h, i0, i1, c);
  CHECK(i0[0] == doctest::Approx(0.25));
  CHECK(i1[0] == doctest::Approx(1.0 / 16.0));
  CHECK(c[0] == doctest::Approx(4.0));
  PlanarSignal y(2, 1), s(2, 1);
  y.set(0, 0, {2.0, 2.0});
  y.set(1, 0, {-4.0, 0.0});
  scalar_kernels().equalize_2(h, y, s);
  CHECK(s.at(0, 0) == std::complex<double>(1.0, 1.0));
  CHECK(s.at(1, 0) == std::complex<double>(-1.0, 0.0));
}

TEST_CASE("AVX2 kernels match the scalar reference bit for bit") {
  const Kernels* avx2 = avx2_kernels();
  if (avx2 == nullptr) {
    MESSAGE("AVX2 not available on this machine");
    return;
  }
  compare(scalar_kernels(), *avx2);
}

TEST_CASE("NEON kernels match the scalar reference bit for bit") {
  const Kernels* neon = neon_kernels();
  if (neon == nullptr) {
    MESSAGE("NEON not available on this machine");
    return;
  }
  compare(scalar_kernels(), *neon);
}

TEST_CASE("dispatcher honours the override") {
  const char* forced = std::getenv("VLCSIM_SIMD");
  if (forced != nullptr && std::string(forced) == "scalar") CHECK(active_kernels().name == "scalar");
  compare(scalar_kernels(), active_kernels());
}
