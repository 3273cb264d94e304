#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "vlcsim/errors.hpp"
#include "vlcsim/waveform.hpp"

using namespace vlcsim;
using cd = std::complex<double>;

namespace {

simd::PlanarChannel flat(std::size_t n_rx, std::size_t n_tx, std::initializer_list<cd> rows,
                         std::size_t n_sc = 52) {
  simd::PlanarChannel h(n_rx, n_tx, n_sc);
  std::vector<cd> v(rows);
  for (std::size_t k = 0; k < n_sc; ++k)
    for (std::size_t i = 0; i < n_rx; ++i)
      for (std::size_t j = 0; j < n_tx; ++j) h.set(k, i, j, v[i * n_tx + j]);
  return h;
}

const Modulation kAll[] = {Modulation::kBpsk, Modulation::kQpsk, Modulation::kQam16, Modulation::kQam64};

}  // namespace

TEST_CASE("constellations round-trip with unit energy and Gray neighbours") {
  for (Modulation m : kAll) {
    const int b = bits_per_symbol(m);
    const int n = 1 << b;
    double energy = 0.0;
    std::vector<cd> points;
    for (int v = 0; v < n; ++v) {
      std::vector<std::uint8_t> bits(static_cast<std::size_t>(b)), back(bits.size());
      for (int i = 0; i < b; ++i) bits[static_cast<std::size_t>(i)] = (v >> (b - 1 - i)) & 1;
      const cd s = modulate(m, bits);
      demodulate(m, s, back);
      CHECK(back == bits);
      energy += std::norm(s);
      points.push_back(s);
    }
    CHECK(energy / n == doctest::Approx(1.0).epsilon(1e-12));
    // nearest neighbours differ in exactly one bit
    double dmin = 1e9;
    for (int a = 0; a < n; ++a)
      for (int c = a + 1; c < n; ++c) dmin = std::min(dmin, std::abs(points[a] - points[c]));
    for (int a = 0; a < n; ++a)
      for (int c = a + 1; c < n; ++c)
        if (std::abs(points[a] - points[c]) < dmin * 1.0001) CHECK(__builtin_popcount(a ^ c) == 1);
  }
  std::vector<std::uint8_t> wrong(3);
  CHECK_THROWS_AS(modulate(Modulation::kQpsk, wrong), ContractError);
}

TEST_CASE("noiseless full-rank 2x2 zero forcing is exact") {
  const cd j{0.0, 1.0};
  const auto h = flat(2, 2, {0.8, 0.3 * j, -0.2, 0.6 + 0.1 * j});
  for (int m = 8; m < 16; ++m) {
    const FrameOutcome o = simulate_frame(h, mcs(m), FrameSpec{}, 200.0, 11);
    CHECK(o.bit_errors == 0);
    CHECK(o.frame_ok);
    CHECK(o.payload_bits == 8000);
  }
}

TEST_CASE("rank-1 2x2 with two streams always fails") {
  const auto h = flat(2, 2, {0.5, 0.5, 0.25, 0.25});
  for (int m = 9; m < 16; ++m)
    for (std::uint64_t seed = 0; seed < 20; ++seed) CHECK_FALSE(simulate_frame(h, mcs(m), FrameSpec{}, 40.0, seed).frame_ok);
}

TEST_CASE("BPSK BER at 10 dB against Q(sqrt(2 SNR))") {
  const double p = oracle::q(std::sqrt(2.0 * 10.0));  // 3.872e-6
  CHECK(p == doctest::Approx(3.872e-6).epsilon(1e-3));
  const FrameOutcome o = simulate_frame(flat(1, 1, {1.0}), mcs(0), FrameSpec{12500, 1}, 10.0, 5);
  REQUIRE(o.payload_bits == 100000);
  const double se = std::sqrt(p * (1.0 - p) / 1e5);
  CHECK(static_cast<double>(o.bit_errors) / 1e5 <= p + 3.0 * se);
}

TEST_CASE("BER matches closed forms where errors are plentiful") {
  struct Case {
    int mcs;
    double snr_db;
  };
  for (const Case c : {Case{0, 4.0}, Case{1, 9.0}, Case{3, 16.0}, Case{5, 22.0}}) {
    const McsEntry& e = mcs(c.mcs);
    const EmpiricalResult r = run_frames(flat(1, 1, {1.0}), e, FrameSpec{1000, 1}, c.snr_db, 40, 99);
    const double p = uncoded_ber(e.modulation, std::pow(10.0, c.snr_db / 10.0));
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(r.payload_bits));
    CHECK(std::abs(r.ber() - p) <= 4.0 * se + 0.05 * p);
  }
  // BPSK and QPSK closed forms
  CHECK(uncoded_ber(Modulation::kBpsk, 10.0) == doctest::Approx(oracle::q(std::sqrt(20.0))).epsilon(1e-12));
  CHECK(uncoded_ber(Modulation::kQpsk, 10.0) == doctest::Approx(oracle::q(std::sqrt(10.0))).epsilon(1e-12));
}

TEST_CASE("empirical fsr saturates at both ends") {
  const auto h = flat(1, 1, {1.0});
  const McsEntry& e = mcs(0);
  const OracleMapping map = oracle_mapping(e.modulation);
  CHECK(empirical_fsr(h, e, FrameSpec{}, map.oracle_snr_db(e, e.snr_threshold_db + 30.0), 1000, 3) == 1.0);
  CHECK(empirical_fsr(h, e, FrameSpec{}, map.oracle_snr_db(e, e.snr_threshold_db - 20.0), 1000, 3) == 0.0);
  const double mid = empirical_fsr(h, e, FrameSpec{}, map.oracle_snr_db(e, e.snr_threshold_db), 1000, 3);
  CHECK(mid >= 0.40);
  CHECK(mid <= 0.60);
  CHECK_THROWS_AS(empirical_fsr(h, e, FrameSpec{}, 10.0, 0, 3), ContractError);
}

TEST_CASE("oracle mapping outside the frozen fit") {
  // 500-byte frames: the median is where the closed-form frame success
  // (1 - ber)^4000 is one half.
  const OracleMapping m = oracle_mapping(Modulation::kBpsk, 500);
  const double ber = oracle::q(std::sqrt(2.0 * std::pow(10.0, m.median_snr_db / 10.0)));
  CHECK(std::pow(1.0 - ber, 4000.0) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(m.slope > 0.0);
}

TEST_CASE("deterministic under a fixed seed") {
  const auto h = flat(2, 1, {0.7, 0.4});
  const FrameOutcome a = simulate_frame(h, mcs(3), FrameSpec{}, 14.0, 42);
  const FrameOutcome b = simulate_frame(h, mcs(3), FrameSpec{}, 14.0, 42);
  CHECK(a.bit_errors == b.bit_errors);
  CHECK(a.frame_ok == b.frame_ok);
}

TEST_CASE("MRC beats selection on paired seeds") {
  const auto h = flat(2, 1, {0.8, 0.6});
  const EmpiricalResult mrc = run_frames(h, mcs(1), FrameSpec{}, 6.0, 30, 1000, Combiner::kMrc);
  const EmpiricalResult sel = run_frames(h, mcs(1), FrameSpec{}, 6.0, 30, 1000, Combiner::kSelection);
  CHECK(mrc.ber() <= sel.ber());
}

TEST_CASE("received power per subcarrier is the sum of path powers") {
  const cd j{0.0, 1.0};
  const auto h = flat(2, 2, {0.6, 0.3 * j, 0.1, 0.9}, 52);
  std::mt19937_64 rng(8);
  double p0 = 0.0, p1 = 0.0;
  const int symbols = 400;
  for (int s = 0; s < symbols; ++s) {
    simd::PlanarSignal x(2, 52);
    for (std::size_t c = 0; c < 2; ++c)
      for (std::size_t k = 0; k < 52; ++k) {
        std::vector<std::uint8_t> bits = {static_cast<std::uint8_t>(rng() & 1), static_cast<std::uint8_t>(rng() & 1)};
        x.set(c, k, modulate(Modulation::kQpsk, bits));
      }
    const simd::PlanarSignal y = apply_channel(h, x);
    for (std::size_t k = 0; k < 52; ++k) {
      p0 += std::norm(y.at(0, k));
      p1 += std::norm(y.at(1, k));
    }
  }
  const double n = symbols * 52.0;
  CHECK(p0 / n == doctest::Approx(0.36 + 0.09).epsilon(0.01));
  CHECK(p1 / n == doctest::Approx(0.01 + 0.81).epsilon(0.01));
}

TEST_CASE("stream limits") {
  CHECK_THROWS_AS(simulate_frame(flat(1, 2, {1.0, 1.0}), mcs(8), FrameSpec{}, 10.0, 1), UnderdeterminedError);
  McsEntry three = mcs(8);
  three.n_streams = 3;
  CHECK_THROWS_AS(simulate_frame(flat(3, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1}), three, FrameSpec{}, 10.0, 1), ContractError);
}
