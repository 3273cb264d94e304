#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "vlcsim/csi.hpp"
#include "vlcsim/errors.hpp"
#include "vlcsim/phy_mcs.hpp"

using namespace vlcsim;

namespace {

ChannelMatrix siso(double gain, double delay, Bandwidth bw = Bandwidth::k40MHz) {
  return ChannelMatrix(1, 1, data_subcarrier_freqs_hz(bw, kDefaultCarrierHz), {gain}, {delay});
}

}  // namespace

TEST_CASE("flat SISO: 6-bit ripple stays under 3 dB, 16-bit vanishes") {
  for (double delay : {1e-9, 3.3356e-9, 7.77e-9, 12.1e-9}) {
    const ChannelMatrix cm = siso(3.2e-5, delay);
    const CsiReport r6 = report_csi(cm, 6);
    CHECK(magnitude_ripple_db(r6, 0, 0) <= 3.0);
    CHECK(magnitude_ripple_db(report_csi(cm, 16), 0, 0) <= 0.01);
  }
}

TEST_CASE("codes are signed 6-bit integers with one scale per report") {
  const ChannelMatrix cm(2, 2, data_subcarrier_freqs_hz(Bandwidth::k20MHz, kDefaultCarrierHz),
                         {1e-5, 4e-6, 2e-6, 9e-6}, {1e-9, 2e-9, 3e-9, 4e-9});
  const CsiReport r = report_csi(cm);
  REQUIRE_FALSE(r.empty());
  CHECK(r.bits == 6);
  CHECK(r.n_sc == 52);
  std::int32_t top = 0;
  for (std::size_t i = 0; i < r.re.size(); ++i) {
    CHECK(r.re[i] >= -32);
    CHECK(r.re[i] <= 31);
    CHECK(r.im[i] >= -32);
    CHECK(r.im[i] <= 31);
    top = std::max({top, std::abs(r.re[i]), std::abs(r.im[i])});
  }
  CHECK(top == 31);
  // dequantized values sit within half a step of the truth
  for (std::size_t k = 0; k < r.n_sc; ++k)
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        const auto d = r.dequantized(k, i, j) - cm.entry(k, i, j);
        CHECK(std::abs(d.real()) <= 0.5 * r.scale * (1 + 1e-12));
        CHECK(std::abs(d.imag()) <= 0.5 * r.scale * (1 + 1e-12));
      }
}

TEST_CASE("empty report for an all-zero channel") {
  const ChannelMatrix cm = siso(0.0, 1e-9);
  const CsiReport r = report_csi(cm);
  CHECK(r.empty());
  CHECK_THROWS_AS(magnitude_ripple_db(r, 0, 0), ContractError);
  CHECK_THROWS_AS(report_csi(siso(1e-5, 1e-9), 1), DomainError);
}

TEST_CASE("two-LED superposition ripple matches |g1 + g2 exp(-j 2 pi f dt)|") {
  // 2.5 carrier periods of extra delay puts a notch at the channel centre.
  const double dt = 2.5 / kDefaultCarrierHz;
  const double g1 = 1e-5, g2 = 0.94 * 1e-5;
  const auto freqs = data_subcarrier_freqs_hz(Bandwidth::k40MHz, kDefaultCarrierHz);
  const ChannelMatrix cm(1, 2, freqs, {g1, g2}, {3e-9, 3e-9 + dt});

  double lo = 1e300, hi = 0.0;
  for (double f : freqs) {
    const double mag = std::abs(std::sqrt(g1) * std::polar(1.0, -2 * std::numbers::pi * f * 3e-9) +
                                std::sqrt(g2) * std::polar(1.0, -2 * std::numbers::pi * f * (3e-9 + dt)));
    lo = std::min(lo, mag);
    hi = std::max(hi, mag);
  }
  const double analytic = 20.0 * std::log10(hi / lo);
  CHECK(analytic >= 10.0);
  const CsiReport r = report_csi(combine_transmitters(cm), 16);
  CHECK(r.n_tx == 1);
  CHECK(magnitude_ripple_db(r, 0, 0) == doctest::Approx(analytic).epsilon(1e-3));
  CHECK(magnitude_ripple_db(report_csi(combine_transmitters(cm), 6), 0, 0) >= 10.0);
}

TEST_CASE("csv layout") {
  std::ostringstream os;
  const CsiReport r = report_csi(siso(1e-5, 1e-9, Bandwidth::k20MHz));
  write_csi_csv(os, r);
  const std::string s = os.str();
  CHECK(s.rfind("rx,tx,subcarrier,re,im,scale\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 53);
}
