#pragma once

// Channel state information as a WiFi NIC reports it: per-subcarrier
// complex estimates quantized to a few bits per real/imaginary part with a
// single scale factor per report.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "vlcsim/optical_channel.hpp"
#include "vlcsim/simd/planar.hpp"

namespace vlcsim {

inline constexpr int kDefaultCsiBits = 6;

struct CsiReport {
  std::size_t n_rx = 0;
  std::size_t n_tx = 0;
  std::size_t n_sc = 0;
  int bits = kDefaultCsiBits;
  double scale = 0.0;  // value of one quantization step
  std::vector<std::int32_t> re;  // (k, rx, tx) order
  std::vector<std::int32_t> im;

  // The "empty report" returned for an all-zero channel.
  bool empty() const { return re.empty(); }
  std::int32_t re_at(std::size_t k, std::size_t rx, std::size_t tx) const { return re[index(k, rx, tx)]; }
  std::int32_t im_at(std::size_t k, std::size_t rx, std::size_t tx) const { return im[index(k, rx, tx)]; }
  std::complex<double> dequantized(std::size_t k, std::size_t rx, std::size_t tx) const;

 private:
  std::size_t index(std::size_t k, std::size_t rx, std::size_t tx) const {
    return (k * n_rx + rx) * n_tx + tx;
  }
};

// Scales so the largest real or imaginary magnitude maps to the top code
// 2^(bits-1) - 1, then rounds half away from zero into [-2^(bits-1), 2^(bits-1) - 1].
CsiReport report_csi(const ChannelMatrix& cm, int bits = kDefaultCsiBits);
CsiReport report_csi(const simd::PlanarChannel& h, int bits = kDefaultCsiBits);

// Channel a single stream sees when every TX sends the same signal: one
// column per RX holding sum_j H_ij.
simd::PlanarChannel combine_transmitters(const ChannelMatrix& cm);

// Peak-to-peak magnitude ripple across subcarriers of one dequantized
// (rx, tx) trace, in dB. +inf if some subcarrier quantizes to zero.
double magnitude_ripple_db(const CsiReport& report, std::size_t rx, std::size_t tx);

// Columns: rx,tx,subcarrier,re,im,scale.
void write_csi_csv(std::ostream& os, const CsiReport& report);

}  // namespace vlcsim
