#include "vlcsim/csi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "vlcsim/errors.hpp"

namespace vlcsim {

std::complex<double> CsiReport::dequantized(std::size_t k, std::size_t rx, std::size_t tx) const {
  return {scale * re_at(k, rx, tx), scale * im_at(k, rx, tx)};
}

CsiReport report_csi(const simd::PlanarChannel& h, int bits) {
  if (bits < 2 || bits > 31) throw DomainError("CSI bit width must be in 2..31");
  CsiReport out;
  out.n_rx = h.n_rx();
  out.n_tx = h.n_tx();
  out.n_sc = h.n_sc();
  out.bits = bits;

  double peak = 0.0;
  for (std::size_t i = 0; i < h.n_rx(); ++i) {
    for (std::size_t j = 0; j < h.n_tx(); ++j) {
      for (std::size_t k = 0; k < h.n_sc(); ++k) {
        peak = std::max({peak, std::abs(h.re(i, j)[k]), std::abs(h.im(i, j)[k])});
      }
    }
  }
  if (!(peak > 0.0)) return out;

  const std::int64_t top = (std::int64_t{1} << (bits - 1)) - 1;
  const std::int64_t bottom = -(std::int64_t{1} << (bits - 1));
  out.scale = peak / static_cast<double>(top);
  auto quantize = [&](double v) {
    return static_cast<std::int32_t>(std::clamp<std::int64_t>(std::llround(v / out.scale), bottom, top));
  };

  const std::size_t n = h.n_sc() * h.n_rx() * h.n_tx();
  out.re.resize(n);
  out.im.resize(n);
  for (std::size_t k = 0; k < h.n_sc(); ++k) {
    for (std::size_t i = 0; i < h.n_rx(); ++i) {
      for (std::size_t j = 0; j < h.n_tx(); ++j) {
        const std::size_t idx = (k * h.n_rx() + i) * h.n_tx() + j;
        out.re[idx] = quantize(h.re(i, j)[k]);
        out.im[idx] = quantize(h.im(i, j)[k]);
      }
    }
  }
  return out;
}

CsiReport report_csi(const ChannelMatrix& cm, int bits) { return report_csi(simd::to_planar(cm), bits); }

simd::PlanarChannel combine_transmitters(const ChannelMatrix& cm) {
  simd::PlanarChannel out(cm.n_rx(), 1, cm.n_subcarriers());
  for (std::size_t k = 0; k < cm.n_subcarriers(); ++k) {
    for (std::size_t i = 0; i < cm.n_rx(); ++i) {
      std::complex<double> sum = 0.0;
      for (std::size_t j = 0; j < cm.n_tx(); ++j) sum += cm.entry(k, i, j);
      out.set(k, i, 0, sum);
    }
  }
  return out;
}

double magnitude_ripple_db(const CsiReport& report, std::size_t rx, std::size_t tx) {
  if (report.empty()) throw ContractError("empty CSI report has no ripple");
  if (rx >= report.n_rx || tx >= report.n_tx) throw ContractError("CSI trace out of range");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t k = 0; k < report.n_sc; ++k) {
    const double mag = std::abs(report.dequantized(k, rx, tx));
    lo = std::min(lo, mag);
    hi = std::max(hi, mag);
  }
  if (!(hi > 0.0)) return 0.0;
  if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(hi / lo);
}

void write_csi_csv(std::ostream& os, const CsiReport& report) {
  os << "rx,tx,subcarrier,re,im,scale\n";
  for (std::size_t i = 0; i < report.n_rx; ++i)
    for (std::size_t j = 0; j < report.n_tx; ++j)
      for (std::size_t k = 0; k < report.n_sc; ++k)
        os << i << ',' << j << ',' << k << ',' << report.re_at(k, i, j) << ','
           << report.im_at(k, i, j) << ',' << report.scale << '\n';
}

}  // namespace vlcsim
