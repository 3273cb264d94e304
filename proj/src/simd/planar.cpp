#include "vlcsim/simd/planar.hpp"

#include <algorithm>

#include "vlcsim/optical_channel.hpp"

namespace vlcsim::simd {

PlanarChannel PlanarChannel::subset(std::span<const std::size_t> rows,
                                    std::span<const std::size_t> cols) const {
  PlanarChannel out(rows.size(), cols.size(), n_sc_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const double* sr = re(rows[i], cols[j]);
      const double* si = im(rows[i], cols[j]);
      std::copy(sr, sr + n_sc_, out.re(i, j));
      std::copy(si, si + n_sc_, out.im(i, j));
    }
  }
  return out;
}

PlanarChannel to_planar(const ChannelMatrix& cm) {
  PlanarChannel out(cm.n_rx(), cm.n_tx(), cm.n_subcarriers());
  for (std::size_t k = 0; k < cm.n_subcarriers(); ++k)
    for (std::size_t i = 0; i < cm.n_rx(); ++i)
      for (std::size_t j = 0; j < cm.n_tx(); ++j) out.set(k, i, j, cm.entry(k, i, j));
  return out;
}

}  // namespace vlcsim::simd
