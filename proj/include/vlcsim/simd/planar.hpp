#pragma once

// Structure-of-arrays layouts consumed by the per-subcarrier kernels. Each
// (rx, tx) coefficient, or each receive chain, owns one contiguous run of
// n_sc doubles so the kernels stream across subcarriers.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace vlcsim {
class ChannelMatrix;
}

namespace vlcsim::simd {

class PlanarChannel {
 public:
  PlanarChannel() = default;
  PlanarChannel(std::size_t n_rx, std::size_t n_tx, std::size_t n_sc)
      : n_rx_(n_rx), n_tx_(n_tx), n_sc_(n_sc), re_(n_rx * n_tx * n_sc), im_(re_.size()) {}

  std::size_t n_rx() const { return n_rx_; }
  std::size_t n_tx() const { return n_tx_; }
  std::size_t n_sc() const { return n_sc_; }

  const double* re(std::size_t rx, std::size_t tx) const { return re_.data() + offset(rx, tx); }
  const double* im(std::size_t rx, std::size_t tx) const { return im_.data() + offset(rx, tx); }
  double* re(std::size_t rx, std::size_t tx) { return re_.data() + offset(rx, tx); }
  double* im(std::size_t rx, std::size_t tx) { return im_.data() + offset(rx, tx); }

  std::complex<double> at(std::size_t k, std::size_t rx, std::size_t tx) const {
    return {re(rx, tx)[k], im(rx, tx)[k]};
  }
  void set(std::size_t k, std::size_t rx, std::size_t tx, std::complex<double> v) {
    re(rx, tx)[k] = v.real();
    im(rx, tx)[k] = v.imag();
  }

  // Keeps the listed TX columns (in order) and RX rows (in order).
  PlanarChannel subset(std::span<const std::size_t> rows, std::span<const std::size_t> cols) const;

 private:
  std::size_t offset(std::size_t rx, std::size_t tx) const { return (rx * n_tx_ + tx) * n_sc_; }

  std::size_t n_rx_ = 0;
  std::size_t n_tx_ = 0;
  std::size_t n_sc_ = 0;
  std::vector<double> re_;
  std::vector<double> im_;
};

PlanarChannel to_planar(const ChannelMatrix& cm);

// One complex run of n_sc samples per chain (receive antenna or stream).
class PlanarSignal {
 public:
  PlanarSignal() = default;
  PlanarSignal(std::size_t n_chains, std::size_t n_sc)
      : n_chains_(n_chains), n_sc_(n_sc), re_(n_chains * n_sc), im_(re_.size()) {}

  std::size_t n_chains() const { return n_chains_; }
  std::size_t n_sc() const { return n_sc_; }
  const double* re(std::size_t c) const { return re_.data() + c * n_sc_; }
  const double* im(std::size_t c) const { return im_.data() + c * n_sc_; }
  double* re(std::size_t c) { return re_.data() + c * n_sc_; }
  double* im(std::size_t c) { return im_.data() + c * n_sc_; }

  std::complex<double> at(std::size_t c, std::size_t k) const { return {re(c)[k], im(c)[k]}; }
  void set(std::size_t c, std::size_t k, std::complex<double> v) {
    re(c)[k] = v.real();
    im(c)[k] = v.imag();
  }

  friend bool operator==(const PlanarSignal&, const PlanarSignal&) = default;

 private:
  std::size_t n_chains_ = 0;
  std::size_t n_sc_ = 0;
  std::vector<double> re_;
  std::vector<double> im_;
};

}  // namespace vlcsim::simd
