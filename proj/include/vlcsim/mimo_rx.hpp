#pragma once

// Receiver-side spatial processing: maximal-ratio combining, selection
// combining and zero-forcing demultiplexing of direct-mapped streams.

#include <cstddef>
#include <span>
#include <vector>

#include "vlcsim/optical_channel.hpp"
#include "vlcsim/simd/planar.hpp"

namespace vlcsim {

// A subcarrier whose Gram matrix H^H H has a larger condition number than
// this cannot be inverted by the receiver.
inline constexpr double kSingularConditionCutoff = 1e6;

struct MimoConfig {
  std::size_t n_tx = 1;
  std::size_t n_rx = 1;
  std::size_t n_streams = 1;

  static std::size_t max_streams(std::size_t n_tx, std::size_t n_rx);
  // Full multiplexing order min(n_tx, n_rx).
  static MimoConfig full(std::size_t n_tx, std::size_t n_rx);
  // Throws ContractError unless 1 <= n_streams <= min(n_tx, n_rx).
  void check() const;
};

struct CombinedSnr {
  double linear = 0.0;
  double db = kNoSignalDb;
};

// Post-combining SNR is the sum of the branch SNRs.
CombinedSnr mrc_combine(std::span<const double> per_chain_snr_linear);

struct Selection {
  std::size_t chain = 0;
  double rssi_dbm = kNoSignalDbm;
};

// Strongest chain, lowest index on ties. Throws NoLinkError if every chain
// is at the "no signal" level.
Selection selection_combine(std::span<const double> per_chain_rssi_dbm);

struct PostSnr {
  std::vector<double> per_stream_snr_db;
  double combined_rssi_dbm = kNoSignalDbm;
  bool solvable = false;
  double condition_number = 0.0;  // median over subcarriers, of H^H H
};

// Zero-forcing receiver for direct-mapped streams: stream k rides on TX k
// with `tx_power_per_stream_mw`, every chain sees `noise_per_chain_mw`.
// Per-stream SNR is averaged in dB over the solvable subcarriers. The
// system is unsolvable when a strict majority of subcarriers exceed the
// condition-number cutoff; all streams then report "no signal".
PostSnr zf_decode(const ChannelMatrix& cm, double tx_power_per_stream_mw, double noise_per_chain_mw);
PostSnr zf_decode(const ChannelMatrix& cm, const MimoConfig& config, double tx_power_per_stream_mw,
                  double noise_per_chain_mw);
// Core routine over an arbitrary complex channel; every column is a stream.
PostSnr zf_decode(const simd::PlanarChannel& h, double tx_power_per_stream_mw,
                  double noise_per_chain_mw);

// Per-subcarrier post-ZF SNR (linear), stream-major: out[s * n_sc + k].
// Unsolvable subcarriers hold 0.
std::vector<double> zf_post_snr_linear(const simd::PlanarChannel& h, double tx_power_per_stream_mw,
                                       double noise_per_chain_mw, std::vector<double>* condition = nullptr);

// Gain in dB of decoding `n_streams` streams with every RX row compared
// with the best subset of exactly n_streams rows. Scored on the weakest
// stream's post-ZF SNR.
double extra_diversity_gain(const ChannelMatrix& cm, std::size_t n_streams);
double extra_diversity_gain(const simd::PlanarChannel& h, std::size_t n_streams);

}  // namespace vlcsim
