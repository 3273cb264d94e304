#pragma once

// Symbol-level OFDM Monte-Carlo link: uncoded Gray-mapped payload over the
// data subcarriers, per-subcarrier channel, complex AWGN, linear
// equalization and hard decisions. Serves as an independent check on the
// analytic FSR model and the MRC/ZF arithmetic.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vlcsim/optical_channel.hpp"
#include "vlcsim/phy_mcs.hpp"
#include "vlcsim/simd/planar.hpp"

namespace vlcsim {

// Gray mapping with unit average symbol energy. `bits` holds
// bits_per_symbol(m) values, first bit most significant.
std::complex<double> modulate(Modulation m, std::span<const std::uint8_t> bits);
void demodulate(Modulation m, std::complex<double> symbol, std::span<std::uint8_t> bits);

enum class Combiner { kMrc, kSelection };

struct FrameOutcome {
  std::size_t bit_errors = 0;
  std::size_t payload_bits = 0;
  bool frame_ok = false;
};

// Noiseless y = H x for one OFDM symbol. x has one chain per TX column.
simd::PlanarSignal apply_channel(const simd::PlanarChannel& h, const simd::PlanarSignal& x);

// `snr_db` is the per-stream symbol energy over the per-chain noise
// density, before the channel. Stream k is sent from TX column k. One
// stream is equalized with `combiner`, two with zero forcing. The noise
// realization is fixed by `seed`.
FrameOutcome simulate_frame(const ChannelMatrix& cm, const McsEntry& mcs, const FrameSpec& frame,
                            double snr_db, std::uint64_t seed, Combiner combiner = Combiner::kMrc);
FrameOutcome simulate_frame(const simd::PlanarChannel& h, const McsEntry& mcs,
                            const FrameSpec& frame, double snr_db, std::uint64_t seed,
                            Combiner combiner = Combiner::kMrc);

struct EmpiricalResult {
  std::size_t frames = 0;
  std::size_t frames_ok = 0;
  std::size_t bit_errors = 0;
  std::size_t payload_bits = 0;
  double fsr() const { return frames ? static_cast<double>(frames_ok) / frames : 0.0; }
  double ber() const { return payload_bits ? static_cast<double>(bit_errors) / payload_bits : 0.0; }
};

// Frame i uses seed base_seed + i.
EmpiricalResult run_frames(const simd::PlanarChannel& h, const McsEntry& mcs, const FrameSpec& frame,
                           double snr_db, std::size_t n_frames, std::uint64_t base_seed,
                           Combiner combiner = Combiner::kMrc);

double empirical_fsr(const ChannelMatrix& cm, const McsEntry& mcs, const FrameSpec& frame,
                     double snr_db, std::size_t n_frames, std::uint64_t seed);
double empirical_fsr(const simd::PlanarChannel& h, const McsEntry& mcs, const FrameSpec& frame,
                     double snr_db, std::size_t n_frames, std::uint64_t seed);

// Closed-form uncoded AWGN bit error rate of a Gray-mapped constellation at
// symbol SNR `snr_linear` (exact for BPSK/QPSK, nearest-neighbour for QAM).
double uncoded_ber(Modulation m, double snr_linear);

// Maps an analytic-model SNR onto the oracle's SNR axis. The analytic
// thresholds absorb coding gain that the uncoded oracle lacks, so the two
// waterfalls are aligned once: oracle = median + slope * (analytic - threshold).
struct OracleMapping {
  double median_snr_db = 0.0;
  double slope = 1.0;
  double oracle_snr_db(const McsEntry& mcs, double analytic_snr_db) const {
    return median_snr_db + slope * (analytic_snr_db - mcs.snr_threshold_db);
  }
};

OracleMapping oracle_mapping(Modulation m, std::size_t payload_bytes = kReferencePayloadBytes);

}  // namespace vlcsim
