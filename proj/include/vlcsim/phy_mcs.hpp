#pragma once

// 802.11n HT MCS ladder and the analytic frame-success-rate model.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace vlcsim {

enum class Modulation { kBpsk, kQpsk, kQam16, kQam64 };

std::string_view to_string(Modulation m);
int bits_per_symbol(Modulation m);

enum class Bandwidth { k20MHz, k40MHz };

int bandwidth_mhz(Bandwidth bw);
Bandwidth bandwidth_from_mhz(int mhz);

struct CodeRate {
  int num = 1;
  int den = 2;
  double value() const { return static_cast<double>(num) / den; }
  friend bool operator==(const CodeRate&, const CodeRate&) = default;
};

struct McsEntry {
  int index = 0;
  Modulation modulation = Modulation::kBpsk;
  CodeRate code_rate;
  int n_streams = 1;
  double data_rate_20mhz_mbps = 0.0;
  double data_rate_40mhz_mbps = 0.0;
  double snr_threshold_db = 0.0;  // SNR where the reference frame's FSR is 0.5
};

struct FrameSpec {
  std::size_t payload_bytes = 1000;
  std::size_t count = 1000;
};

inline constexpr std::size_t kReferencePayloadBytes = 1000;
// Logistic slope of the FSR waterfall, in dB.
inline constexpr double kFsrSlopeDb = 1.0;

enum class GuardInterval { kLong800ns, kShort400ns };

// Data rate from the 802.11n OFDM symbol arithmetic (no table lookup).
double ht_data_rate_mbps(Modulation m, CodeRate r, int n_streams, Bandwidth bw, GuardInterval gi);

// Data subcarrier offsets from the channel centre in Hz (52 at 20 MHz,
// 108 at 40 MHz, pilots and DC excluded), ascending.
std::vector<double> data_subcarrier_offsets_hz(Bandwidth bw);
std::vector<double> data_subcarrier_freqs_hz(Bandwidth bw, double carrier_hz);

// All 16 entries, indices 0..15.
const std::vector<McsEntry>& mcs_table();
const McsEntry& mcs(int index);

double phy_rate(const McsEntry& mcs, Bandwidth bw);

// Probability that a frame decodes. Driven by the weakest stream; frames
// other than the 1000-byte reference are scaled as FSR_ref^(L/1000).
double fsr(const McsEntry& mcs, std::span<const double> per_stream_snr_db, const FrameSpec& frame);

// Collapses per-subcarrier SNR to one effective value: arithmetic mean in
// dB. A "no signal" subcarrier makes the result "no signal".
double effective_snr_db(std::span<const double> per_subcarrier_snr_db);

void write_mcs_table_csv(std::ostream& os);

}  // namespace vlcsim
