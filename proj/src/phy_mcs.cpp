#include "vlcsim/phy_mcs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include "vlcsim/errors.hpp"
#include "vlcsim/units.hpp"

namespace vlcsim {

namespace {

constexpr double kSubcarrierSpacingHz = 312.5e3;

// Thresholds for the 1000-byte reference frame. Only two points are pinned
// by measurement: MCS0 must be error-free 5 dB above the noise floor and
// MCS7 needs about 30 dB more than MCS0. The rungs in between follow the
// usual 802.11n spacing and are a calibration choice.
constexpr std::array<double, 8> kSingleStreamThresholdDb = {-2.0, 1.0, 4.0, 7.0,
                                                            11.0, 18.0, 22.0, 28.0};

struct Rung {
  Modulation modulation;
  CodeRate rate;
};

constexpr std::array<Rung, 8> kRungs = {{
    {Modulation::kBpsk, {1, 2}},
    {Modulation::kQpsk, {1, 2}},
    {Modulation::kQpsk, {3, 4}},
    {Modulation::kQam16, {1, 2}},
    {Modulation::kQam16, {3, 4}},
    {Modulation::kQam64, {2, 3}},
    {Modulation::kQam64, {3, 4}},
    {Modulation::kQam64, {5, 6}},
}};

std::vector<McsEntry> build_table() {
  std::vector<McsEntry> table;
  for (int streams = 1; streams <= 2; ++streams) {
    for (std::size_t r = 0; r < kRungs.size(); ++r) {
      McsEntry e;
      e.index = static_cast<int>((streams - 1) * 8 + r);
      e.modulation = kRungs[r].modulation;
      e.code_rate = kRungs[r].rate;
      e.n_streams = streams;
      // The 20 MHz column is the long-GI rate, the 40 MHz column the
      // short-GI peak rate that 802.11n NICs advertise.
      e.data_rate_20mhz_mbps = ht_data_rate_mbps(e.modulation, e.code_rate, streams,
                                                 Bandwidth::k20MHz, GuardInterval::kLong800ns);
      e.data_rate_40mhz_mbps = ht_data_rate_mbps(e.modulation, e.code_rate, streams,
                                                 Bandwidth::k40MHz, GuardInterval::kShort400ns);
      e.snr_threshold_db = kSingleStreamThresholdDb[r];
      table.push_back(e);
    }
  }
  return table;
}

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

std::string_view to_string(Modulation m) {
  switch (m) {
    case Modulation::kBpsk: return "BPSK";
    case Modulation::kQpsk: return "QPSK";
    case Modulation::kQam16: return "16QAM";
    case Modulation::kQam64: return "64QAM";
  }
  return "?";
}

int bits_per_symbol(Modulation m) {
  switch (m) {
    case Modulation::kBpsk: return 1;
    case Modulation::kQpsk: return 2;
    case Modulation::kQam16: return 4;
    case Modulation::kQam64: return 6;
  }
  return 0;
}

int bandwidth_mhz(Bandwidth bw) { return bw == Bandwidth::k20MHz ? 20 : 40; }

Bandwidth bandwidth_from_mhz(int mhz) {
  if (mhz == 20) return Bandwidth::k20MHz;
  if (mhz == 40) return Bandwidth::k40MHz;
  throw DomainError("bandwidth must be 20 or 40 MHz, got " + std::to_string(mhz));
}

double ht_data_rate_mbps(Modulation m, CodeRate r, int n_streams, Bandwidth bw,
                         GuardInterval gi) {
  const int n_data_subcarriers = bw == Bandwidth::k20MHz ? 52 : 108;
  const double symbol_us = gi == GuardInterval::kLong800ns ? 4.0 : 3.6;
  const double bits_per_ofdm_symbol =
      n_data_subcarriers * bits_per_symbol(m) * r.value() * n_streams;
  return bits_per_ofdm_symbol / symbol_us;
}

std::vector<double> data_subcarrier_offsets_hz(Bandwidth bw) {
  const int edge = bw == Bandwidth::k20MHz ? 28 : 58;
  const int first = bw == Bandwidth::k20MHz ? 1 : 2;
  const std::vector<int> pilots =
      bw == Bandwidth::k20MHz ? std::vector<int>{7, 21} : std::vector<int>{11, 25, 53};
  std::vector<double> out;
  for (int k = -edge; k <= edge; ++k) {
    const int a = std::abs(k);
    if (a < first) continue;
    if (std::find(pilots.begin(), pilots.end(), a) != pilots.end()) continue;
    out.push_back(k * kSubcarrierSpacingHz);
  }
  return out;
}

std::vector<double> data_subcarrier_freqs_hz(Bandwidth bw, double carrier_hz) {
  auto out = data_subcarrier_offsets_hz(bw);
  for (double& f : out) f += carrier_hz;
  return out;
}

const std::vector<McsEntry>& mcs_table() {
  static const std::vector<McsEntry> table = build_table();
  return table;
}

const McsEntry& mcs(int index) {
  if (index < 0 || index > 15) throw DomainError("MCS index must be in 0..15");
  return mcs_table()[static_cast<std::size_t>(index)];
}

double phy_rate(const McsEntry& m, Bandwidth bw) {
  return bw == Bandwidth::k20MHz ? m.data_rate_20mhz_mbps : m.data_rate_40mhz_mbps;
}

double fsr(const McsEntry& m, std::span<const double> per_stream_snr_db, const FrameSpec& frame) {
  if (per_stream_snr_db.size() != static_cast<std::size_t>(m.n_streams))
    throw ContractError("MCS " + std::to_string(m.index) + " needs " +
                        std::to_string(m.n_streams) + " per-stream SNR values");
  if (frame.payload_bytes == 0) throw ContractError("payload_bytes must be > 0");
  double weakest = *std::min_element(per_stream_snr_db.begin(), per_stream_snr_db.end());
  if (std::isnan(weakest) || is_no_signal(weakest)) return 0.0;
  const double ref = logistic((weakest - m.snr_threshold_db) / kFsrSlopeDb);
  if (frame.payload_bytes == kReferencePayloadBytes) return ref;
  const double scale = static_cast<double>(frame.payload_bytes) / kReferencePayloadBytes;
  return std::pow(ref, scale);
}

double effective_snr_db(std::span<const double> per_subcarrier_snr_db) {
  if (per_subcarrier_snr_db.empty()) throw ContractError("no subcarriers to collapse");
  double sum = 0.0;
  for (double s : per_subcarrier_snr_db) {
    if (is_no_signal(s)) return s;
    sum += s;
  }
  return sum / static_cast<double>(per_subcarrier_snr_db.size());
}

void write_mcs_table_csv(std::ostream& os) {
  os << "index,modulation,code_rate,streams,rate_20mhz_mbps,rate_40mhz_mbps,snr_threshold_db\n";
  for (const auto& e : mcs_table()) {
    os << e.index << ',' << to_string(e.modulation) << ',' << e.code_rate.num << '/'
       << e.code_rate.den << ',' << e.n_streams << ',' << e.data_rate_20mhz_mbps << ','
       << e.data_rate_40mhz_mbps << ',' << e.snr_threshold_db << '\n';
  }
}

}  // namespace vlcsim
