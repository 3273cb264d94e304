#pragma once

// Lambertian line-of-sight optical channel between LED transmitters and
// photodiode receivers.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vlcsim/units.hpp"

namespace vlcsim {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kDefaultNoiseFloorDbm = -60.0;
inline constexpr double kDefaultCarrierHz = 2.437e9;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

double dot(Vec3 a, Vec3 b);
double norm(Vec3 v);
Vec3 normalized(Vec3 v);

enum class Role { kTx, kRx };

// One LED (TX) or photodiode (RX) front-end. Fields that do not apply to
// the role are ignored.
struct FrontEnd {
  std::string id;
  Role role = Role::kTx;
  Vec3 position;
  Vec3 boresight{0.0, 0.0, -1.0};
  double half_power_semi_angle_deg = 60.0;  // TX
  double tx_electrical_power_dbm = 0.0;     // TX
  double fov_half_angle_deg = 90.0;         // RX
  double active_area_m2 = 1e-4;             // RX
  double conversion_gain_db = 0.0;          // RX: responsivity + amplifier, as a power ratio
};

// Half-open frame range [start, end).
struct FrameInterval {
  std::uint64_t start = 0;
  std::uint64_t end = 0;
  bool contains(std::uint64_t frame) const { return frame >= start && frame < end; }
};

// Fully blocks every listed (tx, rx) path while the interval is active.
struct Obstacle {
  std::string id;
  std::vector<std::pair<std::string, std::string>> blocked_pairs;
  FrameInterval active;

  bool blocks(const std::string& tx_id, const std::string& rx_id, std::uint64_t frame) const;
};

struct Scene {
  std::vector<FrontEnd> front_ends;
  std::vector<Obstacle> obstacles;
  double noise_floor_dbm = kDefaultNoiseFloorDbm;
  // Frequency at which the optical link carries the OFDM signal; path
  // delays turn into per-subcarrier phase relative to it.
  double carrier_hz = kDefaultCarrierHz;

  // Front-ends of one role, in declaration order. Matrix rows follow the
  // receiver order and columns the transmitter order.
  std::vector<const FrontEnd*> transmitters() const;
  std::vector<const FrontEnd*> receivers() const;
  const FrontEnd* find(const std::string& id) const;
  FrontEnd* find(const std::string& id);
};

struct Diagnostic {
  std::string field;
  std::string rule;
};

// Empty iff every scene, front-end and obstacle invariant holds.
std::vector<Diagnostic> validate(const Scene& scene);

// Throws ValidationError on the first violated invariant.
void require_valid(const Scene& scene);

struct PathGain {
  double gain = 0.0;     // linear optical power gain
  double delay_s = 0.0;  // propagation delay
};

// Lambertian order m of an LED with the given half-power semi-angle.
double lambertian_order(double half_power_semi_angle_deg);

// LOS DC gain and delay of a single TX->RX path. The receiver conversion
// gain is not applied here.
PathGain los_gain(const FrontEnd& tx, const FrontEnd& rx);

// Distance along the TX boresight (RX facing back at the TX) at which the
// end-to-end path power gain, conversion gain included, equals `target`.
double on_axis_distance_for_gain(const FrontEnd& tx, const FrontEnd& rx, double target_gain);

// Per-subcarrier N_r x N_t channel. Entry (k, i, j) couples TX j into RX i
// on subcarrier k.
class ChannelMatrix {
 public:
  ChannelMatrix() = default;
  ChannelMatrix(std::size_t n_rx, std::size_t n_tx, std::vector<double> subcarrier_freqs,
                std::vector<double> path_gains, std::vector<double> path_delays);

  std::size_t n_rx() const { return n_rx_; }
  std::size_t n_tx() const { return n_tx_; }
  std::size_t n_subcarriers() const { return freqs_.size(); }
  std::span<const double> subcarrier_freqs() const { return freqs_; }

  double path_gain(std::size_t rx, std::size_t tx) const { return gains_[rx * n_tx_ + tx]; }
  double path_delay(std::size_t rx, std::size_t tx) const { return delays_[rx * n_tx_ + tx]; }
  std::complex<double> entry(std::size_t k, std::size_t rx, std::size_t tx) const {
    return entries_[(k * n_rx_ + rx) * n_tx_ + tx];
  }
  // All entries, subcarrier-major then row-major.
  std::span<const std::complex<double>> entries() const { return entries_; }

  // Drops TX columns beyond `n_tx`.
  ChannelMatrix leading_columns(std::size_t n_tx) const;
  // Keeps only the listed RX rows, in the given order.
  ChannelMatrix select_rows(std::span<const std::size_t> rows) const;

 private:
  std::size_t n_rx_ = 0;
  std::size_t n_tx_ = 0;
  std::vector<double> freqs_;
  std::vector<double> gains_;
  std::vector<double> delays_;
  std::vector<std::complex<double>> entries_;
};

// Evaluates every (tx, rx) pair of the scene at `frame_index`. Paths blocked
// by an active obstacle get exactly zero gain.
ChannelMatrix channel_matrix(const Scene& scene, std::uint64_t frame_index,
                             std::span<const double> subcarrier_freqs);

// Wideband received power per RX chain: incoherent sum over TX of
// gain * p_tx. Chains with no power report kNoSignalDbm.
std::vector<double> rssi_per_chain(const ChannelMatrix& cm, std::span<const double> tx_power_dbm);

// Electrical TX power of each transmitter in matrix column order.
std::vector<double> tx_powers_dbm(const Scene& scene);

}  // namespace vlcsim
