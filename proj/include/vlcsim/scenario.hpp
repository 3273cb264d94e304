#pragma once

// Scripted experiments: SISO distance sweep, SIMO blockage timeline, MRC
// operating point, soft-handover rotation, 2x2 area grid, CSI capture and
// the waveform cross-check. Each runner is a pure function of its inputs
// and seed.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vlcsim/csi.hpp"
#include "vlcsim/optical_channel.hpp"
#include "vlcsim/phy_mcs.hpp"

namespace vlcsim {

enum class Technique { kSiso, kSc, kMrc, kZf };
std::string_view to_string(Technique t);

// Independent stream seed for (seed, a, b); splitmix64 finalizer.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

// Counts successes of `n` Bernoulli(p) frames drawn from `seed`. Uses the
// top 53 bits of mt19937_64 so results do not depend on the standard
// library's distribution code.
std::size_t bernoulli_successes(double p, std::size_t n, std::uint64_t seed);

// ---- SISO sweep ----------------------------------------------------------

struct SisoRow {
  double distance_m = 0.0;
  double rssi_dbm = 0.0;
  double snr_db = 0.0;
  int mcs = 0;
  double fsr_model = 0.0;
  std::size_t frames = 0;
  std::size_t successes = 0;
  double fsr() const { return frames ? static_cast<double>(successes) / frames : 0.0; }
};

// The RX is moved along the TX boresight, facing back, to each distance.
// Rows are sorted by RSSI, then MCS. Needs exactly 1 TX and 1 RX.
std::vector<SisoRow> run_siso_sweep(const Scene& scene, std::span<const int> mcs_list,
                                    std::span<const double> distances_m, const FrameSpec& frame,
                                    std::uint64_t seed);

// Distances at which the on-axis RSSI hits each requested level.
std::vector<double> distances_for_rssi(const Scene& scene, std::span<const double> rssi_dbm);

// Lowest RSSI from which every row of `mcs` reaches `fsr_target`, using the
// realized FSR. kNoSignalDbm if it never does.
double first_rssi_reaching(std::span<const SisoRow> rows, int mcs, double fsr_target);

// ---- Blockage timeline ---------------------------------------------------

struct FrameTrace {
  std::uint64_t frame_index = 0;
  std::vector<double> per_chain_rssi_dbm;
  double combined_rssi_dbm = kNoSignalDbm;
  Technique technique = Technique::kMrc;
  int mcs_index = 0;
  bool success = false;
};

// Frames 100-180 block tx->rx_b, frames 200-280 block tx->rx_a.
std::vector<Obstacle> standard_blockage_schedule(const std::string& tx_id, const std::string& rx_a,
                                                 const std::string& rx_b);
inline constexpr std::uint64_t kStandardTimelineFrames = 350;

// One trace per frame index 0..n_frames-1. Needs 1 TX and at least one RX.
std::vector<FrameTrace> run_blockage_timeline(const Scene& scene, const McsEntry& mcs,
                                              const FrameSpec& frame, std::uint64_t n_frames,
                                              std::uint64_t seed, Technique technique = Technique::kMrc);

// ---- MRC operating point -------------------------------------------------

struct MrcBranch {
  std::string name;  // "A", "B" or "MRC"
  double snr_db = 0.0;
  double fsr_model = 0.0;
  std::size_t frames = 0;
  std::size_t successes = 0;
  double fsr() const { return frames ? static_cast<double>(successes) / frames : 0.0; }
};

// Branch A alone, branch B alone and their MRC combination, each over
// frame.count independent frames.
std::vector<MrcBranch> run_mrc_fsr_point(double snr_a_db, double snr_b_db, const McsEntry& mcs,
                                         const FrameSpec& frame, std::uint64_t seed);

// Per-path SNR of a 1-TX, 2-RX scene at frame 0.
std::vector<double> path_snrs_db(const Scene& scene);

// ---- Handover sweep ------------------------------------------------------

struct HandoverRow {
  double angle_deg = 0.0;
  double rssi_a_dbm = kNoSignalDbm;
  double rssi_b_dbm = kNoSignalDbm;
  double rssi_mrc_dbm = kNoSignalDbm;
};

// Angle between the TX->RX A and TX->RX B directions. Needs 1 TX, 2 RX.
double handover_span_deg(const Scene& scene);

// Rotates the TX boresight from RX A (angle 0) towards RX B in the plane
// the two directions span.
std::vector<HandoverRow> run_handover_sweep(const Scene& scene, std::span<const double> angles_deg);

// ---- MIMO area grid ------------------------------------------------------

struct AreaLayout {
  double x[3] = {-1.0, 0.0, 1.0};  // area 1, 2, 3 along x
  double height = 0.0;
  double rx1_y = -0.05;
  double rx2_y = 0.05;
  // RX tilt towards "its" TX (RX1 -> first TX, RX2 -> second) applied
  // only while a receiver sits in area 2.
  double area2_tilt_deg = 0.0;
};

struct Placement {
  int rx1 = 1;
  int rx2 = 3;
};

struct AreaRow {
  Placement placement;
  int mcs = 0;
  bool solvable = false;
  double condition_number = 0.0;
  double min_post_snr_db = kNoSignalDb;
  double fsr_model = 0.0;
  std::size_t frames = 0;
  std::size_t successes = 0;
  double fsr() const { return frames ? static_cast<double>(successes) / frames : 0.0; }
};

// Scene with the two receivers moved to `placement`. Needs 2 TX, 2 RX.
Scene place_receivers(const Scene& scene, const AreaLayout& layout, Placement placement);

// 1 if RX `rx` only hears the first TX, 3 if only the second, 2 if both,
// 0 if neither.
int classify_area(const ChannelMatrix& cm, std::size_t rx);

std::vector<AreaRow> run_mimo_area_grid(const Scene& scene, const AreaLayout& layout,
                                        std::span<const Placement> placements,
                                        std::span<const int> mcs_list, Bandwidth bw,
                                        const FrameSpec& frame, std::uint64_t seed);

// ---- CSI -----------------------------------------------------------------

struct CsiResult {
  CsiReport report;
  std::vector<double> ripple_db;  // per (rx, tx) column of the report, row-major
};

// With `combine_tx` every TX sends the same signal and the report has one
// column per RX.
CsiResult run_csi_report(const Scene& scene, int bits, Bandwidth bw, bool combine_tx);

// ---- Waveform cross-check ------------------------------------------------

struct OracleRow {
  int mcs = 0;
  double analytic_snr_db = 0.0;
  double oracle_snr_db = 0.0;
  double fsr_analytic = 0.0;
  double fsr_empirical = 0.0;
};

// Analytic SNR at which the reference frame's model FSR equals p.
double snr_for_fsr(const McsEntry& mcs, double p);

// Identity channels (1x1 or 2x2) at 20 MHz. For each MCS and target FSR,
// compares the analytic model with `n_frames` waveform frames at the
// mapped oracle SNR.
std::vector<OracleRow> run_oracle_check(std::span<const int> mcs_list,
                                        std::span<const double> target_fsrs, const FrameSpec& frame,
                                        std::size_t n_frames, std::uint64_t seed);

}  // namespace vlcsim
