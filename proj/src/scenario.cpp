#include "vlcsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "vlcsim/errors.hpp"
#include "vlcsim/mimo_rx.hpp"
#include "vlcsim/units.hpp"
#include "vlcsim/waveform.hpp"

namespace vlcsim {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void require_shape(const Scene& scene, std::size_t n_tx, std::size_t n_rx, const char* who) {
  if (scene.transmitters().size() != n_tx || scene.receivers().size() != n_rx)
    throw ContractError(std::string(who) + " needs " + std::to_string(n_tx) + " TX and " +
                        std::to_string(n_rx) + " RX front-ends");
}

FrontEnd& nth_of_role(Scene& scene, Role role, std::size_t n) {
  for (FrontEnd& fe : scene.front_ends) {
    if (fe.role != role) continue;
    if (n == 0) return fe;
    --n;
  }
  throw ContractError("front-end index out of range");
}

double sum_mw(std::span<const double> dbm) {
  double s = 0.0;
  for (double v : dbm) s += dbm_to_mw(v);
  return s;
}

ChannelMatrix gains_only(const Scene& scene, std::uint64_t frame) {
  // RSSI needs path gains only; skip the subcarrier expansion.
  return channel_matrix(scene, frame, {});
}

}  // namespace

std::string_view to_string(Technique t) {
  switch (t) {
    case Technique::kSiso: return "SISO";
    case Technique::kSc: return "SC";
    case Technique::kMrc: return "MRC";
    case Technique::kZf: return "ZF";
  }
  return "?";
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ a) ^ b);
}

std::size_t bernoulli_successes(double p, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::size_t ok = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (u < p) ++ok;
  }
  return ok;
}

// ---- SISO ----------------------------------------------------------------

std::vector<double> distances_for_rssi(const Scene& scene, std::span<const double> rssi_dbm) {
  require_shape(scene, 1, 1, "siso sweep");
  const FrontEnd& tx = *scene.transmitters().front();
  const FrontEnd& rx = *scene.receivers().front();
  std::vector<double> out;
  out.reserve(rssi_dbm.size());
  for (double r : rssi_dbm)
    out.push_back(on_axis_distance_for_gain(tx, rx, dbm_to_mw(r) / dbm_to_mw(tx.tx_electrical_power_dbm)));
  return out;
}

std::vector<SisoRow> run_siso_sweep(const Scene& scene, std::span<const int> mcs_list,
                                    std::span<const double> distances_m, const FrameSpec& frame,
                                    std::uint64_t seed) {
  require_shape(scene, 1, 1, "siso sweep");
  std::vector<SisoRow> rows;
  Scene s = scene;
  const FrontEnd& tx = *s.transmitters().front();
  const Vec3 axis = normalized(tx.boresight);
  const Vec3 origin = tx.position;
  FrontEnd& rx = nth_of_role(s, Role::kRx, 0);
  const std::vector<double> p_tx = tx_powers_dbm(s);

  for (std::size_t di = 0; di < distances_m.size(); ++di) {
    const double d = distances_m[di];
    if (!(d > 0.0)) throw DomainError("sweep distances must be > 0");
    rx.position = origin + d * axis;
    rx.boresight = -1.0 * axis;
    const double rssi = rssi_per_chain(gains_only(s, 0), p_tx).front();
    const double snr = is_no_signal(rssi) ? kNoSignalDb : rssi - s.noise_floor_dbm;
    for (int m : mcs_list) {
      SisoRow row;
      row.distance_m = d;
      row.rssi_dbm = rssi;
      row.snr_db = snr;
      row.mcs = m;
      const double snr_arr[1] = {snr};
      row.fsr_model = fsr(mcs(m), snr_arr, frame);
      row.frames = frame.count;
      row.successes = bernoulli_successes(row.fsr_model, frame.count,
                                          derive_seed(seed, di, static_cast<std::uint64_t>(m)));
      rows.push_back(row);
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SisoRow& a, const SisoRow& b) {
    if (a.rssi_dbm != b.rssi_dbm) return a.rssi_dbm < b.rssi_dbm;
    return a.mcs < b.mcs;
  });
  return rows;
}

double first_rssi_reaching(std::span<const SisoRow> rows, int mcs_index, double fsr_target) {
  // rows are RSSI-ascending; walk down from the top until one falls short.
  double found = kNoSignalDbm;
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    if (it->mcs != mcs_index) continue;
    if (it->fsr() < fsr_target) break;
    found = it->rssi_dbm;
  }
  return found;
}

// ---- Blockage ------------------------------------------------------------

std::vector<Obstacle> standard_blockage_schedule(const std::string& tx_id, const std::string& rx_a,
                                                 const std::string& rx_b) {
  return {
      Obstacle{"cover_b", {{tx_id, rx_b}}, {100, 181}},
      Obstacle{"cover_a", {{tx_id, rx_a}}, {200, 281}},
  };
}

std::vector<FrameTrace> run_blockage_timeline(const Scene& scene, const McsEntry& mcs,
                                              const FrameSpec& frame, std::uint64_t n_frames,
                                              std::uint64_t seed, Technique technique) {
  if (scene.transmitters().size() != 1 || scene.receivers().empty())
    throw ContractError("blockage timeline needs 1 TX and at least 1 RX");
  if (mcs.n_streams != 1) throw ContractError("blockage timeline runs single-stream MCSs");
  if (technique == Technique::kZf) throw ContractError("zero forcing needs more than one stream");

  const std::vector<double> p_tx = tx_powers_dbm(scene);
  std::vector<FrameTrace> out;
  out.reserve(n_frames);
  for (std::uint64_t i = 0; i < n_frames; ++i) {
    FrameTrace t;
    t.frame_index = i;
    t.technique = technique;
    t.mcs_index = mcs.index;
    t.per_chain_rssi_dbm = rssi_per_chain(gains_only(scene, i), p_tx);
    switch (technique) {
      case Technique::kSiso:
        t.combined_rssi_dbm = t.per_chain_rssi_dbm.front();
        break;
      case Technique::kSc:
        t.combined_rssi_dbm =
            *std::max_element(t.per_chain_rssi_dbm.begin(), t.per_chain_rssi_dbm.end());
        break;
      case Technique::kMrc:
      case Technique::kZf:
        // Equal noise on every chain, so summing SNRs is summing powers.
        t.combined_rssi_dbm = mw_to_dbm(sum_mw(t.per_chain_rssi_dbm));
        break;
    }
    const double snr[1] = {is_no_signal(t.combined_rssi_dbm) ? kNoSignalDb
                                                             : t.combined_rssi_dbm - scene.noise_floor_dbm};
    t.success = bernoulli_successes(fsr(mcs, snr, frame), 1, derive_seed(seed, i)) == 1;
    out.push_back(std::move(t));
  }
  return out;
}

// ---- MRC point -----------------------------------------------------------

std::vector<MrcBranch> run_mrc_fsr_point(double snr_a_db, double snr_b_db, const McsEntry& mcs,
                                         const FrameSpec& frame, std::uint64_t seed) {
  const double branches[2] = {db_to_linear(snr_a_db), db_to_linear(snr_b_db)};
  const double snrs[3] = {snr_a_db, snr_b_db, mrc_combine(branches).db};
  const char* names[3] = {"A", "B", "MRC"};
  std::vector<MrcBranch> out;
  for (std::size_t b = 0; b < 3; ++b) {
    MrcBranch r;
    r.name = names[b];
    r.snr_db = snrs[b];
    r.fsr_model = fsr(mcs, std::span(&snrs[b], 1), frame);
    r.frames = frame.count;
    r.successes = bernoulli_successes(r.fsr_model, frame.count, derive_seed(seed, b));
    out.push_back(r);
  }
  return out;
}

std::vector<double> path_snrs_db(const Scene& scene) {
  require_shape(scene, 1, 2, "mrc point");
  std::vector<double> out = rssi_per_chain(gains_only(scene, 0), tx_powers_dbm(scene));
  for (double& v : out)
    if (!is_no_signal(v)) v -= scene.noise_floor_dbm;
  return out;
}

// ---- Handover ------------------------------------------------------------

double handover_span_deg(const Scene& scene) {
  require_shape(scene, 1, 2, "handover sweep");
  const FrontEnd& tx = *scene.transmitters().front();
  const Vec3 ua = normalized(scene.receivers()[0]->position - tx.position);
  const Vec3 ub = normalized(scene.receivers()[1]->position - tx.position);
  return std::acos(std::clamp(dot(ua, ub), -1.0, 1.0)) / kDegToRad;
}

std::vector<HandoverRow> run_handover_sweep(const Scene& scene, std::span<const double> angles_deg) {
  const double span_deg = handover_span_deg(scene);
  const double theta = span_deg * kDegToRad;
  if (!(std::sin(theta) > 1e-9))
    throw GeometryError("handover receivers must lie in distinct, non-opposite directions");

  Scene s = scene;
  FrontEnd& tx = nth_of_role(s, Role::kTx, 0);
  const Vec3 ua = normalized(s.receivers()[0]->position - tx.position);
  const Vec3 ub = normalized(s.receivers()[1]->position - tx.position);
  const std::vector<double> p_tx = tx_powers_dbm(s);

  std::vector<HandoverRow> out;
  out.reserve(angles_deg.size());
  for (double a : angles_deg) {
    const double alpha = a * kDegToRad;
    tx.boresight = normalized((std::sin(theta - alpha) / std::sin(theta)) * ua +
                              (std::sin(alpha) / std::sin(theta)) * ub);
    const std::vector<double> r = rssi_per_chain(gains_only(s, 0), p_tx);
    out.push_back({a, r[0], r[1], mw_to_dbm(sum_mw(r))});
  }
  return out;
}

// ---- Area grid -----------------------------------------------------------

Scene place_receivers(const Scene& scene, const AreaLayout& layout, Placement placement) {
  require_shape(scene, 2, 2, "area grid");
  Scene s = scene;
  const int areas[2] = {placement.rx1, placement.rx2};
  const double ys[2] = {layout.rx1_y, layout.rx2_y};
  for (std::size_t r = 0; r < 2; ++r) {
    if (areas[r] < 1 || areas[r] > 3)
      throw ValidationError("placement", "areas are numbered 1 to 3");
    FrontEnd& rx = nth_of_role(s, Role::kRx, r);
    rx.position = {layout.x[areas[r] - 1], ys[r], layout.height};
    rx.boresight = {0.0, 0.0, 1.0};
    if (areas[r] == 2 && layout.area2_tilt_deg != 0.0) {
      const double towards = s.transmitters()[r]->position.x - rx.position.x;
      const double sign = towards < 0.0 ? -1.0 : 1.0;
      const double t = layout.area2_tilt_deg * kDegToRad;
      rx.boresight = {sign * std::sin(t), 0.0, std::cos(t)};
    }
  }
  return s;
}

int classify_area(const ChannelMatrix& cm, std::size_t rx) {
  if (cm.n_tx() < 2) throw ContractError("area classification needs two transmitters");
  const bool a = cm.path_gain(rx, 0) > 0.0;
  const bool b = cm.path_gain(rx, 1) > 0.0;
  if (a && b) return 2;
  if (a) return 1;
  if (b) return 3;
  return 0;
}

std::vector<AreaRow> run_mimo_area_grid(const Scene& scene, const AreaLayout& layout,
                                        std::span<const Placement> placements,
                                        std::span<const int> mcs_list, Bandwidth bw,
                                        const FrameSpec& frame, std::uint64_t seed) {
  const std::vector<double> freqs = data_subcarrier_freqs_hz(bw, scene.carrier_hz);
  const double noise_mw = dbm_to_mw(scene.noise_floor_dbm);
  std::vector<AreaRow> out;
  for (std::size_t pi = 0; pi < placements.size(); ++pi) {
    const Scene s = place_receivers(scene, layout, placements[pi]);
    simd::PlanarChannel h = simd::to_planar(channel_matrix(s, 0, freqs));
    // Fold each TX's power into its column so streams see unit power.
    const std::vector<double> p_tx = tx_powers_dbm(s);
    for (std::size_t j = 0; j < h.n_tx(); ++j) {
      const double a = std::sqrt(dbm_to_mw(p_tx[j]));
      for (std::size_t i = 0; i < h.n_rx(); ++i)
        for (std::size_t k = 0; k < h.n_sc(); ++k) {
          h.re(i, j)[k] *= a;
          h.im(i, j)[k] *= a;
        }
    }
    for (int m : mcs_list) {
      const McsEntry& e = mcs(m);
      MimoConfig{h.n_tx(), h.n_rx(), static_cast<std::size_t>(e.n_streams)}.check();
      std::vector<std::size_t> rows(h.n_rx()), cols(static_cast<std::size_t>(e.n_streams));
      for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
      for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = j;
      const PostSnr post = zf_decode(h.subset(rows, cols), 1.0, noise_mw);

      AreaRow row;
      row.placement = placements[pi];
      row.mcs = m;
      row.solvable = post.solvable;
      row.condition_number = post.condition_number;
      row.min_post_snr_db = *std::min_element(post.per_stream_snr_db.begin(), post.per_stream_snr_db.end());
      row.fsr_model = fsr(e, post.per_stream_snr_db, frame);
      row.frames = frame.count;
      row.successes = bernoulli_successes(row.fsr_model, frame.count,
                                          derive_seed(seed, pi, static_cast<std::uint64_t>(m)));
      out.push_back(row);
    }
  }
  return out;
}

// ---- CSI -----------------------------------------------------------------

CsiResult run_csi_report(const Scene& scene, int bits, Bandwidth bw, bool combine_tx) {
  const ChannelMatrix cm = channel_matrix(scene, 0, data_subcarrier_freqs_hz(bw, scene.carrier_hz));
  CsiResult out;
  out.report = combine_tx ? report_csi(combine_transmitters(cm), bits) : report_csi(cm, bits);
  if (!out.report.empty()) {
    for (std::size_t i = 0; i < out.report.n_rx; ++i)
      for (std::size_t j = 0; j < out.report.n_tx; ++j)
        out.ripple_db.push_back(magnitude_ripple_db(out.report, i, j));
  }
  return out;
}

// ---- Oracle --------------------------------------------------------------

double snr_for_fsr(const McsEntry& m, double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("target FSR must lie in (0, 1)");
  return m.snr_threshold_db + kFsrSlopeDb * std::log(p / (1.0 - p));
}

std::vector<OracleRow> run_oracle_check(std::span<const int> mcs_list,
                                        std::span<const double> target_fsrs, const FrameSpec& frame,
                                        std::size_t n_frames, std::uint64_t seed) {
  const std::size_t n_sc = data_subcarrier_offsets_hz(Bandwidth::k20MHz).size();
  std::vector<OracleRow> out;
  for (int m : mcs_list) {
    const McsEntry& e = mcs(m);
    const auto n = static_cast<std::size_t>(e.n_streams);
    simd::PlanarChannel h(n, n, n_sc);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n_sc; ++k) h.set(k, i, i, 1.0);
    const OracleMapping map = oracle_mapping(e.modulation, frame.payload_bytes);

    for (std::size_t pi = 0; pi < target_fsrs.size(); ++pi) {
      OracleRow row;
      row.mcs = m;
      row.analytic_snr_db = snr_for_fsr(e, target_fsrs[pi]);
      const std::vector<double> per_stream(n, row.analytic_snr_db);
      row.fsr_analytic = fsr(e, per_stream, frame);
      row.oracle_snr_db = map.oracle_snr_db(e, row.analytic_snr_db);
      row.fsr_empirical = run_frames(h, e, frame, row.oracle_snr_db, n_frames,
                                     derive_seed(seed, static_cast<std::uint64_t>(m), pi))
                              .fsr();
      out.push_back(row);
    }
  }
  return out;
}

}  // namespace vlcsim
