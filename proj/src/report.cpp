#include "vlcsim/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "vlcsim/errors.hpp"
#include "vlcsim/mimo_rx.hpp"

namespace vlcsim {

namespace {

using Json = nlohmann::ordered_json;

Json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_number(v);
}

FrameSpec frame_spec(const Params& p, std::size_t default_count) {
  FrameSpec f;
  const long long bytes = p.get_int("payload_bytes", static_cast<long long>(kReferencePayloadBytes));
  const long long count = p.get_int("frames", static_cast<long long>(default_count));
  if (bytes <= 0) throw ValidationError("scenario.payload_bytes", "must be > 0");
  if (count <= 0) throw ValidationError("scenario.frames", "must be > 0");
  f.payload_bytes = static_cast<std::size_t>(bytes);
  f.count = static_cast<std::size_t>(count);
  return f;
}

std::vector<int> mcs_list(const Params& p, std::vector<int> fallback) {
  std::vector<int> out = p.get_int_list("mcs", fallback);
  for (int m : out)
    if (m < 0 || m > 15) throw ValidationError("scenario.mcs", "MCS indices run 0 to 15");
  return out;
}

Bandwidth bandwidth(const Params& p, int fallback_mhz) {
  const long long mhz = p.get_int("bandwidth_mhz", fallback_mhz);
  if (mhz != 20 && mhz != 40) throw ValidationError("scenario.bandwidth_mhz", "must be 20 or 40");
  return bandwidth_from_mhz(static_cast<int>(mhz));
}

std::vector<double> range(double lo, double hi, double step, const char* field) {
  if (!(step > 0.0) || !(hi >= lo)) throw ValidationError(field, "needs min <= max and step > 0");
  std::vector<double> out;
  const auto n = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
  for (long long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

std::vector<Placement> placements(const Params& p) {
  const std::string text = p.get_string("placements", "1:3,2:3,1:2,2:2");
  std::vector<Placement> out;
  std::istringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    int a = 0, b = 0;
    char colon = 0;
    std::istringstream one(item);
    if (!(one >> a >> colon >> b) || colon != ':')
      throw ValidationError("scenario.placements", "expected a list like 1:3,2:2");
    out.push_back({a, b});
  }
  return out;
}

std::string seed_text(std::uint64_t seed) { return std::to_string(seed); }

// ---- per-scenario runs ---------------------------------------------------

void siso(const SceneFile& f, std::uint64_t seed, ScenarioRun& run) {
  const Params& p = f.scenario;
  const std::vector<int> list = mcs_list(p, {0, 1, 2, 3, 4, 5, 6, 7});
  std::vector<double> distances = p.get_double_list("distances", {});
  if (distances.empty()) {
    const std::vector<double> rssi =
        range(p.get_double("rssi_min_dbm", -65.0), p.get_double("rssi_max_dbm", -15.0),
              p.get_double("rssi_step_db", 0.5), "scenario.rssi_step_db");
    distances = distances_for_rssi(f.scene, rssi);
  }
  const std::vector<SisoRow> rows = run_siso_sweep(f.scene, list, distances, frame_spec(p, 1000), seed);
  std::ostringstream os;
  write_siso_csv(os, rows);
  run.csv = os.str();

  Json agg = Json::object();
  for (int m : list) {
    std::size_t frames = 0, ok = 0;
    for (const SisoRow& r : rows)
      if (r.mcs == m) {
        frames += r.frames;
        ok += r.successes;
      }
    agg["mcs" + std::to_string(m)] = {
        {"fsr", frames ? static_cast<double>(ok) / frames : 0.0},
        {"first_rssi_fsr_0.99_dbm", json_number(first_rssi_reaching(rows, m, 0.99))}};
  }
  run.summary["aggregate"] = agg;
}

void blockage(const SceneFile& f, std::uint64_t seed, ScenarioRun& run) {
  const Params& p = f.scenario;
  Scene scene = f.scene;
  if (p.get_string("schedule", "scene") == "standard") {
    if (scene.transmitters().size() != 1 || scene.receivers().size() < 2)
      throw ValidationError("scenario.schedule", "standard schedule needs 1 TX and 2 RX");
    const auto extra = standard_blockage_schedule(scene.transmitters()[0]->id, scene.receivers()[0]->id,
                                                  scene.receivers()[1]->id);
    scene.obstacles.insert(scene.obstacles.end(), extra.begin(), extra.end());
  }
  const std::string tech = p.get_string("technique", "MRC");
  Technique t = Technique::kMrc;
  if (tech == "SISO")
    t = Technique::kSiso;
  else if (tech == "SC")
    t = Technique::kSc;
  else if (tech != "MRC")
    throw ValidationError("scenario.technique", "must be SISO, SC or MRC");
  const std::vector<int> list = mcs_list(p, {0});
  if (list.size() != 1) throw ValidationError("scenario.mcs", "timeline takes a single MCS");
  const long long n = p.get_int("timeline_frames", static_cast<long long>(kStandardTimelineFrames));
  if (n <= 0) throw ValidationError("scenario.timeline_frames", "must be > 0");

  const auto traces = run_blockage_timeline(scene, mcs(list[0]), frame_spec(p, 1000),
                                            static_cast<std::uint64_t>(n), seed, t);
  std::ostringstream os;
  write_timeline_csv(os, traces);
  run.csv = os.str();
  const auto ok = std::count_if(traces.begin(), traces.end(), [](const FrameTrace& x) { return x.success; });
  run.summary["aggregate"] = {{"frames", traces.size()},
                              {"successes", ok},
                              {"fsr", static_cast<double>(ok) / static_cast<double>(traces.size())}};
}

void mrc_point(const SceneFile& f, std::uint64_t seed, ScenarioRun& run) {
  const Params& p = f.scenario;
  double a = 0.0, b = 0.0;
  if (p.has("snr_a_db") || p.has("snr_b_db")) {
    a = p.get_double("snr_a_db", 0.0);
    b = p.get_double("snr_b_db", 0.0);
  } else {
    const std::vector<double> snr = path_snrs_db(f.scene);
    a = snr[0];
    b = snr[1];
  }
  const std::vector<int> list = mcs_list(p, {0});
  if (list.size() != 1) throw ValidationError("scenario.mcs", "operating point takes a single MCS");
  const auto rows = run_mrc_fsr_point(a, b, mcs(list[0]), frame_spec(p, 1000), seed);
  std::ostringstream os;
  write_mrc_point_csv(os, rows);
  run.csv = os.str();
  run.summary["aggregate"] = {{"fsr_a", rows[0].fsr()}, {"fsr_b", rows[1].fsr()}, {"fsr_mrc", rows[2].fsr()}};
}

void handover(const SceneFile& f, std::uint64_t, ScenarioRun& run) {
  const Params& p = f.scenario;
  const double span = handover_span_deg(f.scene);
  const auto rows = run_handover_sweep(
      f.scene, range(0.0, p.get_double("angle_max_deg", span), p.get_double("angle_step_deg", 1.0),
                     "scenario.angle_step_deg"));
  std::ostringstream os;
  write_handover_csv(os, rows);
  run.csv = os.str();
  auto excursion = [&](auto member) {
    double lo = rows.front().*member, hi = lo;
    for (const HandoverRow& r : rows) {
      lo = std::min(lo, r.*member);
      hi = std::max(hi, r.*member);
    }
    return json_number(hi - lo);
  };
  run.summary["aggregate"] = {{"span_deg", span},
                              {"swing_a_db", excursion(&HandoverRow::rssi_a_dbm)},
                              {"swing_b_db", excursion(&HandoverRow::rssi_b_dbm)},
                              {"mrc_excursion_db", excursion(&HandoverRow::rssi_mrc_dbm)}};
}

void area_grid(const SceneFile& f, std::uint64_t seed, ScenarioRun& run) {
  const Params& p = f.scenario;
  AreaLayout layout;
  layout.x[0] = p.get_double("area1_x", layout.x[0]);
  layout.x[1] = p.get_double("area2_x", layout.x[1]);
  layout.x[2] = p.get_double("area3_x", layout.x[2]);
  layout.height = p.get_double("rx_height", layout.height);
  layout.rx1_y = p.get_double("rx1_y", layout.rx1_y);
  layout.rx2_y = p.get_double("rx2_y", layout.rx2_y);
  layout.area2_tilt_deg = p.get_double("area2_tilt_deg", layout.area2_tilt_deg);
  const std::vector<Placement> pl = placements(p);
  const std::vector<int> list = mcs_list(p, {8, 9, 10, 11, 12});
  const auto rows = run_mimo_area_grid(f.scene, layout, pl, list, bandwidth(p, 20), frame_spec(p, 1000), seed);
  std::ostringstream os;
  write_area_grid_csv(os, rows);
  run.csv = os.str();
  Json agg = Json::object();
  for (const AreaRow& r : rows) {
    const std::string key = std::to_string(r.placement.rx1) + ":" + std::to_string(r.placement.rx2);
    agg[key]["mcs" + std::to_string(r.mcs)] = r.fsr();
  }
  run.summary["aggregate"] = agg;
}

void csi(const SceneFile& f, std::uint64_t, ScenarioRun& run) {
  const Params& p = f.scenario;
  const long long bits = p.get_int("bits", kDefaultCsiBits);
  if (bits < 2 || bits > 31) throw ValidationError("scenario.bits", "must lie in 2..31");
  const bool combine = p.get_int("combine_tx", 0) != 0;
  const CsiResult res = run_csi_report(f.scene, static_cast<int>(bits), bandwidth(p, 40), combine);
  std::ostringstream os;
  write_csi_csv(os, res.report);
  run.csv = os.str();
  Json ripple = Json::array();
  double worst = 0.0;
  for (double r : res.ripple_db) {
    ripple.push_back(json_number(r));
    worst = std::max(worst, r);
  }
  run.summary["aggregate"] = {{"bits", bits},
                              {"empty", res.report.empty()},
                              {"scale", res.report.scale},
                              {"ripple_db", ripple},
                              {"max_ripple_db", json_number(worst)}};
}

void oracle(const SceneFile& f, std::uint64_t seed, ScenarioRun& run) {
  const Params& p = f.scenario;
  const std::vector<int> list = mcs_list(p, {0, 1, 2, 8, 9, 10});
  const std::vector<double> targets = p.get_double_list("target_fsrs", {0.1, 0.3, 0.5, 0.7, 0.9});
  const long long n = p.get_int("oracle_frames", 1000);
  if (n <= 0) throw ValidationError("scenario.oracle_frames", "must be > 0");
  const auto rows = run_oracle_check(list, targets, frame_spec(p, 1000), static_cast<std::size_t>(n), seed);
  std::ostringstream os;
  write_oracle_csv(os, rows);
  run.csv = os.str();
  double worst = 0.0;
  for (const OracleRow& r : rows) worst = std::max(worst, std::abs(r.fsr_analytic - r.fsr_empirical));
  run.summary["aggregate"] = {{"points", rows.size()}, {"max_abs_diff", worst}};
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_siso_csv(std::ostream& os, std::span<const SisoRow> rows) {
  os << "distance_m,rssi_dbm,snr_db,mcs,fsr_model,frames,successes,fsr\n";
  for (const SisoRow& r : rows)
    os << format_number(r.distance_m) << ',' << format_number(r.rssi_dbm) << ','
       << format_number(r.snr_db) << ',' << r.mcs << ',' << format_number(r.fsr_model) << ','
       << r.frames << ',' << r.successes << ',' << format_number(r.fsr()) << '\n';
}

void write_timeline_csv(std::ostream& os, std::span<const FrameTrace> traces) {
  std::size_t chains = 0;
  for (const FrameTrace& t : traces) chains = std::max(chains, t.per_chain_rssi_dbm.size());
  os << "frame_index,technique,mcs,combined_rssi_dbm,success";
  for (std::size_t c = 0; c < chains; ++c) os << ",rssi_chain" << c << "_dbm";
  os << '\n';
  for (const FrameTrace& t : traces) {
    os << t.frame_index << ',' << to_string(t.technique) << ',' << t.mcs_index << ','
       << format_number(t.combined_rssi_dbm) << ',' << (t.success ? "true" : "false");
    for (std::size_t c = 0; c < chains; ++c)
      os << ',' << (c < t.per_chain_rssi_dbm.size() ? format_number(t.per_chain_rssi_dbm[c]) : "");
    os << '\n';
  }
}

void write_mrc_point_csv(std::ostream& os, std::span<const MrcBranch> rows) {
  os << "branch,snr_db,fsr_model,frames,successes,fsr\n";
  for (const MrcBranch& r : rows)
    os << r.name << ',' << format_number(r.snr_db) << ',' << format_number(r.fsr_model) << ','
       << r.frames << ',' << r.successes << ',' << format_number(r.fsr()) << '\n';
}

void write_handover_csv(std::ostream& os, std::span<const HandoverRow> rows) {
  os << "angle_deg,rssi_a_dbm,rssi_b_dbm,rssi_mrc_dbm\n";
  for (const HandoverRow& r : rows)
    os << format_number(r.angle_deg) << ',' << format_number(r.rssi_a_dbm) << ','
       << format_number(r.rssi_b_dbm) << ',' << format_number(r.rssi_mrc_dbm) << '\n';
}

void write_area_grid_csv(std::ostream& os, std::span<const AreaRow> rows) {
  os << "placement_rx1,placement_rx2,mcs,solvable,condition_number,min_post_snr_db,fsr_model,frames,"
        "successes,fsr\n";
  for (const AreaRow& r : rows)
    os << r.placement.rx1 << ',' << r.placement.rx2 << ',' << r.mcs << ','
       << (r.solvable ? "true" : "false") << ',' << format_number(r.condition_number) << ','
       << format_number(r.min_post_snr_db) << ',' << format_number(r.fsr_model) << ',' << r.frames
       << ',' << r.successes << ',' << format_number(r.fsr()) << '\n';
}

void write_oracle_csv(std::ostream& os, std::span<const OracleRow> rows) {
  os << "mcs,analytic_snr_db,oracle_snr_db,fsr_analytic,fsr_empirical,abs_diff\n";
  for (const OracleRow& r : rows)
    os << r.mcs << ',' << format_number(r.analytic_snr_db) << ',' << format_number(r.oracle_snr_db)
       << ',' << format_number(r.fsr_analytic) << ',' << format_number(r.fsr_empirical) << ','
       << format_number(std::abs(r.fsr_analytic - r.fsr_empirical)) << '\n';
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"siso-sweep",     "blockage-timeline", "mrc-fsr-point",
                                                 "handover-sweep", "mimo-area-grid",    "csi-report",
                                                 "oracle-check"};
  return names;
}

bool is_known_scenario(std::string_view name) {
  const auto& n = scenario_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

ScenarioRun run_scenario(std::string_view name, const SceneFile& file, std::uint64_t seed) {
  if (!is_known_scenario(name)) throw ContractError("unknown scenario '" + std::string(name) + "'");
  if (name != "oracle-check") require_valid(file.scene);

  ScenarioRun run;
  run.name = std::string(name);
  std::ostringstream canon;
  canon << "scenario=" << name << "\nseed=" << seed_text(seed) << '\n';
  write_scene_file(canon, file.scene, file.scenario);
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a64(canon.str())));

  run.summary["scenario"] = run.name;
  run.summary["seed"] = seed;
  run.summary["config_hash"] = hash;
  run.summary["parameters"] = Json::object();
  for (const auto& [k, v] : file.scenario.values()) run.summary["parameters"][k] = v;

  if (name == "siso-sweep")
    siso(file, seed, run);
  else if (name == "blockage-timeline")
    blockage(file, seed, run);
  else if (name == "mrc-fsr-point")
    mrc_point(file, seed, run);
  else if (name == "handover-sweep")
    handover(file, seed, run);
  else if (name == "mimo-area-grid")
    area_grid(file, seed, run);
  else if (name == "csi-report")
    csi(file, seed, run);
  else
    oracle(file, seed, run);
  return run;
}

}  // namespace vlcsim
