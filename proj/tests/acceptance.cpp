// Acceptance gate. One PASS/FAIL line per criterion; exit status is the
// number of failures. Tolerances and runtime budgets are fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "vlcsim/csi.hpp"
#include "vlcsim/mimo_rx.hpp"
#include "vlcsim/phy_mcs.hpp"
#include "vlcsim/scenario.hpp"
#include "vlcsim/scene_config.hpp"
#include "vlcsim/waveform.hpp"

using namespace vlcsim;
using cd = std::complex<double>;

namespace {

const std::string kPresets = VLCSIM_PRESET_DIR;

SceneFile preset(const std::string& name) { return load_scene_file(kPresets + "/" + name); }

struct Verdict {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond) ok = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (cond ? "" : " [violated]");
  }
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

simd::PlanarChannel flat2(cd a, cd b, cd c, cd d) {
  simd::PlanarChannel h(2, 2, 52);
  for (std::size_t k = 0; k < 52; ++k) {
    h.set(k, 0, 0, a);
    h.set(k, 0, 1, b);
    h.set(k, 1, 0, c);
    h.set(k, 1, 1, d);
  }
  return h;
}

// ---- criteria --------------------------------------------------------------

Verdict mrc_gain() {
  Verdict v;
  double worst = 0.0;
  for (double snr_db : {-5.0, 0.0, 3.0, 10.0, 27.5}) {
    const double lin = std::pow(10.0, snr_db / 10.0);
    const double two[2] = {lin, lin};
    worst = std::max(worst, std::abs(mrc_combine(two).db - snr_db - 3.0103));
  }
  v.require(worst <= 0.01, fmt("max |gain - 3.01 dB| = %.5f dB <= 0.01", worst));
  return v;
}

Verdict blockage_resilience() {
  Verdict v;
  const SceneFile f = preset("blockage.ini");
  const auto traces = run_blockage_timeline(f.scene, mcs(0), FrameSpec{}, kStandardTimelineFrames, 1);
  const auto ok = std::count_if(traces.begin(), traces.end(), [](const FrameTrace& t) { return t.success; });
  v.require(traces.size() == 350 && ok == 350, std::to_string(ok) + "/" + std::to_string(traces.size()) + " frames decoded");
  // Unblocked per-path RSSI at frame 0.
  const double clear_a = traces[0].per_chain_rssi_dbm[0];
  const double clear_b = traces[0].per_chain_rssi_dbm[1];
  double worst = 0.0;
  std::size_t blocked = 0;
  for (const FrameTrace& t : traces) {
    const bool a_dead = std::isinf(t.per_chain_rssi_dbm[0]);
    const bool b_dead = std::isinf(t.per_chain_rssi_dbm[1]);
    if (a_dead == b_dead) continue;
    ++blocked;
    const double survivor = a_dead ? clear_b : clear_a;
    worst = std::max(worst, std::abs(t.combined_rssi_dbm - survivor));
  }
  v.require(blocked == 162, std::to_string(blocked) + " single-path blocked frames (expected 162)");
  v.require(worst <= 0.1, fmt("combined vs surviving path %.4f dB <= 0.1", worst));
  return v;
}

Verdict mrc_fsr_point() {
  Verdict v;
  const SceneFile f = preset("mrc_point.ini");
  const std::vector<double> snr = path_snrs_db(f.scene);
  const auto rows = run_mrc_fsr_point(snr[0], snr[1], mcs(0), FrameSpec{1000, 1000}, 7);
  v.require(std::abs(rows[0].fsr() - 0.626) <= 0.05, fmt("path A FSR %.3f within 0.626 +- 0.05", rows[0].fsr()));
  v.require(std::abs(rows[1].fsr() - 0.365) <= 0.05, fmt("path B FSR %.3f within 0.365 +- 0.05", rows[1].fsr()));
  v.require(rows[2].fsr() >= 0.90, fmt("MRC FSR %.3f >= 0.90", rows[2].fsr()));
  return v;
}

Verdict siso_ladder() {
  Verdict v;
  const SceneFile f = preset("siso.ini");
  v.require(f.scene.noise_floor_dbm == -60.0, fmt("noise floor %.1f dBm", f.scene.noise_floor_dbm));
  const double at55[1] = {-55.0};
  const std::vector<double> d55 = distances_for_rssi(f.scene, at55);
  const int m0[1] = {0};
  const auto point = run_siso_sweep(f.scene, m0, d55, FrameSpec{}, 3);
  v.require(std::abs(point[0].rssi_dbm + 55.0) < 1e-6 && point[0].fsr() >= 0.99,
            fmt("MCS0 FSR at -55 dBm %.3f >= 0.99", point[0].fsr()));

  std::vector<double> rssi;
  for (double r = -65.0; r <= -20.0 + 1e-9; r += 0.25) rssi.push_back(r);
  const int ladder[2] = {0, 7};
  const auto rows = run_siso_sweep(f.scene, ladder, distances_for_rssi(f.scene, rssi), FrameSpec{}, 3);
  const double gap = first_rssi_reaching(rows, 7, 0.99) - first_rssi_reaching(rows, 0, 0.99);
  v.require(std::abs(gap - 30.0) <= 3.0, fmt("MCS7 - MCS0 RSSI at FSR 0.99 = %.2f dB within 30 +- 3", gap));
  return v;
}

AreaLayout layout_of(const Params& p) {
  AreaLayout l;
  l.x[0] = p.get_double("area1_x", l.x[0]);
  l.x[1] = p.get_double("area2_x", l.x[1]);
  l.x[2] = p.get_double("area3_x", l.x[2]);
  l.height = p.get_double("rx_height", l.height);
  l.rx1_y = p.get_double("rx1_y", l.rx1_y);
  l.rx2_y = p.get_double("rx2_y", l.rx2_y);
  l.area2_tilt_deg = p.get_double("area2_tilt_deg", l.area2_tilt_deg);
  return l;
}

Verdict mimo_area() {
  Verdict v;
  const int list[5] = {8, 9, 10, 11, 12};
  {
    const SceneFile f = preset("mimo_area.ini");
    const Placement pl[4] = {{1, 3}, {2, 3}, {1, 2}, {2, 2}};
    const auto rows = run_mimo_area_grid(f.scene, layout_of(f.scenario), pl, list, Bandwidth::k20MHz,
                                         FrameSpec{}, 5);
    double good = 1.0, bad = 0.0;
    for (const AreaRow& r : rows) {
      if (r.placement.rx1 == 2 && r.placement.rx2 == 2) {
        if (r.mcs >= 9) bad = std::max(bad, r.fsr());
      } else {
        good = std::min(good, r.fsr());
      }
    }
    v.require(good >= 0.99, fmt("worst FSR over (1,3) (2,3) (1,2), MCS 8-12 = %.3f >= 0.99", good));
    v.require(bad <= 0.05, fmt("best FSR at (2,2) proportional, MCS 9-12 = %.3f <= 0.05", bad));
  }
  {
    const SceneFile f = preset("mimo_area_imbalance.ini");
    const Placement pl[1] = {{2, 2}};
    const int m8[1] = {8};
    const auto rows = run_mimo_area_grid(f.scene, layout_of(f.scenario), pl, m8, Bandwidth::k20MHz,
                                         FrameSpec{}, 5);
    v.require(rows[0].fsr() > 0.8, fmt("(2,2) imbalance MCS8 FSR %.3f > 0.8", rows[0].fsr()));
  }
  return v;
}

Verdict csi_shape() {
  Verdict v;
  const CsiResult siso = run_csi_report(preset("siso.ini").scene, 6, Bandwidth::k40MHz, false);
  const CsiResult miso = run_csi_report(preset("csi_miso.ini").scene, 6, Bandwidth::k40MHz, true);
  v.require(!siso.report.empty() && siso.ripple_db[0] <= 3.0, fmt("SISO ripple %.3f dB <= 3", siso.ripple_db[0]));
  v.require(!miso.report.empty() && miso.ripple_db[0] >= 10.0, fmt("MISO ripple %.3f dB >= 10", miso.ripple_db[0]));
  return v;
}

Verdict handover_flatness() {
  Verdict v;
  const SceneFile f = preset("handover.ini");
  const double span = handover_span_deg(f.scene);
  std::vector<double> angles;
  for (double a = 0.0; a <= span + 1e-9; a += 1.0) angles.push_back(a);
  if (angles.back() < span) angles.push_back(span);
  const auto rows = run_handover_sweep(f.scene, angles);
  auto swing = [&](double HandoverRow::*m) {
    double lo = rows.front().*m, hi = lo;
    for (const HandoverRow& r : rows) {
      lo = std::min(lo, r.*m);
      hi = std::max(hi, r.*m);
    }
    return hi - lo;
  };
  const double sa = swing(&HandoverRow::rssi_a_dbm), sb = swing(&HandoverRow::rssi_b_dbm);
  const double sm = swing(&HandoverRow::rssi_mrc_dbm);
  v.require(sm <= 3.0, fmt("MRC excursion %.3f dB <= 3", sm));
  v.require(sa >= 10.0 && sb >= 10.0, fmt("path swings %.2f", sa) + fmt(" / %.2f dB >= 10", sb));
  return v;
}

Verdict rate_table() {
  Verdict v;
  v.require(phy_rate(mcs(15), Bandwidth::k40MHz) == 300.0, fmt("MCS15 @ 40 MHz = %.1f Mbit/s", phy_rate(mcs(15), Bandwidth::k40MHz)));
  bool doubled = true;
  for (int m = 0; m < 8; ++m)
    for (Bandwidth bw : {Bandwidth::k20MHz, Bandwidth::k40MHz})
      doubled = doubled && phy_rate(mcs(m + 8), bw) == 2.0 * phy_rate(mcs(m), bw);
  v.require(doubled, "every 2-stream rate is twice its 1-stream counterpart");
  return v;
}

Verdict oracle_equivalence() {
  Verdict v;
  const int list[6] = {0, 1, 2, 8, 9, 10};
  const double targets[5] = {0.1, 0.3, 0.5, 0.7, 0.9};
  const auto rows = run_oracle_check(list, targets, FrameSpec{}, 1000, 1);
  double worst = 0.0;
  for (const OracleRow& r : rows) worst = std::max(worst, std::abs(r.fsr_analytic - r.fsr_empirical));
  v.require(rows.size() == 30 && worst <= 0.1, fmt("max |analytic - empirical| over 30 points = %.3f <= 0.1", worst));

  const cd j{0.0, 1.0};
  const auto full = flat2(0.8, 0.3 * j, -0.2, 0.6 + 0.1 * j);
  const auto rank1 = flat2(0.5, 0.5, 0.25, 0.25);
  std::size_t errors = 0, rank1_ok = 0, runs = 0;
  for (int m = 8; m < 16; ++m)
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      ++runs;
      errors += simulate_frame(full, mcs(m), FrameSpec{}, 300.0, seed).bit_errors;
      rank1_ok += simulate_frame(rank1, mcs(m), FrameSpec{}, 40.0, seed).frame_ok ? 1 : 0;
    }
  v.require(errors == 0, std::to_string(errors) + " bit errors over " + std::to_string(runs) + " noiseless 2x2 frames");
  v.require(rank1_ok == 0, std::to_string(rank1_ok) + " rank-1 frames decoded");
  return v;
}

// Same invariants as the unit property suites, with their own generators.
Verdict property_suites() {
  Verdict v;
  constexpr int kCases = 1000;
  std::mt19937_64 rng(2024);
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto unit = [&] {
    for (;;) {
      const Vec3 p{uni(-1, 1), uni(-1, 1), uni(-1, 1)};
      if (norm(p) > 0.1 && norm(p) <= 1.0) return normalized(p);
    }
  };

  int bad = 0;
  for (int c = 0; c < kCases; ++c) {
    std::vector<double> b(static_cast<std::size_t>(pick(1, 6)));
    for (double& x : b) x = uni(0.0, 100.0);
    const double base = mrc_combine(b).linear;
    const double mx = *std::max_element(b.begin(), b.end());
    std::shuffle(b.begin(), b.end(), rng);
    if (base < mx || std::abs(mrc_combine(b).linear - base) > 1e-12 * base) ++bad;
  }
  v.require(bad == 0, "MRC dominance/permutation " + std::to_string(kCases - bad) + "/" + std::to_string(kCases));

  bad = 0;
  for (int c = 0; c < kCases; ++c) {
    const McsEntry& e = mcs(pick(0, 15));
    std::vector<double> s(static_cast<std::size_t>(e.n_streams));
    for (double& x : s) x = uni(-20.0, 50.0);
    const FrameSpec f{static_cast<std::size_t>(pick(1, 4000)), 1};
    const double before = fsr(e, s, f);
    s[static_cast<std::size_t>(pick(0, e.n_streams - 1))] += uni(0.0, 10.0);
    if (fsr(e, s, f) < before) ++bad;
  }
  v.require(bad == 0, "FSR monotone " + std::to_string(kCases - bad) + "/" + std::to_string(kCases));

  bad = 0;
  for (int c = 0; c < kCases; ++c) {
    FrontEnd tx{"T", Role::kTx, {uni(-2, 2), uni(-2, 2), uni(-2, 2)}, unit()};
    tx.half_power_semi_angle_deg = uni(5.0, 85.0);
    const Vec3 dir = unit();
    const double d = uni(0.05, 5.0), k = uni(1.01, 4.0);
    FrontEnd rx{"R", Role::kRx, tx.position + d * dir, unit()};
    const double g1 = los_gain(tx, rx).gain;
    rx.position = tx.position + (k * d) * dir;
    const double g2 = los_gain(tx, rx).gain;
    const bool ok = g1 == 0.0 ? g2 == 0.0 : (g2 < g1 && std::abs(g2 * k * k / g1 - 1.0) < 1e-9);
    if (!ok) ++bad;
  }
  v.require(bad == 0, "1/d^2 gain " + std::to_string(kCases - bad) + "/" + std::to_string(kCases));

  bad = 0;
  for (int c = 0; c < kCases; ++c) {
    const double delay = uni(1e-10, 5e-8);
    const std::vector<double> f = {uni(1e6, 5e9), uni(1e6, 5e9)};
    const ChannelMatrix cm(1, 1, f, {uni(1e-8, 1e-3)}, {delay});
    const double measured = std::arg(cm.entry(0, 0, 0)) - std::arg(cm.entry(1, 0, 0));
    const double expected = -2.0 * std::numbers::pi * (f[0] - f[1]) * delay;
    if (std::abs(std::remainder(measured - expected, 2.0 * std::numbers::pi)) > 1e-6) ++bad;
  }
  v.require(bad == 0, "phase vs delay " + std::to_string(kCases - bad) + "/" + std::to_string(kCases));

  bad = 0;
  for (int c = 0; c < kCases; ++c) {
    const int m = pick(0, 15);
    const auto n = static_cast<std::size_t>(mcs(m).n_streams);
    simd::PlanarChannel h(n, n, 52);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t t = 0; t < n; ++t) {
        const cd x{uni(-1, 1), uni(-1, 1)};
        for (std::size_t k = 0; k < 52; ++k) h.set(k, i, t, x);
      }
    const double snr = uni(0.0, 30.0);
    const std::uint64_t seed = rng();
    const FrameSpec f{static_cast<std::size_t>(pick(1, 40)), 1};
    const FrameOutcome a = simulate_frame(h, mcs(m), f, snr, seed);
    const FrameOutcome b = simulate_frame(h, mcs(m), f, snr, seed);
    if (a.bit_errors != b.bit_errors || a.frame_ok != b.frame_ok) ++bad;
  }
  v.require(bad == 0, "fixed-seed reproducibility " + std::to_string(kCases - bad) + "/" + std::to_string(kCases));
  return v;
}

struct Criterion {
  int number;
  const char* name;
  double budget_s;
  std::function<Verdict()> run;
};

}  // namespace

int main() {
  const Criterion all[] = {
      {1, "MRC gain", 1.0, mrc_gain},
      {2, "blockage resilience", 1.0, blockage_resilience},
      {3, "MRC FSR point", 5.0, mrc_fsr_point},
      {4, "SISO ladder anchors", 10.0, siso_ladder},
      {5, "MIMO area grid", 10.0, mimo_area},
      {6, "CSI shape", 1.0, csi_shape},
      {7, "handover flatness", 1.0, handover_flatness},
      {8, "rate table", 1.0, rate_table},
      {9, "oracle equivalence", 60.0, oracle_equivalence},
      {10, "property suites", 30.0, property_suites},
  };
  int failures = 0;
  for (const Criterion& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.require(false, std::string("threw: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    v.require(secs < c.budget_s, fmt("%.2f s", secs) + fmt(" < %.0f s", c.budget_s));
    if (!v.ok) ++failures;
    std::printf("%s criterion %d (%s): %s\n", v.ok ? "PASS" : "FAIL", c.number, c.name, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/10 criteria passed\n", 10 - failures);
  return failures;
}
