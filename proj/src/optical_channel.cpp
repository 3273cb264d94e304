#include "vlcsim/optical_channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "vlcsim/errors.hpp"

namespace vlcsim {

namespace {

constexpr double kUnitNormTolerance = 1e-9;
constexpr double kDegToRad = std::numbers::pi / 180.0;

std::string front_end_field(const FrontEnd& fe, const char* name) {
  return "frontend." + fe.id + "." + name;
}

}  // namespace

double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

double norm(Vec3 v) { return std::sqrt(dot(v, v)); }

Vec3 normalized(Vec3 v) {
  const double n = norm(v);
  if (n == 0.0) throw DomainError("cannot normalize a zero vector");
  return (1.0 / n) * v;
}

bool Obstacle::blocks(const std::string& tx_id, const std::string& rx_id,
                      std::uint64_t frame) const {
  if (!active.contains(frame)) return false;
  return std::any_of(blocked_pairs.begin(), blocked_pairs.end(), [&](const auto& p) {
    return p.first == tx_id && p.second == rx_id;
  });
}

std::vector<const FrontEnd*> Scene::transmitters() const {
  std::vector<const FrontEnd*> out;
  for (const auto& fe : front_ends)
    if (fe.role == Role::kTx) out.push_back(&fe);
  return out;
}

std::vector<const FrontEnd*> Scene::receivers() const {
  std::vector<const FrontEnd*> out;
  for (const auto& fe : front_ends)
    if (fe.role == Role::kRx) out.push_back(&fe);
  return out;
}

const FrontEnd* Scene::find(const std::string& id) const {
  auto it = std::find_if(front_ends.begin(), front_ends.end(),
                         [&](const FrontEnd& fe) { return fe.id == id; });
  return it == front_ends.end() ? nullptr : &*it;
}

FrontEnd* Scene::find(const std::string& id) {
  return const_cast<FrontEnd*>(std::as_const(*this).find(id));
}

std::vector<Diagnostic> validate(const Scene& scene) {
  std::vector<Diagnostic> out;
  auto fail = [&](std::string field, std::string rule) {
    out.push_back({std::move(field), std::move(rule)});
  };

  if (!std::isfinite(scene.noise_floor_dbm))
    fail("scene.noise_floor_dbm", "must be finite");
  if (!(scene.carrier_hz >= 0.0) || !std::isfinite(scene.carrier_hz))
    fail("scene.carrier_hz", "must be finite and >= 0");

  std::set<std::string> ids;
  for (const auto& fe : scene.front_ends) {
    if (fe.id.empty()) fail("frontend", "id must not be empty");
    if (!ids.insert(fe.id).second) fail(front_end_field(fe, "id"), "duplicate id");
    if (std::abs(norm(fe.boresight) - 1.0) > kUnitNormTolerance)
      fail(front_end_field(fe, "boresight"), "must have unit norm within 1e-9");
    if (fe.role == Role::kTx) {
      const double a = fe.half_power_semi_angle_deg;
      if (!(a > 0.0 && a < 90.0))
        fail(front_end_field(fe, "half_power_semi_angle"), "must satisfy 0 < angle < 90 degrees");
      if (!std::isfinite(fe.tx_electrical_power_dbm))
        fail(front_end_field(fe, "tx_electrical_power_dbm"), "must be finite");
    } else {
      const double fov = fe.fov_half_angle_deg;
      if (!(fov > 0.0 && fov <= 90.0))
        fail(front_end_field(fe, "fov_half_angle"), "must satisfy 0 < fov <= 90 degrees");
      if (!(fe.active_area_m2 > 0.0))
        fail(front_end_field(fe, "active_area"), "must be > 0");
      if (!std::isfinite(fe.conversion_gain_db))
        fail(front_end_field(fe, "conversion_gain_db"), "must be finite");
    }
  }

  if (scene.transmitters().empty()) fail("scene", "needs at least one TX front-end");
  if (scene.receivers().empty()) fail("scene", "needs at least one RX front-end");

  for (const auto& ob : scene.obstacles) {
    const std::string base = "obstacle." + ob.id;
    if (!(ob.active.start < ob.active.end))
      fail(base + ".start", "start must be < end");
    if (ob.blocked_pairs.empty()) fail(base + ".blocked_pairs", "must list at least one pair");
    for (const auto& [tx, rx] : ob.blocked_pairs) {
      const FrontEnd* t = scene.find(tx);
      const FrontEnd* r = scene.find(rx);
      if (t == nullptr || t->role != Role::kTx)
        fail(base + ".blocked_pairs", "unknown TX id '" + tx + "'");
      if (r == nullptr || r->role != Role::kRx)
        fail(base + ".blocked_pairs", "unknown RX id '" + rx + "'");
    }
  }
  return out;
}

void require_valid(const Scene& scene) {
  const auto diags = validate(scene);
  if (!diags.empty()) throw ValidationError(diags.front().field, diags.front().rule);
}

double lambertian_order(double half_power_semi_angle_deg) {
  if (!(half_power_semi_angle_deg > 0.0 && half_power_semi_angle_deg < 90.0))
    throw DomainError("half-power semi-angle must lie in (0, 90) degrees");
  return -std::numbers::ln2 / std::log(std::cos(half_power_semi_angle_deg * kDegToRad));
}

PathGain los_gain(const FrontEnd& tx, const FrontEnd& rx) {
  if (tx.role != Role::kTx || rx.role != Role::kRx)
    throw ContractError("los_gain expects a TX and an RX front-end");
  const Vec3 v = rx.position - tx.position;
  const double d = norm(v);
  if (!(d > 0.0)) throw GeometryError("TX '" + tx.id + "' and RX '" + rx.id + "' coincide");

  PathGain out;
  out.delay_s = d / kSpeedOfLight;

  const double cos_radiance = dot(tx.boresight, v) / d;
  const double cos_incidence = -dot(rx.boresight, v) / d;
  if (cos_radiance <= 0.0 || cos_incidence <= 0.0) return out;
  const double incidence_deg = std::acos(std::min(1.0, cos_incidence)) / kDegToRad;
  if (incidence_deg > rx.fov_half_angle_deg) return out;

  const double m = lambertian_order(tx.half_power_semi_angle_deg);
  out.gain = (m + 1.0) * rx.active_area_m2 / (2.0 * std::numbers::pi * d * d) *
             std::pow(cos_radiance, m) * cos_incidence;
  return out;
}

double on_axis_distance_for_gain(const FrontEnd& tx, const FrontEnd& rx, double target_gain) {
  if (!(target_gain > 0.0)) throw DomainError("target gain must be positive");
  const double m = lambertian_order(tx.half_power_semi_angle_deg);
  const double g1 = (m + 1.0) * rx.active_area_m2 / (2.0 * std::numbers::pi) *
                    db_to_linear(rx.conversion_gain_db);
  return std::sqrt(g1 / target_gain);
}

ChannelMatrix::ChannelMatrix(std::size_t n_rx, std::size_t n_tx, std::vector<double> freqs,
                             std::vector<double> path_gains, std::vector<double> path_delays)
    : n_rx_(n_rx),
      n_tx_(n_tx),
      freqs_(std::move(freqs)),
      gains_(std::move(path_gains)),
      delays_(std::move(path_delays)) {
  if (gains_.size() != n_rx_ * n_tx_ || delays_.size() != n_rx_ * n_tx_)
    throw ContractError("path gain/delay tables must have n_rx * n_tx entries");
  entries_.resize(freqs_.size() * n_rx_ * n_tx_);
  for (std::size_t k = 0; k < freqs_.size(); ++k) {
    for (std::size_t p = 0; p < n_rx_ * n_tx_; ++p) {
      const double phase = -2.0 * std::numbers::pi * freqs_[k] * delays_[p];
      entries_[k * n_rx_ * n_tx_ + p] = std::polar(std::sqrt(gains_[p]), phase);
    }
  }
}

ChannelMatrix ChannelMatrix::leading_columns(std::size_t n_tx) const {
  if (n_tx == 0 || n_tx > n_tx_) throw ContractError("column count out of range");
  std::vector<double> g, d;
  for (std::size_t i = 0; i < n_rx_; ++i) {
    for (std::size_t j = 0; j < n_tx; ++j) {
      g.push_back(path_gain(i, j));
      d.push_back(path_delay(i, j));
    }
  }
  return ChannelMatrix(n_rx_, n_tx, freqs_, std::move(g), std::move(d));
}

ChannelMatrix ChannelMatrix::select_rows(std::span<const std::size_t> rows) const {
  std::vector<double> g, d;
  for (std::size_t i : rows) {
    if (i >= n_rx_) throw ContractError("row index out of range");
    for (std::size_t j = 0; j < n_tx_; ++j) {
      g.push_back(path_gain(i, j));
      d.push_back(path_delay(i, j));
    }
  }
  return ChannelMatrix(rows.size(), n_tx_, freqs_, std::move(g), std::move(d));
}

ChannelMatrix channel_matrix(const Scene& scene, std::uint64_t frame_index,
                             std::span<const double> subcarrier_freqs) {
  require_valid(scene);
  const auto txs = scene.transmitters();
  const auto rxs = scene.receivers();
  std::vector<double> gains(rxs.size() * txs.size());
  std::vector<double> delays(gains.size());
  for (std::size_t i = 0; i < rxs.size(); ++i) {
    for (std::size_t j = 0; j < txs.size(); ++j) {
      const PathGain pg = los_gain(*txs[j], *rxs[i]);
      const bool blocked = std::any_of(scene.obstacles.begin(), scene.obstacles.end(),
                                       [&](const Obstacle& ob) {
                                         return ob.blocks(txs[j]->id, rxs[i]->id, frame_index);
                                       });
      gains[i * txs.size() + j] =
          blocked ? 0.0 : pg.gain * db_to_linear(rxs[i]->conversion_gain_db);
      delays[i * txs.size() + j] = pg.delay_s;
    }
  }
  return ChannelMatrix(rxs.size(), txs.size(),
                       std::vector<double>(subcarrier_freqs.begin(), subcarrier_freqs.end()),
                       std::move(gains), std::move(delays));
}

std::vector<double> rssi_per_chain(const ChannelMatrix& cm, std::span<const double> tx_power_dbm) {
  if (tx_power_dbm.size() != cm.n_tx())
    throw ContractError("one TX power per matrix column is required");
  std::vector<double> out(cm.n_rx());
  for (std::size_t i = 0; i < cm.n_rx(); ++i) {
    double mw = 0.0;
    for (std::size_t j = 0; j < cm.n_tx(); ++j) mw += cm.path_gain(i, j) * dbm_to_mw(tx_power_dbm[j]);
    out[i] = mw > 0.0 ? mw_to_dbm(mw) : kNoSignalDbm;
  }
  return out;
}

std::vector<double> tx_powers_dbm(const Scene& scene) {
  std::vector<double> out;
  for (const FrontEnd* tx : scene.transmitters()) out.push_back(tx->tx_electrical_power_dbm);
  return out;
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double mw_to_dbm(double mw) { return mw > 0.0 ? 10.0 * std::log10(mw) : kNoSignalDbm; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double ratio) { return ratio > 0.0 ? 10.0 * std::log10(ratio) : kNoSignalDbm; }

}  // namespace vlcsim
