#include "vlcsim/mimo_rx.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "vlcsim/errors.hpp"
#include "vlcsim/phy_mcs.hpp"
#include "vlcsim/simd/kernels.hpp"

namespace vlcsim {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Diagonal of (H^H H)^-1 and cond(H^H H) for three or more streams, one
// subcarrier at a time.
void gram_inverse_generic(const simd::PlanarChannel& h, std::vector<double>& inv,
                          std::vector<double>& cond) {
  const std::size_t n_sc = h.n_sc();
  const auto n_rx = static_cast<Eigen::Index>(h.n_rx());
  const auto n_tx = static_cast<Eigen::Index>(h.n_tx());
  Eigen::MatrixXcd hk(n_rx, n_tx);
  for (std::size_t k = 0; k < n_sc; ++k) {
    for (Eigen::Index i = 0; i < n_rx; ++i)
      for (Eigen::Index j = 0; j < n_tx; ++j)
        hk(i, j) = h.at(k, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    const Eigen::MatrixXcd gram = hk.adjoint() * hk;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
    const double lmin = eig.eigenvalues().minCoeff();
    const double lmax = eig.eigenvalues().maxCoeff();
    if (!(lmin > 0.0)) {
      cond[k] = kInf;
      for (Eigen::Index s = 0; s < n_tx; ++s) inv[static_cast<std::size_t>(s) * n_sc + k] = kInf;
      continue;
    }
    cond[k] = lmax / lmin;
    const Eigen::MatrixXcd g_inv = gram.ldlt().solve(Eigen::MatrixXcd::Identity(n_tx, n_tx));
    for (Eigen::Index s = 0; s < n_tx; ++s)
      inv[static_cast<std::size_t>(s) * n_sc + k] = g_inv(s, s).real();
  }
}

bool subcarrier_solvable(double cond) { return std::isfinite(cond) && cond <= kSingularConditionCutoff; }

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

double weakest_stream_db(const PostSnr& p) {
  return *std::min_element(p.per_stream_snr_db.begin(), p.per_stream_snr_db.end());
}

}  // namespace

std::size_t MimoConfig::max_streams(std::size_t n_tx, std::size_t n_rx) { return std::min(n_tx, n_rx); }

MimoConfig MimoConfig::full(std::size_t n_tx, std::size_t n_rx) {
  return {n_tx, n_rx, max_streams(n_tx, n_rx)};
}

void MimoConfig::check() const {
  if (n_streams == 0) throw ContractError("at least one stream is required");
  if (n_streams > n_tx) throw ContractError("more streams than transmit elements");
  if (n_streams > n_rx)
    throw UnderdeterminedError("more unknowns (streams) than measurements (receive chains)");
}

CombinedSnr mrc_combine(std::span<const double> per_chain_snr_linear) {
  if (per_chain_snr_linear.empty()) throw ContractError("MRC needs at least one branch");
  double sum = 0.0;
  for (double s : per_chain_snr_linear) {
    if (!(s >= 0.0)) throw ContractError("branch SNR must be >= 0");
    sum += s;
  }
  return {sum, linear_to_db(sum)};
}

Selection selection_combine(std::span<const double> per_chain_rssi_dbm) {
  if (per_chain_rssi_dbm.empty()) throw ContractError("selection needs at least one chain");
  Selection best;
  bool found = false;
  for (std::size_t i = 0; i < per_chain_rssi_dbm.size(); ++i) {
    const double r = per_chain_rssi_dbm[i];
    if (is_no_signal(r)) continue;
    if (!found || r > best.rssi_dbm) {
      best = {i, r};
      found = true;
    }
  }
  if (!found) throw NoLinkError("every receive chain is blocked");
  return best;
}

std::vector<double> zf_post_snr_linear(const simd::PlanarChannel& h, double tx_power_per_stream_mw,
                                       double noise_per_chain_mw, std::vector<double>* condition) {
  const std::size_t n_sc = h.n_sc();
  const std::size_t n_streams = h.n_tx();
  if (n_streams == 0) throw ContractError("channel has no transmit columns");
  if (h.n_rx() < n_streams)
    throw UnderdeterminedError("more unknowns (streams) than measurements (receive chains)");
  if (!(noise_per_chain_mw > 0.0)) throw ContractError("noise power must be > 0");

  std::vector<double> inv(n_streams * n_sc);
  std::vector<double> cond(n_sc);
  const simd::Kernels& kern = simd::active_kernels();
  if (n_streams == 1) {
    kern.gram_inverse_1(h, inv, cond);
  } else if (n_streams == 2) {
    kern.gram_inverse_2(h, std::span(inv).first(n_sc), std::span(inv).subspan(n_sc), cond);
  } else {
    gram_inverse_generic(h, inv, cond);
  }

  std::vector<double> out(inv.size(), 0.0);
  for (std::size_t s = 0; s < n_streams; ++s) {
    for (std::size_t k = 0; k < n_sc; ++k) {
      if (!subcarrier_solvable(cond[k])) continue;
      out[s * n_sc + k] = tx_power_per_stream_mw / (noise_per_chain_mw * inv[s * n_sc + k]);
    }
  }
  if (condition != nullptr) *condition = std::move(cond);
  return out;
}

PostSnr zf_decode(const simd::PlanarChannel& h, double tx_power_per_stream_mw,
                  double noise_per_chain_mw) {
  std::vector<double> cond;
  const std::vector<double> snr =
      zf_post_snr_linear(h, tx_power_per_stream_mw, noise_per_chain_mw, &cond);
  const std::size_t n_sc = h.n_sc();
  const std::size_t n_streams = h.n_tx();

  PostSnr out;
  double rx_mw = 0.0;
  for (std::size_t i = 0; i < h.n_rx(); ++i)
    for (std::size_t j = 0; j < n_streams; ++j)
      for (std::size_t k = 0; k < n_sc; ++k) rx_mw += std::norm(h.at(k, i, j));
  rx_mw = n_sc > 0 ? rx_mw / static_cast<double>(n_sc) * tx_power_per_stream_mw : 0.0;
  out.combined_rssi_dbm = mw_to_dbm(rx_mw);
  out.condition_number = median(cond);

  const std::size_t bad = static_cast<std::size_t>(
      std::count_if(cond.begin(), cond.end(), [](double c) { return !subcarrier_solvable(c); }));
  out.solvable = n_sc > 0 && !(2 * bad > n_sc);
  out.per_stream_snr_db.assign(n_streams, kNoSignalDb);
  if (!out.solvable) return out;

  std::vector<double> db;
  db.reserve(n_sc);
  for (std::size_t s = 0; s < n_streams; ++s) {
    db.clear();
    for (std::size_t k = 0; k < n_sc; ++k)
      if (subcarrier_solvable(cond[k])) db.push_back(linear_to_db(snr[s * n_sc + k]));
    out.per_stream_snr_db[s] = effective_snr_db(db);
  }
  return out;
}

PostSnr zf_decode(const ChannelMatrix& cm, double tx_power_per_stream_mw, double noise_per_chain_mw) {
  return zf_decode(simd::to_planar(cm), tx_power_per_stream_mw, noise_per_chain_mw);
}

PostSnr zf_decode(const ChannelMatrix& cm, const MimoConfig& config, double tx_power_per_stream_mw,
                  double noise_per_chain_mw) {
  if (config.n_tx != cm.n_tx() || config.n_rx != cm.n_rx())
    throw ContractError("MIMO config does not match the channel dimensions");
  config.check();
  return zf_decode(cm.leading_columns(config.n_streams), tx_power_per_stream_mw, noise_per_chain_mw);
}

double extra_diversity_gain(const simd::PlanarChannel& h, std::size_t n_streams) {
  if (n_streams == 0 || n_streams > h.n_tx()) throw ContractError("stream count out of range");
  if (h.n_rx() <= n_streams)
    throw ContractError("diversity gain needs more receive chains than streams");

  std::vector<std::size_t> cols(n_streams);
  std::iota(cols.begin(), cols.end(), std::size_t{0});
  std::vector<std::size_t> all_rows(h.n_rx());
  std::iota(all_rows.begin(), all_rows.end(), std::size_t{0});

  const double full = weakest_stream_db(zf_decode(h.subset(all_rows, cols), 1.0, 1.0));

  // Enumerate every n_streams-row subset via a selection mask.
  double best = kNoSignalDb;
  std::vector<bool> mask(h.n_rx(), false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(n_streams), true);
  do {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < mask.size(); ++i)
      if (mask[i]) rows.push_back(i);
    best = std::max(best, weakest_stream_db(zf_decode(h.subset(rows, cols), 1.0, 1.0)));
  } while (std::prev_permutation(mask.begin(), mask.end()));

  if (is_no_signal(full)) return is_no_signal(best) ? 0.0 : kNoSignalDb;
  if (is_no_signal(best)) return kInf;
  return full - best;
}

double extra_diversity_gain(const ChannelMatrix& cm, std::size_t n_streams) {
  return extra_diversity_gain(simd::to_planar(cm), n_streams);
}

}  // namespace vlcsim
