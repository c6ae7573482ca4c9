#pragma once
// Stacked target model (S_t, Sigma_t, selection matrices) and every signal /
// interference-plus-noise covariance consumed by the metrics and solvers.

#include <vector>

#include "mrmc/channels.hpp"
#include "mrmc/config.hpp"
#include "mrmc/design.hpp"

namespace mrmc {

// Second-order target statistics of one radar Rx. Sigma_t depends only on the
// channel draw (variances + Dopplers), never on the design, so it is cached
// per realization together with its log2 pseudo-determinant at rank M.
struct TargetModel {
  CMat Sigma_t;       // K*M x K*M, Hermitian PSD, structural rank M
  double logpdet2;    // log2 pseudo-det over the top-M eigenvalues
};

struct CovarianceBundle {
  std::vector<TargetModel> target;  // [n_r]
  CMat S_t;                         // K x K*M (identical across radar Rxs)
  std::vector<CMat> R_t;            // [n_r] K x K = S_t Sigma_t S_t^H
  std::vector<CMat> R_in_r;         // [n_r] K x K
  std::vector<std::vector<CMat>> R_sig_u, R_in_u;  // [i][k] N_c x N_c
  std::vector<std::vector<CMat>> R_sig_d, R_in_d;  // [j][k] N_d[j] x N_d[j]
};

// 0/1 selection matrices of the stacked target channel (per-PRI blocks of
// size M = M_r + M_c; radar slots first, BS slots after).
CMat sel_J_h(const SystemConfig& cfg, int m);  // K*M x M
CMat sel_J_r(const SystemConfig& cfg);         // M x M_r
CMat sel_J_B(const SystemConfig& cfg);         // M x M_c

// Cross-PRI covariance blocks of the target/clutter/direct-path gains.
CMat sigma_rt_block(const SystemConfig& cfg, const ChannelSet& ch, int n_r, int m, int k);
cxd sigma_bt_entry(const SystemConfig& cfg, const ChannelSet& ch, int n_r, int m, int k);

// DL symbol vector reflected from the target in PRI k (slot 0) and the
// directly received one (slot n_t - n_Bm).
CVec s_Bt(const SystemConfig& cfg, const DesignState& st, const SymbolSet& sym, int k);
CVec s_Bm(const SystemConfig& cfg, const DesignState& st, const SymbolSet& sym, int k);

std::vector<TargetModel> build_target_statistics(const SystemConfig& cfg, const ChannelSet& ch);
CMat build_S_t(const SystemConfig& cfg, const DesignState& st, const SymbolSet& sym);
std::vector<CMat> build_radar_interference(const SystemConfig& cfg, const ChannelSet& ch,
                                           const DesignState& st, const SymbolSet& sym);
// Per-frame UL/DL covariances; sig = desired-signal part, in = rest + noise.
void build_ul_covariance(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                         int k, std::vector<CMat>& sig, std::vector<CMat>& in);
void build_dl_covariance(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                         int k, std::vector<CMat>& sig, std::vector<CMat>& in);

CovarianceBundle build_bundle(const SystemConfig& cfg, const ChannelSet& ch,
                              const DesignState& st, const SymbolSet& sym,
                              const std::vector<TargetModel>* cached_target = nullptr);

}  // namespace mrmc
