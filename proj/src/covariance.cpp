#include "mrmc/covariance.hpp"

namespace mrmc {

CMat sel_J_h(const SystemConfig& cfg, int m) {
  int M = cfg.M();
  CMat j = CMat::Zero(cfg.K * M, M);
  j.block(m * M, 0, M, M) = CMat::Identity(M, M);
  return j;
}

CMat sel_J_r(const SystemConfig& cfg) {
  CMat j = CMat::Zero(cfg.M(), cfg.M_r);
  j.topRows(cfg.M_r) = CMat::Identity(cfg.M_r, cfg.M_r);
  return j;
}

CMat sel_J_B(const SystemConfig& cfg) {
  CMat j = CMat::Zero(cfg.M(), cfg.M_c);
  j.bottomRows(cfg.M_c) = CMat::Identity(cfg.M_c, cfg.M_c);
  return j;
}

CMat sigma_rt_block(const SystemConfig& cfg, const ChannelSet& ch, int n_r, int m, int k) {
  CMat b = CMat::Zero(cfg.M_r, cfg.M_r);
  for (int p = 0; p < cfg.M_r; ++p) {
    double ph = 2.0 * M_PI * ch.f_rt[p][n_r] * (m - k);
    b(p, p) = cfg.sigma2_rt * cxd(std::cos(ph), std::sin(ph));
  }
  return b;
}

cxd sigma_bt_entry(const SystemConfig& cfg, const ChannelSet& ch, int n_r, int m, int k) {
  double ph = 2.0 * M_PI * ch.f_Bt[n_r] * (m - k);
  return cfg.sigma2_Bt * cxd(std::cos(ph), std::sin(ph));
}

CVec s_Bt(const SystemConfig& cfg, const DesignState& st, const SymbolSet& sym, int k) {
  CVec v = CVec::Zero(cfg.M_c);
  for (int j = 0; j < cfg.J; ++j) v += st.P_d[j][k] * sym.d_d[j][k].col(0);
  return v;
}

CVec s_Bm(const SystemConfig& cfg, const DesignState& st, const SymbolSet& sym, int k) {
  CVec v = CVec::Zero(cfg.M_c);
  int slot = cfg.n_t - cfg.n_Bm;
  for (int j = 0; j < cfg.J; ++j) v += st.P_d[j][k] * sym.d_d[j][k].col(slot);
  return v;
}

std::vector<TargetModel> build_target_statistics(const SystemConfig& cfg, const ChannelSet& ch) {
  int M = cfg.M(), K = cfg.K;
  std::vector<TargetModel> out(cfg.N_r);
  for (int n_r = 0; n_r < cfg.N_r; ++n_r) {
    CMat s = CMat::Zero(K * M, K * M);
    for (int m = 0; m < K; ++m)
      for (int l = 0; l < K; ++l) {
        // per-path rank-1 Doppler correlation across PRIs; radar slots first
        for (int p = 0; p < cfg.M_r; ++p) {
          double ph = 2.0 * M_PI * ch.f_rt[p][n_r] * (m - l);
          s(m * M + p, l * M + p) = cfg.sigma2_rt * cxd(std::cos(ph), std::sin(ph));
        }
        cxd bt = sigma_bt_entry(cfg, ch, n_r, m, l);
        for (int c = 0; c < cfg.M_c; ++c) s(m * M + cfg.M_r + c, l * M + cfg.M_r + c) = bt;
      }
    out[n_r].Sigma_t = s;
    out[n_r].logpdet2 = logpdet2_psd(s, M);
  }
  return out;
}

CMat build_S_t(const SystemConfig& cfg, const DesignState& st, const SymbolSet& sym) {
  int M = cfg.M();
  CMat s = CMat::Zero(cfg.K, cfg.K * M);
  for (int k = 0; k < cfg.K; ++k) {
    s.block(k, k * M, 1, cfg.M_r) = st.A.row(k);
    s.block(k, k * M + cfg.M_r, 1, cfg.M_c) = s_Bt(cfg, st, sym, k).transpose();
  }
  return s;
}

std::vector<CMat> build_radar_interference(const SystemConfig& cfg, const ChannelSet& ch,
                                           const DesignState& st, const SymbolSet& sym) {
  (void)ch;
  int K = cfg.K;
  // clutter: R_c(m,l) = sigma2_c a^T[m] a*[l]; direct paths constant over the
  // CPI so their blocks are fully correlated quadratic forms
  CMat r = CMat::Zero(K, K);
  std::vector<CVec> sbm(K), su;
  for (int k = 0; k < K; ++k) sbm[k] = s_Bm(cfg, st, sym, k);
  int ul_slot = cfg.n_t - cfg.n_u;
  std::vector<std::vector<CVec>> s_ul(cfg.I, std::vector<CVec>(K));
  for (int i = 0; i < cfg.I; ++i)
    for (int k = 0; k < K; ++k) s_ul[i][k] = st.P_u[i][k] * sym.d_u[i][k].col(ul_slot);
  for (int m = 0; m < K; ++m)
    for (int l = 0; l < K; ++l) {
      cxd v = cfg.sigma2_c * (st.A.row(m) * st.A.row(l).adjoint())(0, 0);
      v += cfg.sigma2_Bm * (sbm[l].adjoint() * sbm[m])(0, 0);
      for (int i = 0; i < cfg.I; ++i) v += cfg.sigma2_U * (s_ul[i][l].adjoint() * s_ul[i][m])(0, 0);
      r(m, l) = v;
    }
  r += cfg.sigma2_r * CMat::Identity(K, K);
  // identical for each radar Rx under shared variances
  return std::vector<CMat>(cfg.N_r, hermitize(r));
}

void build_ul_covariance(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                         int k, std::vector<CMat>& sig, std::vector<CMat>& in) {
  sig.assign(cfg.I, CMat());
  in.assign(cfg.I, CMat());
  std::vector<CMat> ul_terms(cfg.I);
  for (int q = 0; q < cfg.I; ++q) {
    CMat hp = ch.H_iB[q] * st.P_u[q][k];
    ul_terms[q] = hp * hp.adjoint();
  }
  CMat common = CMat::Zero(cfg.N_c, cfg.N_c);
  for (int j = 0; j < cfg.J; ++j) {
    CMat hp = ch.H_BB * st.P_d[j][k];
    common += hp * hp.adjoint();
  }
  CVec ha = ch.H_rB * st.a_row(k);
  common += ha * ha.adjoint();
  common += cfg.sigma2_B * CMat::Identity(cfg.N_c, cfg.N_c);
  for (int i = 0; i < cfg.I; ++i) {
    CMat r_in = common;
    for (int q = 0; q < cfg.I; ++q)
      if (q != i) r_in += ul_terms[q];
    sig[i] = hermitize(ul_terms[i]);
    in[i] = hermitize(r_in);
  }
}

void build_dl_covariance(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                         int k, std::vector<CMat>& sig, std::vector<CMat>& in) {
  sig.assign(cfg.J, CMat());
  in.assign(cfg.J, CMat());
  for (int j = 0; j < cfg.J; ++j) {
    int n = cfg.N_d[j];
    CMat own = ch.H_Bj[j] * st.P_d[j][k];
    CMat r_in = cfg.sigma2_d * CMat::Identity(n, n);
    for (int g = 0; g < cfg.J; ++g) {
      if (g == j) continue;
      CMat hp = ch.H_Bj[j] * st.P_d[g][k];
      r_in += hp * hp.adjoint();
    }
    for (int i = 0; i < cfg.I; ++i) {
      CMat hp = ch.H_ij[i][j] * st.P_u[i][k];
      r_in += hp * hp.adjoint();
    }
    CVec ha = ch.H_rj[j] * st.a_row(k);
    r_in += ha * ha.adjoint();
    sig[j] = hermitize(CMat(own * own.adjoint()));
    in[j] = hermitize(r_in);
  }
}

CovarianceBundle build_bundle(const SystemConfig& cfg, const ChannelSet& ch,
                              const DesignState& st, const SymbolSet& sym,
                              const std::vector<TargetModel>* cached_target) {
  CovarianceBundle b;
  b.target = cached_target ? *cached_target : build_target_statistics(cfg, ch);
  b.S_t = build_S_t(cfg, st, sym);
  b.R_t.resize(cfg.N_r);
  for (int n_r = 0; n_r < cfg.N_r; ++n_r)
    b.R_t[n_r] = hermitize(CMat(b.S_t * b.target[n_r].Sigma_t * b.S_t.adjoint()));
  b.R_in_r = build_radar_interference(cfg, ch, st, sym);
  b.R_sig_u.resize(cfg.I);
  b.R_in_u.resize(cfg.I);
  b.R_sig_d.resize(cfg.J);
  b.R_in_d.resize(cfg.J);
  for (int i = 0; i < cfg.I; ++i) {
    b.R_sig_u[i].resize(cfg.K);
    b.R_in_u[i].resize(cfg.K);
  }
  for (int j = 0; j < cfg.J; ++j) {
    b.R_sig_d[j].resize(cfg.K);
    b.R_in_d[j].resize(cfg.K);
  }
  for (int k = 0; k < cfg.K; ++k) {
    std::vector<CMat> su, iu, sd, id;
    build_ul_covariance(cfg, ch, st, k, su, iu);
    build_dl_covariance(cfg, ch, st, k, sd, id);
    for (int i = 0; i < cfg.I; ++i) {
      b.R_sig_u[i][k] = su[i];
      b.R_in_u[i][k] = iu[i];
    }
    for (int j = 0; j < cfg.J; ++j) {
      b.R_sig_d[j][k] = sd[j];
      b.R_in_d[j][k] = id[j];
    }
  }
  return b;
}

}  // namespace mrmc
