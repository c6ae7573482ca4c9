#include "mrmc/metrics.hpp"

namespace mrmc {

double mi_ul(const CovarianceBundle& b, int i, int k) {
  return logdet2_ratio(b.R_sig_u[i][k], b.R_in_u[i][k]);
}

double mi_dl(const CovarianceBundle& b, int j, int k) {
  return logdet2_ratio(b.R_sig_d[j][k], b.R_in_d[j][k]);
}

double mi_radar(const CovarianceBundle& b, int n_r) {
  return logdet2_ratio(b.R_t[n_r], b.R_in_r[n_r]);
}

double mi_ul_filtered(const DesignState& st, const CovarianceBundle& b, int i, int k) {
  return mi_filtered_bits(st.U_u[i][k], b.R_sig_u[i][k], b.R_in_u[i][k]);
}

double mi_dl_filtered(const DesignState& st, const CovarianceBundle& b, int j, int k) {
  return mi_filtered_bits(st.U_d[j][k], b.R_sig_d[j][k], b.R_in_d[j][k]);
}

double mi_radar_filtered(const DesignState& st, const CovarianceBundle& b, int n_r) {
  return mi_filtered_bits(st.U_r[n_r], b.R_t[n_r], b.R_in_r[n_r]);
}

MiBreakdown mutual_information(const SystemConfig& cfg, const CovarianceBundle& b) {
  MiBreakdown m;
  m.I_r.resize(cfg.N_r);
  for (int n = 0; n < cfg.N_r; ++n) {
    m.I_r[n] = mi_radar(b, n);
    m.I_cwsm += cfg.alpha_r[n] * m.I_r[n];
  }
  m.I_u.assign(cfg.I, std::vector<double>(cfg.K));
  m.I_d.assign(cfg.J, std::vector<double>(cfg.K));
  for (int k = 0; k < cfg.K; ++k) {
    for (int i = 0; i < cfg.I; ++i) {
      m.I_u[i][k] = mi_ul(b, i, k);
      m.I_fd += cfg.alpha_u[i] * m.I_u[i][k];
    }
    for (int j = 0; j < cfg.J; ++j) {
      m.I_d[j][k] = mi_dl(b, j, k);
      m.I_fd += cfg.alpha_d[j] * m.I_d[j][k];
    }
  }
  m.I_cwsm += m.I_fd;
  return m;
}

double cwsm(const SystemConfig& cfg, const CovarianceBundle& b) {
  return mutual_information(cfg, b).I_cwsm;
}

namespace {
// E = I - U G - G^H U^H + U R_y U^H with G = H P the effective stream matrix.
CMat comms_mse(const CMat& u, const CMat& g, const CMat& r_sig, const CMat& r_in) {
  int d = (int)u.rows();
  CMat ug = u * g;
  return hermitize(CMat(CMat::Identity(d, d) - ug - ug.adjoint() + u * (r_sig + r_in) * u.adjoint()));
}
}  // namespace

CMat mse_ul(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
            const CovarianceBundle& b, int i, int k) {
  (void)cfg;
  return comms_mse(st.U_u[i][k], ch.H_iB[i] * st.P_u[i][k], b.R_sig_u[i][k], b.R_in_u[i][k]);
}

CMat mse_dl(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
            const CovarianceBundle& b, int j, int k) {
  (void)cfg;
  return comms_mse(st.U_d[j][k], ch.H_Bj[j] * st.P_d[j][k], b.R_sig_d[j][k], b.R_in_d[j][k]);
}

CMat mse_radar(const SystemConfig& cfg, const DesignState& st, const CovarianceBundle& b, int n_r) {
  (void)cfg;
  const CMat& sig = b.target[n_r].Sigma_t;
  const CMat& u = st.U_r[n_r];
  CMat uss = u * b.S_t * sig;  // U S_t Sigma_t
  CMat ry = b.R_t[n_r] + b.R_in_r[n_r];
  return hermitize(CMat(sig - uss - uss.adjoint() + u * ry * u.adjoint()));
}

CMat mmse_ul(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
             const CovarianceBundle& b, int i, int k) {
  CMat g = ch.H_iB[i] * st.P_u[i][k];
  CMat ry_inv = inv_hpd(b.R_sig_u[i][k] + b.R_in_u[i][k]);
  int d = cfg.D_u[i];
  return hermitize(CMat(CMat::Identity(d, d) - g.adjoint() * ry_inv * g));
}

CMat mmse_dl(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
             const CovarianceBundle& b, int j, int k) {
  CMat g = ch.H_Bj[j] * st.P_d[j][k];
  CMat ry_inv = inv_hpd(b.R_sig_d[j][k] + b.R_in_d[j][k]);
  int d = cfg.D_d[j];
  return hermitize(CMat(CMat::Identity(d, d) - g.adjoint() * ry_inv * g));
}

CMat mmse_radar(const SystemConfig& cfg, const DesignState& st, const CovarianceBundle& b,
                int n_r) {
  (void)cfg;
  (void)st;
  const CMat& sig = b.target[n_r].Sigma_t;
  CMat ry_inv = inv_hpd(b.R_t[n_r] + b.R_in_r[n_r]);
  CMat ss = b.S_t * sig;  // K x K*M
  return hermitize(CMat(sig - ss.adjoint() * ry_inv * ss));
}

void update_mmse_filters(const SystemConfig& cfg, const ChannelSet& ch, DesignState& st,
                         const CovarianceBundle& b) {
  for (int k = 0; k < cfg.K; ++k) {
    for (int i = 0; i < cfg.I; ++i) {
      CMat g = ch.H_iB[i] * st.P_u[i][k];
      st.U_u[i][k] = g.adjoint() * inv_hpd(b.R_sig_u[i][k] + b.R_in_u[i][k]);
    }
    for (int j = 0; j < cfg.J; ++j) {
      CMat g = ch.H_Bj[j] * st.P_d[j][k];
      st.U_d[j][k] = g.adjoint() * inv_hpd(b.R_sig_d[j][k] + b.R_in_d[j][k]);
    }
  }
  for (int n = 0; n < cfg.N_r; ++n) {
    CMat ry_inv = inv_hpd(b.R_t[n] + b.R_in_r[n]);
    st.U_r[n] = b.target[n].Sigma_t * b.S_t.adjoint() * ry_inv;
  }
}

void update_optimal_weights(const SystemConfig& cfg, const ChannelSet& ch, DesignState& st,
                            const CovarianceBundle& b) {
  for (int k = 0; k < cfg.K; ++k) {
    for (int i = 0; i < cfg.I; ++i) st.W_u[i][k] = inv_hpd(mmse_ul(cfg, ch, st, b, i, k));
    for (int j = 0; j < cfg.J; ++j) st.W_d[j][k] = inv_hpd(mmse_dl(cfg, ch, st, b, j, k));
  }
  for (int n = 0; n < cfg.N_r; ++n)
    st.W_r[n] = pinv_psd(mmse_radar(cfg, st, b, n), cfg.M());
}

double rate_ul_mmse(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                    const CovarianceBundle& b, int i, int k) {
  return -logdet2_pd(mmse_ul(cfg, ch, st, b, i, k));
}

double rate_dl_mmse(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                    const CovarianceBundle& b, int j, int k) {
  return -logdet2_pd(mmse_dl(cfg, ch, st, b, j, k));
}

double rate_radar_mmse(const SystemConfig& cfg, const DesignState& st, const CovarianceBundle& b,
                       int n_r) {
  // rank-M pseudo-determinant ratio: log2 pdet(Sigma_t) - log2 pdet(E*)
  return b.target[n_r].logpdet2 - logpdet2_psd(mmse_radar(cfg, st, b, n_r), cfg.M());
}

double weighted_sum_mse(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                        const CovarianceBundle& b) {
  double xi = 0.0;
  for (int n = 0; n < cfg.N_r; ++n)
    xi += cfg.alpha_r[n] * (st.W_r[n] * mse_radar(cfg, st, b, n)).real().trace();
  for (int k = 0; k < cfg.K; ++k) {
    for (int i = 0; i < cfg.I; ++i)
      xi += cfg.alpha_u[i] * (st.W_u[i][k] * mse_ul(cfg, ch, st, b, i, k)).real().trace();
    for (int j = 0; j < cfg.J; ++j)
      xi += cfg.alpha_d[j] * (st.W_d[j][k] * mse_dl(cfg, ch, st, b, j, k)).real().trace();
  }
  return xi;
}

double xi_offset(const SystemConfig& cfg, const DesignState& st, const CovarianceBundle& b) {
  double off = 0.0;
  int M = cfg.M();
  for (int n = 0; n < cfg.N_r; ++n)
    off += cfg.alpha_r[n] * (logpdet2_psd(st.W_r[n], M) + M + b.target[n].logpdet2);
  for (int k = 0; k < cfg.K; ++k) {
    for (int i = 0; i < cfg.I; ++i)
      off += cfg.alpha_u[i] * (logdet2_pd(st.W_u[i][k]) + cfg.D_u[i]);
    for (int j = 0; j < cfg.J; ++j)
      off += cfg.alpha_d[j] * (logdet2_pd(st.W_d[j][k]) + cfg.D_d[j]);
  }
  return off;
}

double xi_prime(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                const CovarianceBundle& b) {
  return weighted_sum_mse(cfg, ch, st, b) - xi_offset(cfg, st, b);
}

double min_rate_slack(const SystemConfig& cfg, const CovarianceBundle& b, double r_ul,
                      double r_dl) {
  double slack = std::numeric_limits<double>::infinity();
  for (int k = 0; k < cfg.K; ++k) {
    for (int i = 0; i < cfg.I; ++i) slack = std::min(slack, mi_ul(b, i, k) - r_ul);
    for (int j = 0; j < cfg.J; ++j) slack = std::min(slack, mi_dl(b, j, k) - r_dl);
  }
  return slack;
}

double ul_power(const DesignState& st, int i, int k) { return st.P_u[i][k].squaredNorm(); }

double dl_frame_power(const DesignState& st, const SystemConfig& cfg, int k) {
  double p = 0.0;
  for (int j = 0; j < cfg.J; ++j) p += st.P_d[j][k].squaredNorm();
  return p;
}

double radar_power(const DesignState& st) { return st.A.squaredNorm(); }

}  // namespace mrmc
