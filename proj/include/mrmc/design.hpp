#pragma once
// The optimization triple (precoders, radar code, receive filters) plus MSE
// weights and the persistent Lagrange duals.

#include <vector>

#include "mrmc/config.hpp"
#include "mrmc/linalg.hpp"

namespace mrmc {

struct DesignState {
  std::vector<std::vector<CMat>> P_u;  // [i][k] N_u[i] x D_u[i]
  std::vector<std::vector<CMat>> P_d;  // [j][k] M_c x D_d[j]
  CMat A;                              // K x M_r, rows a^T[k], columns a_{m_r}
  std::vector<std::vector<CMat>> U_u;  // [i][k] D_u[i] x N_c
  std::vector<std::vector<CMat>> U_d;  // [j][k] D_d[j] x N_d[j]
  std::vector<CMat> U_r;               // [n_r] K*M x K
  std::vector<std::vector<CMat>> W_u;  // [i][k]
  std::vector<std::vector<CMat>> W_d;  // [j][k]
  std::vector<CMat> W_r;               // [n_r] K*M x K*M
  // persistent duals (most recent best-tracked values)
  std::vector<std::vector<double>> lambda_u;  // [i][k]
  std::vector<double> lambda_d;               // [k]
  std::vector<std::vector<double>> mu_u;      // [i][k]
  std::vector<std::vector<double>> mu_d;      // [j][k]

  CVec a_row(int k) const { return A.row(k).transpose(); }

  static DesignState zeros(const SystemConfig& cfg) {
    DesignState st;
    int KM = cfg.K * cfg.M();
    st.P_u.resize(cfg.I);
    st.U_u.resize(cfg.I);
    st.W_u.resize(cfg.I);
    for (int i = 0; i < cfg.I; ++i) {
      st.P_u[i].assign(cfg.K, CMat::Zero(cfg.N_u[i], cfg.D_u[i]));
      st.U_u[i].assign(cfg.K, CMat::Zero(cfg.D_u[i], cfg.N_c));
      st.W_u[i].assign(cfg.K, CMat::Identity(cfg.D_u[i], cfg.D_u[i]));
    }
    st.P_d.resize(cfg.J);
    st.U_d.resize(cfg.J);
    st.W_d.resize(cfg.J);
    for (int j = 0; j < cfg.J; ++j) {
      st.P_d[j].assign(cfg.K, CMat::Zero(cfg.M_c, cfg.D_d[j]));
      st.U_d[j].assign(cfg.K, CMat::Zero(cfg.D_d[j], cfg.N_d[j]));
      st.W_d[j].assign(cfg.K, CMat::Identity(cfg.D_d[j], cfg.D_d[j]));
    }
    st.A = CMat::Zero(cfg.K, cfg.M_r);
    st.U_r.assign(cfg.N_r, CMat::Zero(KM, cfg.K));
    st.W_r.assign(cfg.N_r, CMat::Identity(KM, KM));
    st.lambda_u.assign(cfg.I, std::vector<double>(cfg.K, 0.0));
    st.lambda_d.assign(cfg.K, 0.0);
    st.mu_u.assign(cfg.I, std::vector<double>(cfg.K, 0.0));
    st.mu_d.assign(cfg.J, std::vector<double>(cfg.K, 0.0));
    return st;
  }
};

}  // namespace mrmc
