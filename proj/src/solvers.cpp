#include "mrmc/solvers.hpp"

#include <algorithm>
#include <stdexcept>

namespace mrmc {

GradientCache build_gradient_cache(const SystemConfig& cfg, const DesignState& st,
                                   const CovarianceBundle& b) {
  GradientCache c;
  c.xi_UL.assign(cfg.K, CMat::Zero(cfg.N_c, cfg.N_c));
  c.xi_d.resize(cfg.J);
  for (int k = 0; k < cfg.K; ++k)
    for (int i = 0; i < cfg.I; ++i)
      c.xi_UL[k] += cfg.alpha_u[i] * st.U_u[i][k].adjoint() * st.W_u[i][k] * st.U_u[i][k];
  for (int j = 0; j < cfg.J; ++j) {
    c.xi_d[j].resize(cfg.K);
    for (int k = 0; k < cfg.K; ++k)
      c.xi_d[j][k] = cfg.alpha_d[j] * st.U_d[j][k].adjoint() * st.W_d[j][k] * st.U_d[j][k];
  }
  int M = cfg.M();
  c.xi_r.resize(cfg.N_r);
  c.t_lin.resize(cfg.N_r);
  for (int n = 0; n < cfg.N_r; ++n) {
    c.xi_r[n] = cfg.alpha_r[n] * st.U_r[n].adjoint() * st.W_r[n] * st.U_r[n];
    CMat t = cfg.alpha_r[n] * b.target[n].Sigma_t * st.W_r[n] * st.U_r[n];  // K*M x K
    c.t_lin[n].resize(cfg.K);
    for (int k = 0; k < cfg.K; ++k) c.t_lin[n][k] = t.col(k).segment(k * M, M);
  }
  return c;
}

namespace {

// Comms quadratic coefficient of the UL block: H_iB^H xi_UL H_iB + cross-DL.
CMat a0_ul(const SystemConfig& cfg, const ChannelSet& ch, const GradientCache& c, int i, int k) {
  CMat a = ch.H_iB[i].adjoint() * c.xi_UL[k] * ch.H_iB[i];
  for (int g = 0; g < cfg.J; ++g)
    a += ch.H_ij[i][g].adjoint() * c.xi_d[g][k] * ch.H_ij[i][g];
  return a;
}

CMat a0_dl(const SystemConfig& cfg, const ChannelSet& ch, const GradientCache& c, int k) {
  CMat a = ch.H_BB.adjoint() * c.xi_UL[k] * ch.H_BB;
  for (int g = 0; g < cfg.J; ++g)
    a += ch.H_Bj[g].adjoint() * c.xi_d[g][k] * ch.H_Bj[g];
  return a;
}

CMat a0_radar(const SystemConfig& cfg, const ChannelSet& ch, const GradientCache& c, int k) {
  CMat a = ch.H_rB.adjoint() * c.xi_UL[k] * ch.H_rB;
  for (int g = 0; g < cfg.J; ++g)
    a += ch.H_rj[g].adjoint() * c.xi_d[g][k] * ch.H_rj[g];
  return a;
}

double xi_diag(const GradientCache& c, const SystemConfig& cfg, int k) {
  double s = 0.0;
  for (int n = 0; n < cfg.N_r; ++n) s += c.xi_r[n](k, k).real();
  return s;
}

// s_Bt / s_Bm of PRI m with user j's precoder replaced by `p`.
CVec sbt_with(const SystemConfig& cfg, const DesignState& st, const SymbolSet& sym, int j, int k,
              const CMat& p, int slot) {
  CVec v = CVec::Zero(cfg.M_c);
  for (int g = 0; g < cfg.J; ++g) {
    const CMat& pg = (g == j) ? p : st.P_d[g][k];
    v += pg * sym.d_d[g][k].col(slot);
  }
  return v;
}

}  // namespace

CMat grad_xi_pu(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                const SymbolSet& sym, const GradientCache& c, int i, int k) {
  int slot = cfg.n_t - cfg.n_u;
  CMat g = 2.0 * a0_ul(cfg, ch, c, i, k) * st.P_u[i][k];
  g -= 2.0 * cfg.alpha_u[i] * ch.H_iB[i].adjoint() * st.U_u[i][k].adjoint() * st.W_u[i][k];
  CVec dk = sym.d_u[i][k].col(slot);
  for (int n = 0; n < cfg.N_r; ++n)
    for (int m = 0; m < cfg.K; ++m) {
      CVec sm = st.P_u[i][m] * sym.d_u[i][m].col(slot);
      g += 2.0 * cfg.sigma2_U * c.xi_r[n](k, m) * sm * dk.adjoint();
    }
  return g;
}

CMat grad_xi_pd(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                const SymbolSet& sym, const GradientCache& c, int j, int k) {
  int slot_m = cfg.n_t - cfg.n_Bm;
  CMat g = 2.0 * a0_dl(cfg, ch, c, k) * st.P_d[j][k];
  g -= 2.0 * cfg.alpha_d[j] * ch.H_Bj[j].adjoint() * st.U_d[j][k].adjoint() * st.W_d[j][k];
  CVec d0 = sym.d_d[j][k].col(0);
  CVec dm = sym.d_d[j][k].col(slot_m);
  for (int n = 0; n < cfg.N_r; ++n) {
    for (int m = 0; m < cfg.K; ++m) {
      CVec sbt = s_Bt(cfg, st, sym, m);
      CVec sbm = s_Bm(cfg, st, sym, m);
      g += 2.0 * c.xi_r[n](k, m) * sigma_bt_entry(cfg, ch, n, m, k) * sbt * d0.adjoint();
      g += 2.0 * cfg.sigma2_Bm * c.xi_r[n](k, m) * sbm * dm.adjoint();
    }
    g -= 2.0 * c.t_lin[n][k].tail(cfg.M_c).conjugate() * d0.adjoint();
  }
  return g;
}

CVec grad_xi_a(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
               const SymbolSet& sym, const GradientCache& c, int k) {
  (void)sym;
  CVec g = 2.0 * a0_radar(cfg, ch, c, k) * st.a_row(k);
  for (int n = 0; n < cfg.N_r; ++n) {
    for (int m = 0; m < cfg.K; ++m) {
      CMat sig = sigma_rt_block(cfg, ch, n, m, k);
      sig += cfg.sigma2_c * CMat::Identity(cfg.M_r, cfg.M_r);
      g += 2.0 * c.xi_r[n](k, m) * sig * st.a_row(m);
    }
    g -= 2.0 * c.t_lin[n][k].head(cfg.M_r).conjugate();
  }
  return g;
}

RateGradients rate_gradients(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                             int k) {
  RateGradients rg;
  std::vector<CMat> su, iu, sd, id;
  build_ul_covariance(cfg, ch, st, k, su, iu);
  build_dl_covariance(cfg, ch, st, k, sd, id);
  const double c2 = 2.0 / LN2;
  std::vector<CMat> ry_u_inv(cfg.I), rin_u_inv(cfg.I), ry_d_inv(cfg.J), rin_d_inv(cfg.J);
  for (int q = 0; q < cfg.I; ++q) {
    ry_u_inv[q] = inv_hpd(su[q] + iu[q]);
    rin_u_inv[q] = inv_hpd(iu[q]);
  }
  for (int g = 0; g < cfg.J; ++g) {
    ry_d_inv[g] = inv_hpd(sd[g] + id[g]);
    rin_d_inv[g] = inv_hpd(id[g]);
  }
  rg.dRu_dPu.assign(cfg.I, std::vector<CMat>(cfg.I));
  rg.dRd_dPu.assign(cfg.J, std::vector<CMat>(cfg.I));
  rg.dRu_dPd.assign(cfg.I, std::vector<CMat>(cfg.J));
  rg.dRd_dPd.assign(cfg.J, std::vector<CMat>(cfg.J));
  rg.dRu_da.resize(cfg.I);
  rg.dRd_da.resize(cfg.J);
  for (int i = 0; i < cfg.I; ++i) {
    for (int q = 0; q < cfg.I; ++q) {
      CMat mid = (q == i) ? ry_u_inv[q] : CMat(ry_u_inv[q] - rin_u_inv[q]);
      rg.dRu_dPu[q][i] = c2 * ch.H_iB[i].adjoint() * mid * ch.H_iB[i] * st.P_u[i][k];
    }
    for (int g = 0; g < cfg.J; ++g)
      rg.dRd_dPu[g][i] =
          c2 * ch.H_ij[i][g].adjoint() * (ry_d_inv[g] - rin_d_inv[g]) * ch.H_ij[i][g] * st.P_u[i][k];
  }
  for (int j = 0; j < cfg.J; ++j) {
    for (int q = 0; q < cfg.I; ++q)
      rg.dRu_dPd[q][j] =
          c2 * ch.H_BB.adjoint() * (ry_u_inv[q] - rin_u_inv[q]) * ch.H_BB * st.P_d[j][k];
    for (int g = 0; g < cfg.J; ++g) {
      CMat mid = (g == j) ? ry_d_inv[g] : CMat(ry_d_inv[g] - rin_d_inv[g]);
      rg.dRd_dPd[g][j] = c2 * ch.H_Bj[g].adjoint() * mid * ch.H_Bj[g] * st.P_d[j][k];
    }
  }
  CVec a = st.a_row(k);
  for (int q = 0; q < cfg.I; ++q)
    rg.dRu_da[q] = c2 * ch.H_rB.adjoint() * (ry_u_inv[q] - rin_u_inv[q]) * ch.H_rB * a;
  for (int g = 0; g < cfg.J; ++g)
    rg.dRd_da[g] = c2 * ch.H_rj[g].adjoint() * (ry_d_inv[g] - rin_d_inv[g]) * ch.H_rj[g] * a;
  return rg;
}

CMat solve_sylvester(const SylvesterSystem& s) {
  int n = (int)s.C.rows(), d = (int)s.C.cols();
  CMat sys = CMat::Zero(n * d, n * d);
  // I_d kron A
  for (int c = 0; c < d; ++c) sys.block(c * n, c * n, n, n) = s.A;
  for (size_t t = 0; t < s.F.size(); ++t) {
    const CMat& b = s.B[t];
    for (int c = 0; c < d; ++c)
      for (int r = 0; r < d; ++r) {
        cxd w = b(r, c);  // (B^T kron F)(c,r) block = B^T(c,r) F = B(r,c) F
        if (w != cxd(0, 0)) sys.block(c * n, r * n, n, n) += w * s.F[t];
      }
  }
  CVec rhs(n * d);
  for (int c = 0; c < d; ++c) rhs.segment(c * n, n) = s.C.col(c);
  Eigen::PartialPivLU<CMat> lu(sys);
  CVec x = lu.solve(rhs);
  CMat p(n, d);
  for (int c = 0; c < d; ++c) p.col(c) = x.segment(c * n, n);
  return p;
}

double sylvester_residual(const SylvesterSystem& s, const CMat& p) {
  CMat r = s.A * p - s.C;
  for (size_t t = 0; t < s.F.size(); ++t) r += s.F[t] * p * s.B[t];
  double denom = s.C.norm();
  return denom == 0.0 ? r.norm() : r.norm() / denom;
}

SylvesterSystem assemble_ul(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                            const SymbolSet& sym, const GradientCache& c, const RateGradients& rg,
                            int i, int k, double lambda, const std::vector<double>& mu_u,
                            const std::vector<double>& mu_d) {
  int slot = cfg.n_t - cfg.n_u;
  SylvesterSystem s;
  s.A = 2.0 * a0_ul(cfg, ch, c, i, k) + 2.0 * lambda * CMat::Identity(cfg.N_u[i], cfg.N_u[i]);
  CVec dk = sym.d_u[i][k].col(slot);
  s.B = {CMat(dk * dk.adjoint())};
  s.F = {CMat(2.0 * cfg.sigma2_U * xi_diag(c, cfg, k) *
              CMat::Identity(cfg.N_u[i], cfg.N_u[i]))};
  CMat rhs =
      2.0 * cfg.alpha_u[i] * ch.H_iB[i].adjoint() * st.U_u[i][k].adjoint() * st.W_u[i][k];
  for (int n = 0; n < cfg.N_r; ++n)
    for (int m = 0; m < cfg.K; ++m) {
      if (m == k) continue;
      CVec sm = st.P_u[i][m] * sym.d_u[i][m].col(slot);
      rhs -= 2.0 * cfg.sigma2_U * c.xi_r[n](k, m) * sm * dk.adjoint();
    }
  for (int q = 0; q < cfg.I; ++q) rhs += mu_u[q] * rg.dRu_dPu[q][i];
  for (int g = 0; g < cfg.J; ++g) rhs += mu_d[g] * rg.dRd_dPu[g][i];
  s.C = rhs;
  return s;
}

SylvesterSystem assemble_dl(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                            const SymbolSet& sym, const GradientCache& c, const RateGradients& rg,
                            int j, int k, double lambda, const std::vector<double>& mu_u,
                            const std::vector<double>& mu_d) {
  int slot_m = cfg.n_t - cfg.n_Bm;
  SylvesterSystem s;
  s.A = 2.0 * a0_dl(cfg, ch, c, k) + 2.0 * lambda * CMat::Identity(cfg.M_c, cfg.M_c);
  CVec d0 = sym.d_d[j][k].col(0);
  CVec dm = sym.d_d[j][k].col(slot_m);
  double xd = xi_diag(c, cfg, k);
  s.B = {CMat(d0 * d0.adjoint()), CMat(dm * dm.adjoint())};
  s.F = {CMat(2.0 * cfg.sigma2_Bt * xd * CMat::Identity(cfg.M_c, cfg.M_c)),
         CMat(2.0 * cfg.sigma2_Bm * xd * CMat::Identity(cfg.M_c, cfg.M_c))};
  CMat rhs = 2.0 * cfg.alpha_d[j] * ch.H_Bj[j].adjoint() * st.U_d[j][k].adjoint() * st.W_d[j][k];
  // same-PRI contribution of the other DL users' precoders (not part of F P B)
  CVec r_bt = CVec::Zero(cfg.M_c), r_bm = CVec::Zero(cfg.M_c);
  for (int g = 0; g < cfg.J; ++g) {
    if (g == j) continue;
    r_bt += st.P_d[g][k] * sym.d_d[g][k].col(0);
    r_bm += st.P_d[g][k] * sym.d_d[g][k].col(slot_m);
  }
  for (int n = 0; n < cfg.N_r; ++n) {
    rhs -= 2.0 * c.xi_r[n](k, k) *
           (cfg.sigma2_Bt * r_bt * d0.adjoint() + cfg.sigma2_Bm * r_bm * dm.adjoint());
    for (int m = 0; m < cfg.K; ++m) {
      if (m == k) continue;
      CVec sbt = s_Bt(cfg, st, sym, m);
      CVec sbm = s_Bm(cfg, st, sym, m);
      rhs -= 2.0 * c.xi_r[n](k, m) * sigma_bt_entry(cfg, ch, n, m, k) * sbt * d0.adjoint();
      rhs -= 2.0 * cfg.sigma2_Bm * c.xi_r[n](k, m) * sbm * dm.adjoint();
    }
    rhs += 2.0 * c.t_lin[n][k].tail(cfg.M_c).conjugate() * d0.adjoint();
  }
  for (int q = 0; q < cfg.I; ++q) rhs += mu_u[q] * rg.dRu_dPd[q][j];
  for (int g = 0; g < cfg.J; ++g) rhs += mu_d[g] * rg.dRd_dPd[g][j];
  s.C = rhs;
  return s;
}

SylvesterSystem assemble_radar(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                               const SymbolSet& sym, const GradientCache& c,
                               const RateGradients& rg, int k, const std::vector<double>& mu_u,
                               const std::vector<double>& mu_d) {
  (void)sym;
  SylvesterSystem s;
  s.A = 2.0 * a0_radar(cfg, ch, c, k);
  s.F = {CMat(2.0 * (cfg.sigma2_rt + cfg.sigma2_c) * xi_diag(c, cfg, k) *
              CMat::Identity(cfg.M_r, cfg.M_r))};
  s.B = {CMat::Identity(1, 1)};
  CVec rhs = CVec::Zero(cfg.M_r);
  for (int n = 0; n < cfg.N_r; ++n) {
    rhs += 2.0 * c.t_lin[n][k].head(cfg.M_r).conjugate();
    for (int m = 0; m < cfg.K; ++m) {
      if (m == k) continue;
      CMat sig = sigma_rt_block(cfg, ch, n, m, k);
      sig += cfg.sigma2_c * CMat::Identity(cfg.M_r, cfg.M_r);
      rhs -= 2.0 * c.xi_r[n](k, m) * sig * st.a_row(m);
    }
  }
  for (int q = 0; q < cfg.I; ++q) rhs += mu_u[q] * rg.dRu_da[q];
  for (int g = 0; g < cfg.J; ++g) rhs += mu_d[g] * rg.dRd_da[g];
  s.C = rhs;
  return s;
}

double xi_block_ul(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                   const SymbolSet& sym, const GradientCache& c, int i, int k, const CMat& p) {
  int slot = cfg.n_t - cfg.n_u;
  double xi = (p.adjoint() * a0_ul(cfg, ch, c, i, k) * p).real().trace();
  xi -= 2.0 * cfg.alpha_u[i] *
        (st.W_u[i][k] * st.U_u[i][k] * ch.H_iB[i] * p).trace().real();
  CVec dk = sym.d_u[i][k].col(slot);
  CVec sk = p * dk;
  for (int n = 0; n < cfg.N_r; ++n) {
    xi += c.xi_r[n](k, k).real() * cfg.sigma2_U * sk.squaredNorm();
    cxd cross(0, 0);
    for (int m = 0; m < cfg.K; ++m) {
      if (m == k) continue;
      CVec sm = st.P_u[i][m] * sym.d_u[i][m].col(slot);
      cross += c.xi_r[n](k, m) * (sk.adjoint() * sm)(0, 0);
    }
    xi += 2.0 * cfg.sigma2_U * cross.real();
  }
  return xi;
}

double xi_block_dl(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                   const SymbolSet& sym, const GradientCache& c, int j, int k, const CMat& p) {
  int slot_m = cfg.n_t - cfg.n_Bm;
  double xi = (p.adjoint() * a0_dl(cfg, ch, c, k) * p).real().trace();
  xi -= 2.0 * cfg.alpha_d[j] * (st.W_d[j][k] * st.U_d[j][k] * ch.H_Bj[j] * p).trace().real();
  CVec sbt_k = sbt_with(cfg, st, sym, j, k, p, 0);
  CVec sbm_k = sbt_with(cfg, st, sym, j, k, p, slot_m);
  for (int n = 0; n < cfg.N_r; ++n) {
    xi += c.xi_r[n](k, k).real() *
          (cfg.sigma2_Bt * sbt_k.squaredNorm() + cfg.sigma2_Bm * sbm_k.squaredNorm());
    cxd cross(0, 0);
    for (int m = 0; m < cfg.K; ++m) {
      if (m == k) continue;
      CVec sbt_m = s_Bt(cfg, st, sym, m);
      CVec sbm_m = s_Bm(cfg, st, sym, m);
      cross += c.xi_r[n](k, m) * sigma_bt_entry(cfg, ch, n, m, k) * (sbt_k.adjoint() * sbt_m)(0, 0);
      cross += c.xi_r[n](k, m) * cfg.sigma2_Bm * (sbm_k.adjoint() * sbm_m)(0, 0);
    }
    xi += 2.0 * cross.real();
    xi -= 2.0 * (sbt_k.transpose() * c.t_lin[n][k].tail(cfg.M_c))(0, 0).real();
  }
  return xi;
}

double xi_block_a(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                  const SymbolSet& sym, const GradientCache& c, int k, const CVec& a) {
  (void)sym;
  double xi = (a.adjoint() * a0_radar(cfg, ch, c, k) * a)(0, 0).real();
  for (int n = 0; n < cfg.N_r; ++n) {
    xi += c.xi_r[n](k, k).real() * (cfg.sigma2_rt + cfg.sigma2_c) * a.squaredNorm();
    cxd cross(0, 0);
    for (int m = 0; m < cfg.K; ++m) {
      if (m == k) continue;
      CMat sig = sigma_rt_block(cfg, ch, n, m, k);
      sig += cfg.sigma2_c * CMat::Identity(cfg.M_r, cfg.M_r);
      cross += c.xi_r[n](k, m) * (a.adjoint() * sig * st.a_row(m))(0, 0);
    }
    xi += 2.0 * cross.real();
    xi -= 2.0 * (a.transpose() * c.t_lin[n][k].head(cfg.M_r))(0, 0).real();
  }
  return xi;
}

double polyak_step(int t, double xi_t, double xi_min, double slack) {
  if (slack == 0.0) return 0.0;
  return (xi_t - xi_min + std::pow(0.1, t)) / (slack * slack);
}

namespace {
double clamp_dual(double v, bool& capped) {
  if (v < 0.0) return 0.0;
  if (v > kDualCap) {
    capped = true;
    return kDualCap;
  }
  return v;
}

// Polyak-stepped projected dual update with two safeguards on top of the raw
// rule: a slack at machine scale counts as zero (the step divides by slack^2
// and would overflow when the iterate starts exactly on the constraint
// boundary), and the per-iteration increment is limited to a doubling so a
// single noisy step cannot catapult the dual to the cap and strand it there.
double dual_update(double dual, int t, double xi_cur, double xi_min, double slack, double scale,
                   bool& capped) {
  if (std::abs(slack) <= 1e-12 * scale) return dual;
  double d = polyak_step(t, xi_cur, xi_min, slack) * slack;
  double lim = 1.0 + dual;
  return clamp_dual(dual + std::clamp(d, -lim, lim), capped);
}

// Power-feasible copy of an iterate: shrink onto the budget sphere when over,
// leave untouched when already inside.
CMat power_scaled(const CMat& p, double budget) {
  double pw = p.squaredNorm();
  if (pw <= budget || pw == 0.0) return p;
  return p * std::sqrt(budget / pw);
}
}  // namespace

SubgradInfo subgradient_ul(const SystemConfig& cfg, const ChannelSet& ch, DesignState& st,
                           const SymbolSet& sym, const GradientCache& c, int i, int k, int t_max,
                           double r_ul, double& xi_total) {
  if (t_max <= 0) throw std::invalid_argument("subgradient_ul: t_max must be positive");
  RateGradients rg = rate_gradients(cfg, ch, st, k);
  std::vector<CMat> su, iu;
  build_ul_covariance(cfg, ch, st, k, su, iu);
  const CMat r_in = iu[i];  // fixed: own precoder absent from own interference
  std::vector<double> mu_u(cfg.I), mu_d(cfg.J);
  for (int q = 0; q < cfg.I; ++q) mu_u[q] = st.mu_u[q][k];
  for (int g = 0; g < cfg.J; ++g) mu_d[g] = st.mu_d[g][k];

  const CMat p_inc = st.P_u[i][k];
  double xi_base = xi_total - xi_block_ul(cfg, ch, st, sym, c, i, k, p_inc);
  double xi_min = xi_total, xi_cur = xi_total;
  CMat p_best = p_inc, p_cur = p_inc;
  double lam = 1.0, mu = 1.0, lam_best = 1.0, mu_best = 1.0;
  SubgradInfo info;
  for (int t = 1; t <= t_max; ++t) {
    double pw = p_cur.squaredNorm();
    double rate = logdet2_ratio(ch.H_iB[i] * p_cur * p_cur.adjoint() * ch.H_iB[i].adjoint(), r_in);
    lam = dual_update(lam, t, xi_cur, xi_min, pw - cfg.P_U, cfg.P_U, info.dual_capped);
    mu = dual_update(mu, t, xi_cur, xi_min, r_ul - rate, std::max(1.0, r_ul), info.dual_capped);
    mu_u[i] = mu;
    SylvesterSystem s = assemble_ul(cfg, ch, st, sym, c, rg, i, k, lam, mu_u, mu_d);
    p_cur = solve_sylvester(s);
    xi_cur = xi_base + xi_block_ul(cfg, ch, st, sym, c, i, k, p_cur);
    // Best tracking scores the budget-feasible shadow of the iterate: the raw
    // dual trajectory can hover just outside the power sphere with a vanishing
    // Polyak step, while its rescaled copy already beats the incumbent.
    CMat p_feas = power_scaled(p_cur, cfg.P_U);
    double xi_feas = xi_base + xi_block_ul(cfg, ch, st, sym, c, i, k, p_feas);
    if (xi_min > xi_feas) {
      xi_min = xi_feas;
      p_best = p_feas;
      lam_best = lam;
      mu_best = mu;
    }
    ++info.iters;
  }
  st.P_u[i][k] = p_best;
  st.lambda_u[i][k] = lam_best;
  st.mu_u[i][k] = mu_best;
  xi_total = xi_min;
  info.xi_final = xi_min;
  info.lambda = lam_best;
  info.mu = mu_best;
  return info;
}

SubgradInfo subgradient_dl(const SystemConfig& cfg, const ChannelSet& ch, DesignState& st,
                           const SymbolSet& sym, const GradientCache& c, int j, int k, int t_max,
                           double r_dl, double& xi_total) {
  if (t_max <= 0) throw std::invalid_argument("subgradient_dl: t_max must be positive");
  RateGradients rg = rate_gradients(cfg, ch, st, k);
  std::vector<CMat> sd, id;
  build_dl_covariance(cfg, ch, st, k, sd, id);
  const CMat r_in = id[j];
  std::vector<double> mu_u(cfg.I), mu_d(cfg.J);
  for (int q = 0; q < cfg.I; ++q) mu_u[q] = st.mu_u[q][k];
  for (int g = 0; g < cfg.J; ++g) mu_d[g] = st.mu_d[g][k];
  double pw_rest = 0.0;  // other DL users' power in frame k (held fixed)
  for (int g = 0; g < cfg.J; ++g)
    if (g != j) pw_rest += st.P_d[g][k].squaredNorm();

  const CMat p_inc = st.P_d[j][k];
  double xi_base = xi_total - xi_block_dl(cfg, ch, st, sym, c, j, k, p_inc);
  double xi_min = xi_total, xi_cur = xi_total;
  CMat p_best = p_inc, p_cur = p_inc;
  double lam = 1.0, mu = 1.0, lam_best = 1.0, mu_best = 1.0;
  SubgradInfo info;
  for (int t = 1; t <= t_max; ++t) {
    double pw = pw_rest + p_cur.squaredNorm();
    double rate = logdet2_ratio(ch.H_Bj[j] * p_cur * p_cur.adjoint() * ch.H_Bj[j].adjoint(), r_in);
    lam = dual_update(lam, t, xi_cur, xi_min, pw - cfg.P_B, cfg.P_B, info.dual_capped);
    mu = dual_update(mu, t, xi_cur, xi_min, r_dl - rate, std::max(1.0, r_dl), info.dual_capped);
    mu_d[j] = mu;
    SylvesterSystem s = assemble_dl(cfg, ch, st, sym, c, rg, j, k, lam, mu_u, mu_d);
    p_cur = solve_sylvester(s);
    xi_cur = xi_base + xi_block_dl(cfg, ch, st, sym, c, j, k, p_cur);
    // Same feasible-shadow tracking as the UL loop; the budget left for this
    // user is the frame budget minus the other users' (fixed) share.
    CMat p_feas = power_scaled(p_cur, std::max(cfg.P_B - pw_rest, 0.0));
    double xi_feas = xi_base + xi_block_dl(cfg, ch, st, sym, c, j, k, p_feas);
    if (xi_min > xi_feas) {
      xi_min = xi_feas;
      p_best = p_feas;
      lam_best = lam;
      mu_best = mu;
    }
    ++info.iters;
  }
  st.P_d[j][k] = p_best;
  st.lambda_d[k] = lam_best;
  st.mu_d[j][k] = mu_best;
  xi_total = xi_min;
  info.xi_final = xi_min;
  info.lambda = lam_best;
  info.mu = mu_best;
  return info;
}

bool solve_radar_code(const SystemConfig& cfg, const ChannelSet& ch, DesignState& st,
                      const SymbolSet& sym, const GradientCache& c, int k, double& xi_total) {
  RateGradients rg = rate_gradients(cfg, ch, st, k);
  std::vector<double> mu_u(cfg.I), mu_d(cfg.J);
  for (int q = 0; q < cfg.I; ++q) mu_u[q] = st.mu_u[q][k];
  for (int g = 0; g < cfg.J; ++g) mu_d[g] = st.mu_d[g][k];
  SylvesterSystem s = assemble_radar(cfg, ch, st, sym, c, rg, k, mu_u, mu_d);
  CVec a_new = solve_sylvester(s).col(0);
  CVec a_inc = st.a_row(k);
  double xi_base = xi_total - xi_block_a(cfg, ch, st, sym, c, k, a_inc);
  // keep-best with backtracking: the solve minimizes the QoS-subsidized
  // Lagrangian, not Xi itself, so the full step can overshoot; shorter steps
  // toward it often still descend.
  bool moved = false;
  for (double step : {1.0, 0.5, 0.25, 0.125}) {
    CVec a_try = a_inc + step * (a_new - a_inc);
    double xi_try = xi_base + xi_block_a(cfg, ch, st, sym, c, k, a_try);
    if (xi_try < xi_total) {
      st.A.row(k) = a_try.transpose();
      xi_total = xi_try;
      moved = true;
      break;
    }
  }
  return moved;
}

}  // namespace mrmc
