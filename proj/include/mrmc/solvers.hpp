#pragma once
// Inner solver machinery: conjugate-coordinate gradients of the weighted-sum
// MSE, Taylor-linearized rate gradients, generalized-Sylvester assembly and
// Kronecker closed-form solves, and the Polyak projected-subgradient dual
// loops that update one precoder block at a time.

#include "mrmc/covariance.hpp"

namespace mrmc {

// Quantities that depend only on the frozen receive filters / MSE weights.
// Rebuilt once per WMMSE call; everything inside a subgradient run reuses it.
struct GradientCache {
  std::vector<CMat> xi_UL;              // [k] N_c x N_c = sum_q a_u,q U^H W U
  std::vector<std::vector<CMat>> xi_d;  // [g][k] N_d[g] x N_d[g] = a_d,g U^H W U
  std::vector<CMat> xi_r;               // [n_r] K x K, (k,m) = a_r u_r^H[k] W_r u_r[m]
  std::vector<std::vector<CVec>> t_lin; // [n_r][k] M-dim: PRI-k block of a_r Sigma_t W_r u_r[k]
};

GradientCache build_gradient_cache(const SystemConfig& cfg, const DesignState& st,
                                   const CovarianceBundle& b);

// Exact gradients 2 dXi/dX* of the weighted-sum MSE at the current design.
CMat grad_xi_pu(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                const SymbolSet& sym, const GradientCache& c, int i, int k);
CMat grad_xi_pd(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                const SymbolSet& sym, const GradientCache& c, int j, int k);
CVec grad_xi_a(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
               const SymbolSet& sym, const GradientCache& c, int k);

// Constant gradients of the Taylor-linearized rates, evaluated at the anchor
// design (the state passed in). All are 2 dR/dX* in bits.
struct RateGradients {
  std::vector<std::vector<CMat>> dRu_dPu;  // [q][i]
  std::vector<std::vector<CMat>> dRd_dPu;  // [g][i]
  std::vector<std::vector<CMat>> dRu_dPd;  // [q][j]
  std::vector<std::vector<CMat>> dRd_dPd;  // [g][j]
  std::vector<CVec> dRu_da;                // [q]
  std::vector<CVec> dRd_da;                // [g]
};

RateGradients rate_gradients(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                             int k);

// Generalized Sylvester system A P + sum_t F[t] P B[t] = C, solved through the
// Kronecker-vectorized dense form.
struct SylvesterSystem {
  CMat A;
  std::vector<CMat> F, B;
  CMat C;
};

CMat solve_sylvester(const SylvesterSystem& s);
double sylvester_residual(const SylvesterSystem& s, const CMat& p);

SylvesterSystem assemble_ul(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                            const SymbolSet& sym, const GradientCache& c, const RateGradients& rg,
                            int i, int k, double lambda, const std::vector<double>& mu_u,
                            const std::vector<double>& mu_d);
SylvesterSystem assemble_dl(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                            const SymbolSet& sym, const GradientCache& c, const RateGradients& rg,
                            int j, int k, double lambda, const std::vector<double>& mu_u,
                            const std::vector<double>& mu_d);
SylvesterSystem assemble_radar(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                               const SymbolSet& sym, const GradientCache& c,
                               const RateGradients& rg, int k, const std::vector<double>& mu_u,
                               const std::vector<double>& mu_d);

// Terms of Xi that depend on one transmit block, with every other block held
// at its value in `st`. Used for cheap objective deltas inside the dual loops;
// Xi(new) - Xi(old) == xi_block(new) - xi_block(old) exactly.
double xi_block_ul(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                   const SymbolSet& sym, const GradientCache& c, int i, int k, const CMat& p);
double xi_block_dl(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                   const SymbolSet& sym, const GradientCache& c, int j, int k, const CMat& p);
double xi_block_a(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                  const SymbolSet& sym, const GradientCache& c, int k, const CVec& a);

// Polyak step (Xi_t - Xi_min + 0.1^t)/slack^2; zero slack gives step 0.
double polyak_step(int t, double xi_t, double xi_min, double slack);

constexpr double kDualCap = 1e6;

struct SubgradInfo {
  double xi_final = 0.0;
  double lambda = 0.0, mu = 0.0;
  bool dual_capped = false;  // a dual hit kDualCap (QoS likely infeasible)
  int iters = 0;
};

// One Algorithm-1 run for UL block (i,k) / DL block (j,k). Updates the block
// precoder and its persistent duals in `st`, and keeps `xi_total` (the running
// full weighted-sum MSE) consistent. Returned Xi never exceeds the incoming.
SubgradInfo subgradient_ul(const SystemConfig& cfg, const ChannelSet& ch, DesignState& st,
                           const SymbolSet& sym, const GradientCache& c, int i, int k, int t_max,
                           double r_ul, double& xi_total);
SubgradInfo subgradient_dl(const SystemConfig& cfg, const ChannelSet& ch, DesignState& st,
                           const SymbolSet& sym, const GradientCache& c, int j, int k, int t_max,
                           double r_dl, double& xi_total);

// Closed-form radar-code update for PRI k using the stored dual multipliers.
// The new code is kept only if it does not increase Xi (guard against the
// unconstrained solve overshooting); returns true when accepted.
bool solve_radar_code(const SystemConfig& cfg, const ChannelSet& ch, DesignState& st,
                      const SymbolSet& sym, const GradientCache& c, int k, double& xi_total);

}  // namespace mrmc
