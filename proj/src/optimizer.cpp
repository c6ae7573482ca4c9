#include "mrmc/optimizer.hpp"

#include <chrono>

#include "mrmc/rng.hpp"

namespace mrmc {

namespace {
enum : uint64_t {  // rng stream ids local to initialization
  kStreamInitPhases = 20,
  kStreamInitFactors = 21,
};

CMat random_orthonormal(std::mt19937_64& g, int n, int d) {
  CMat x = cgauss_mat(g, n, d);
  Eigen::HouseholderQR<CMat> qr(x);
  return qr.householderQ() * CMat::Identity(n, d);
}

CMat constant_modulus_code(const SystemConfig& cfg, uint64_t seed) {
  auto g = substream(seed, kStreamInitPhases);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * M_PI);
  CMat a(cfg.K, cfg.M_r);
  for (int m = 0; m < cfg.M_r; ++m) {
    double mag = std::sqrt(cfg.P_r[m] / (double)cfg.K);
    for (int k = 0; k < cfg.K; ++k) {
      double p = ph(g);
      a(k, m) = mag * cxd(std::cos(p), std::sin(p));
    }
  }
  return a;
}

void refresh_filters(const SystemConfig& cfg, const ChannelSet& ch, const SymbolSet& sym,
                     DesignState& st, const std::vector<TargetModel>* target) {
  CovarianceBundle b = build_bundle(cfg, ch, st, sym, target);
  update_mmse_filters(cfg, ch, st, b);
  update_optimal_weights(cfg, ch, st, b);
}
}  // namespace

DesignState init_deterministic(const SystemConfig& cfg, const ChannelSet& ch, const SymbolSet& sym,
                               uint64_t seed) {
  (void)seed;
  DesignState st = DesignState::zeros(cfg);
  for (int i = 0; i < cfg.I; ++i) {
    Eigen::JacobiSVD<CMat> svd(ch.H_iB[i], Eigen::ComputeFullV);
    CMat p = svd.matrixV().leftCols(cfg.D_u[i]) * std::sqrt(cfg.P_U / (double)cfg.D_u[i]);
    for (int k = 0; k < cfg.K; ++k) st.P_u[i][k] = p;
  }
  for (int j = 0; j < cfg.J; ++j) {
    Eigen::JacobiSVD<CMat> svd(ch.H_Bj[j], Eigen::ComputeFullV);
    CMat p = svd.matrixV().leftCols(cfg.D_d[j]) *
             std::sqrt(cfg.P_B / (double)(cfg.J * cfg.D_d[j]));
    for (int k = 0; k < cfg.K; ++k) st.P_d[j][k] = p;
  }
  // Warm-start the code from the uncoded profile (constant phase, PAR = 1,
  // full power): the coherent code is a strong conventional design and a
  // random-phase start can settle into a worse local optimum.
  for (int m = 0; m < cfg.M_r; ++m)
    st.A.col(m) = CVec::Constant(cfg.K, std::sqrt(cfg.P_r[m] / (double)cfg.K));
  refresh_filters(cfg, ch, sym, st, nullptr);
  return st;
}

DesignState init_random(const SystemConfig& cfg, const ChannelSet& ch, const SymbolSet& sym,
                        uint64_t seed) {
  DesignState st = DesignState::zeros(cfg);
  auto g = substream(seed, kStreamInitFactors);
  for (int i = 0; i < cfg.I; ++i)
    for (int k = 0; k < cfg.K; ++k)
      st.P_u[i][k] = random_orthonormal(g, cfg.N_u[i], cfg.D_u[i]) *
                     std::sqrt(cfg.P_U / (double)cfg.D_u[i]);
  for (int j = 0; j < cfg.J; ++j)
    for (int k = 0; k < cfg.K; ++k)
      st.P_d[j][k] = random_orthonormal(g, cfg.M_c, cfg.D_d[j]) *
                     std::sqrt(cfg.P_B / (double)(cfg.J * cfg.D_d[j]));
  st.A = constant_modulus_code(cfg, seed);
  refresh_filters(cfg, ch, sym, st, nullptr);
  return st;
}

WmmseResult wmmse_mrmc(const SystemConfig& cfg, const ChannelSet& ch, const SymbolSet& sym,
                       DesignState& st, const std::vector<TargetModel>& target, int iota_max,
                       double r_ul, double r_dl, bool freeze_precoders, bool freeze_radar) {
  WmmseResult res;
  CovarianceBundle b = build_bundle(cfg, ch, st, sym, &target);
  GradientCache cache = build_gradient_cache(cfg, st, b);
  double xi_total = weighted_sum_mse(cfg, ch, st, b);
  res.xi_trace.push_back(xi_total);
  for (int iota = 0; iota < iota_max; ++iota) {
    for (int k = 0; k < cfg.K; ++k) {
      if (!freeze_precoders) {
        for (int i = 0; i < cfg.I; ++i) {
          SubgradInfo info =
              subgradient_ul(cfg, ch, st, sym, cache, i, k, cfg.t_u_max, r_ul, xi_total);
          res.dual_capped |= info.dual_capped;
          res.xi_trace.push_back(xi_total);
        }
        for (int j = 0; j < cfg.J; ++j) {
          SubgradInfo info =
              subgradient_dl(cfg, ch, st, sym, cache, j, k, cfg.t_d_max, r_dl, xi_total);
          res.dual_capped |= info.dual_capped;
          res.xi_trace.push_back(xi_total);
        }
      }
      if (!freeze_radar) {
        solve_radar_code(cfg, ch, st, sym, cache, k, xi_total);
        res.xi_trace.push_back(xi_total);
      }
    }
  }
  return res;
}

DesignState bcd_ap_mrmc(const SystemConfig& cfg, const ChannelSet& ch, const SymbolSet& sym,
                        const OptimizeOptions& opt, RunReport& report,
                        const DesignState* init_state) {
  auto t0 = std::chrono::steady_clock::now();
  int ell_max = opt.ell_max >= 0 ? opt.ell_max : cfg.ell_max;
  int iota_max = opt.iota_max >= 0 ? opt.iota_max : cfg.iota_max;
  double r_ul, r_dl;
  qos_thresholds(cfg, r_ul, r_dl);

  DesignState st = init_state ? *init_state
                   : (opt.init == InitKind::deterministic)
                       ? init_deterministic(cfg, ch, sym, opt.seed)
                       : init_random(cfg, ch, sym, opt.seed);
  std::vector<TargetModel> target = build_target_statistics(cfg, ch);

  auto record = [&](const DesignState& s) {
    CovarianceBundle b = build_bundle(cfg, ch, s, sym, &target);
    MiBreakdown mi = mutual_information(cfg, b);
    report.I_cwsm.push_back(mi.I_cwsm);
    report.I_fd.push_back(mi.I_fd);
    report.qos_slack.push_back(min_rate_slack(cfg, b, r_ul, r_dl));
  };

  record(st);  // value at the initialization
  report.termination = "max_iterations";
  DesignState last_good = st;
  int plateau_run = 0;
  double best = report.I_cwsm.back();
  for (int ell = 1; ell <= ell_max; ++ell) {
    WmmseResult wr = wmmse_mrmc(cfg, ch, sym, st, target, iota_max, r_ul, r_dl,
                                opt.freeze_precoders, opt.freeze_radar);
    report.qos_infeasible |= wr.dual_capped;
    report.xi_wmmse.push_back(wr.xi_trace.back());
    report.xi_trace = std::move(wr.xi_trace);

    if (!opt.freeze_radar) st.A = project_code_matrix(st.A, cfg);
    if (!opt.freeze_precoders) {
      // safety rescale: the best-tracked dual iterates may carry a small
      // power-constraint slack
      for (int k = 0; k < cfg.K; ++k) {
        for (int i = 0; i < cfg.I; ++i) {
          double pw = st.P_u[i][k].squaredNorm();
          if (pw > cfg.P_U * (1.0 + 1e-12)) {
            st.P_u[i][k] *= std::sqrt(cfg.P_U / pw);
            report.rescale_triggered = true;
          }
        }
        double pd = dl_frame_power(st, cfg, k);
        if (pd > cfg.P_B * (1.0 + 1e-12)) {
          double sc = std::sqrt(cfg.P_B / pd);
          for (int j = 0; j < cfg.J; ++j) st.P_d[j][k] *= sc;
          report.rescale_triggered = true;
        }
      }
    }

    CovarianceBundle b = build_bundle(cfg, ch, st, sym, &target);
    update_mmse_filters(cfg, ch, st, b);
    update_optimal_weights(cfg, ch, st, b);
    record(st);
    report.outer_iters = ell;

    double cur = report.I_cwsm.back();
    if (!std::isfinite(cur)) {
      st = last_good;
      report.termination = "nonfinite_abort";
      break;
    }
    last_good = st;
    // plateau = no material improvement over the best value seen; a
    // consecutive-step test can be defeated by a projection-induced
    // oscillation that never settles
    if (cur > best + 1e-6 * std::max(1.0, std::abs(best))) {
      best = cur;
      plateau_run = 0;
    } else {
      ++plateau_run;
    }
    if (opt.early_stop && plateau_run >= 10) {
      report.termination = "plateau";
      break;
    }
  }
  if (ell_max == 0) refresh_filters(cfg, ch, sym, st, &target);
  report.I_cwsm_final = report.I_cwsm.back();
  report.I_fd_final = report.I_fd.back();
  report.min_rate_slack_final = report.qos_slack.back();
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return st;
}

}  // namespace mrmc
