#include "mrmc/baselines.hpp"

#include <stdexcept>

#include "mrmc/rng.hpp"

namespace mrmc {

namespace {
enum : uint64_t {  // rng stream ids for baseline constructions
  kStreamBaselinePrecoders = 30,
  kStreamBaselineRadar = 31,
};

CMat identity_block(int rows, int cols, int row_offset) {
  CMat m = CMat::Zero(rows, cols);
  for (int c = 0; c < cols; ++c)
    if (row_offset + c < rows) m(row_offset + c, c) = 1.0;
  return m;
}

CMat random_orthonormal(std::mt19937_64& g, int n, int d) {
  CMat x = cgauss_mat(g, n, d);
  Eigen::HouseholderQR<CMat> qr(x);
  return qr.householderQ() * CMat::Identity(n, d);
}
}  // namespace

DesignKind design_kind_from_string(const std::string& s) {
  if (s == "co-design" || s == "co_design") return DesignKind::co_design;
  if (s == "uniform-precoding") return DesignKind::uniform_precoding;
  if (s == "random-precoding") return DesignKind::random_precoding;
  if (s == "random-radar-code") return DesignKind::random_radar_code;
  if (s == "uncoded-radar") return DesignKind::uncoded_radar;
  throw std::invalid_argument("unknown design: " + s);
}

std::string to_string(DesignKind k) {
  switch (k) {
    case DesignKind::co_design: return "co-design";
    case DesignKind::uniform_precoding: return "uniform-precoding";
    case DesignKind::random_precoding: return "random-precoding";
    case DesignKind::random_radar_code: return "random-radar-code";
    case DesignKind::uncoded_radar: return "uncoded-radar";
  }
  return "?";
}

bool freezes_precoders(DesignKind k) {
  return k == DesignKind::uniform_precoding || k == DesignKind::random_precoding;
}

bool freezes_radar(DesignKind k) {
  return k == DesignKind::random_radar_code || k == DesignKind::uncoded_radar;
}

DesignState baseline_design(DesignKind kind, const SystemConfig& cfg, const ChannelSet& ch,
                            const SymbolSet& sym, uint64_t seed) {
  DesignState st = init_deterministic(cfg, ch, sym, seed);
  switch (kind) {
    case DesignKind::co_design:
      break;
    case DesignKind::uniform_precoding: {
      for (int i = 0; i < cfg.I; ++i) {
        CMat p = identity_block(cfg.N_u[i], cfg.D_u[i], 0) *
                 std::sqrt(cfg.P_U / (double)cfg.D_u[i]);
        for (int k = 0; k < cfg.K; ++k) st.P_u[i][k] = p;
      }
      int off = 0;
      for (int j = 0; j < cfg.J; ++j) {
        CMat p = identity_block(cfg.M_c, cfg.D_d[j], off) *
                 std::sqrt(cfg.P_B / (double)(cfg.J * cfg.D_d[j]));
        off += cfg.D_d[j];
        for (int k = 0; k < cfg.K; ++k) st.P_d[j][k] = p;
      }
      break;
    }
    case DesignKind::random_precoding: {
      auto g = substream(seed, kStreamBaselinePrecoders);
      for (int i = 0; i < cfg.I; ++i)
        for (int k = 0; k < cfg.K; ++k)
          st.P_u[i][k] = random_orthonormal(g, cfg.N_u[i], cfg.D_u[i]) *
                         std::sqrt(cfg.P_U / (double)cfg.D_u[i]);
      for (int j = 0; j < cfg.J; ++j)
        for (int k = 0; k < cfg.K; ++k)
          st.P_d[j][k] = random_orthonormal(g, cfg.M_c, cfg.D_d[j]) *
                         std::sqrt(cfg.P_B / (double)(cfg.J * cfg.D_d[j]));
      break;
    }
    case DesignKind::random_radar_code: {
      auto g = substream(seed, kStreamBaselineRadar);
      CMat a = cgauss_mat(g, cfg.K, cfg.M_r);
      for (int m = 0; m < cfg.M_r; ++m) a.col(m) *= std::sqrt(cfg.P_r[m]) / a.col(m).norm();
      st.A = project_code_matrix(a, cfg);
      break;
    }
    case DesignKind::uncoded_radar: {
      for (int m = 0; m < cfg.M_r; ++m)
        st.A.col(m) = CVec::Constant(cfg.K, std::sqrt(cfg.P_r[m] / (double)cfg.K));
      break;
    }
  }
  if (kind != DesignKind::co_design) {  // re-match filters to the pinned design
    CovarianceBundle b = build_bundle(cfg, ch, st, sym);
    update_mmse_filters(cfg, ch, st, b);
    update_optimal_weights(cfg, ch, st, b);
  }
  return st;
}

DesignState run_design(DesignKind kind, const SystemConfig& cfg, const ChannelSet& ch,
                       const SymbolSet& sym, const OptimizeOptions& opt, RunReport& report) {
  OptimizeOptions o = opt;
  o.freeze_precoders = freezes_precoders(kind);
  o.freeze_radar = freezes_radar(kind);
  if (kind == DesignKind::co_design) return bcd_ap_mrmc(cfg, ch, sym, o, report);
  DesignState init = baseline_design(kind, cfg, ch, sym, o.seed);
  return bcd_ap_mrmc(cfg, ch, sym, o, report, &init);
}

}  // namespace mrmc
