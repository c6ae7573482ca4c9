#include "mrmc/channels.hpp"

#include "mrmc/rng.hpp"

namespace mrmc {

namespace {
// fixed stream ids so adding a family never reshuffles the others
enum : uint64_t {
  kStreamHiB = 1,
  kStreamHBj = 2,
  kStreamHij = 3,
  kStreamHBB = 4,
  kStreamHrB = 5,
  kStreamHrj = 6,
  kStreamTarget = 7,
  kStreamDoppler = 8,
  kStreamClutter = 9,
  kStreamDirect = 10,
  kStreamSymbols = 11,
  kStreamCsi = 12,
};

uint64_t mix(uint64_t a, uint64_t b) { return splitmix64(a * 0x100000001B3ULL + b); }
}  // namespace

ChannelSet generate_channels(const SystemConfig& cfg, uint64_t seed) {
  ChannelSet ch;
  ch.H_iB.resize(cfg.I);
  for (int i = 0; i < cfg.I; ++i) {
    auto g = substream(seed, mix(kStreamHiB, i));
    ch.H_iB[i] = cgauss_mat(g, cfg.N_c, cfg.N_u[i]);
  }
  ch.H_Bj.resize(cfg.J);
  for (int j = 0; j < cfg.J; ++j) {
    auto g = substream(seed, mix(kStreamHBj, j));
    ch.H_Bj[j] = cgauss_mat(g, cfg.N_d[j], cfg.M_c);
  }
  ch.H_ij.assign(cfg.I, std::vector<CMat>(cfg.J));
  for (int i = 0; i < cfg.I; ++i)
    for (int j = 0; j < cfg.J; ++j) {
      auto g = substream(seed, mix(kStreamHij, i * 64 + j));
      ch.H_ij[i][j] = cgauss_mat(g, cfg.N_d[j], cfg.N_u[i]);
    }
  {
    // Rician SI channel: mean sqrt(sigma2_SI K_B/(1+K_B)) * ones,
    // per-entry variance sigma2_SI/(1+K_B)
    auto g = substream(seed, kStreamHBB);
    double mean = std::sqrt(cfg.sigma2_SI * cfg.K_B / (1.0 + cfg.K_B));
    double sd = std::sqrt(cfg.sigma2_SI / (1.0 + cfg.K_B));
    ch.H_BB = mean * CMat::Ones(cfg.N_c, cfg.M_c) + sd * cgauss_mat(g, cfg.N_c, cfg.M_c);
  }
  {
    // radar -> BS / DL direct columns: Rician with factor kappa,
    // mean sqrt(1/(1+kappa)) * mu, per-entry variance eta2/(1+kappa)
    auto g = substream(seed, kStreamHrB);
    double mean = std::sqrt(1.0 / (1.0 + cfg.kappa)) * 0.1;
    double sd = std::sqrt(0.3 / (1.0 + cfg.kappa));
    ch.H_rB = mean * CMat::Ones(cfg.N_c, cfg.M_r) + sd * cgauss_mat(g, cfg.N_c, cfg.M_r);
  }
  ch.H_rj.resize(cfg.J);
  for (int j = 0; j < cfg.J; ++j) {
    auto g = substream(seed, mix(kStreamHrj, j));
    double mean = std::sqrt(1.0 / (1.0 + cfg.kappa)) * 0.05;
    double sd = std::sqrt(0.5 / (1.0 + cfg.kappa));
    ch.H_rj[j] = mean * CMat::Ones(cfg.N_d[j], cfg.M_r) + sd * cgauss_mat(g, cfg.N_d[j], cfg.M_r);
  }
  ch.alpha_rt.assign(cfg.M_r, std::vector<cxd>(cfg.N_r));
  ch.f_rt.assign(cfg.M_r, std::vector<double>(cfg.N_r));
  {
    auto g = substream(seed, kStreamTarget);
    auto gd = substream(seed, kStreamDoppler);
    std::uniform_real_distribution<double> ud(0.05, 0.325);
    for (int m = 0; m < cfg.M_r; ++m)
      for (int n = 0; n < cfg.N_r; ++n) {
        ch.alpha_rt[m][n] = std::sqrt(cfg.sigma2_rt) * cgauss(g);
        ch.f_rt[m][n] = ud(gd);
      }
    ch.alpha_Bt.resize(cfg.N_r);
    ch.f_Bt.resize(cfg.N_r);
    for (int n = 0; n < cfg.N_r; ++n) {
      ch.alpha_Bt[n] = std::sqrt(cfg.sigma2_Bt) * cgauss_vec(g, cfg.M_c);
      ch.f_Bt[n] = ud(gd);
    }
  }
  {
    auto g = substream(seed, kStreamClutter);
    ch.h_c.resize(cfg.N_r);
    for (int n = 0; n < cfg.N_r; ++n) ch.h_c[n] = std::sqrt(cfg.sigma2_c) * cgauss_vec(g, cfg.M_r);
  }
  {
    auto g = substream(seed, kStreamDirect);
    ch.alpha_Bm.resize(cfg.N_r);
    for (int n = 0; n < cfg.N_r; ++n)
      ch.alpha_Bm[n] = std::sqrt(cfg.sigma2_Bm) * cgauss_vec(g, cfg.M_c);
    ch.alpha_iU.assign(cfg.I, std::vector<CVec>(cfg.N_r));
    for (int i = 0; i < cfg.I; ++i)
      for (int n = 0; n < cfg.N_r; ++n)
        ch.alpha_iU[i][n] = std::sqrt(cfg.sigma2_U) * cgauss_vec(g, cfg.N_u[i]);
  }
  return ch;
}

ChannelSet perturb_csi(const ChannelSet& ch, const SystemConfig& cfg, double eta2, uint64_t seed) {
  ChannelSet out = ch;
  if (eta2 <= 0.0) return out;
  double sd = std::sqrt(eta2);
  auto g = substream(seed, kStreamCsi);
  auto add = [&](CMat& m) { m += sd * cgauss_mat(g, (int)m.rows(), (int)m.cols()); };
  for (int i = 0; i < cfg.I; ++i) add(out.H_iB[i]);
  for (int j = 0; j < cfg.J; ++j) add(out.H_Bj[j]);
  for (int i = 0; i < cfg.I; ++i)
    for (int j = 0; j < cfg.J; ++j) add(out.H_ij[i][j]);
  add(out.H_BB);
  add(out.H_rB);
  for (int j = 0; j < cfg.J; ++j) add(out.H_rj[j]);
  return out;
}

SymbolSet generate_symbols(const SystemConfig& cfg, uint64_t seed) {
  SymbolSet s;
  auto g = substream(seed, kStreamSymbols);
  std::uniform_int_distribution<int> qpsk(0, 3);
  auto draw = [&](int dim, int K, int N) {
    std::vector<CMat> frames(K);
    const double r = M_SQRT1_2;
    for (int k = 0; k < K; ++k) {
      frames[k] = CMat(dim, N);
      for (int l = 0; l < N; ++l)
        for (int d = 0; d < dim; ++d) {
          switch (qpsk(g)) {
            case 0: frames[k](d, l) = cxd(r, r); break;
            case 1: frames[k](d, l) = cxd(-r, r); break;
            case 2: frames[k](d, l) = cxd(-r, -r); break;
            default: frames[k](d, l) = cxd(r, -r); break;
          }
        }
    }
    return frames;
  };
  s.d_u.resize(cfg.I);
  for (int i = 0; i < cfg.I; ++i) s.d_u[i] = draw(cfg.D_u[i], cfg.K, cfg.N);
  s.d_d.resize(cfg.J);
  for (int j = 0; j < cfg.J; ++j) s.d_d[j] = draw(cfg.D_d[j], cfg.K, cfg.N);
  return s;
}

}  // namespace mrmc
