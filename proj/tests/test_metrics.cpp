#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mrmc/metrics.hpp"
#include "mrmc/optimizer.hpp"
#include "mrmc/rng.hpp"

using namespace mrmc;

namespace {
SystemConfig small_config() {
  SystemConfig cfg;
  cfg.M_r = cfg.N_r = cfg.M_c = cfg.N_c = 2;
  cfg.I = cfg.J = 1;
  cfg.N_u = {1};
  cfg.D_u = {1};
  cfg.N_d = {1};
  cfg.D_d = {1};
  cfg.K = 4;
  cfg.N = 8;
  cfg.n_t = 4;
  return resolved(cfg);
}
}  // namespace

TEST_CASE("scalar log-det ratio equals the SNR formula") {
  CMat s(1, 1), n(1, 1);
  s(0, 0) = 10.0;
  n(0, 0) = 1.0;
  CHECK(logdet2_ratio(s, n) == doctest::Approx(std::log2(11.0)).epsilon(1e-14));
  s(0, 0) = 0.0;
  CHECK(logdet2_ratio(s, n) == doctest::Approx(0.0));
}

TEST_CASE("channel MI is nonnegative and zero without signal") {
  SystemConfig cfg = small_config();
  ChannelSet ch = generate_channels(cfg, 1);
  SymbolSet sym = generate_symbols(cfg, 1);
  DesignState st = init_random(cfg, ch, sym, 1);
  CovarianceBundle b = build_bundle(cfg, ch, st, sym);
  for (int k = 0; k < cfg.K; ++k) {
    CHECK(mi_ul(b, 0, k) >= 0.0);
    CHECK(mi_dl(b, 0, k) >= 0.0);
  }
  for (int n = 0; n < cfg.N_r; ++n) CHECK(mi_radar(b, n) >= 0.0);

  DesignState dead = DesignState::zeros(cfg);
  CovarianceBundle bz = build_bundle(cfg, ch, dead, sym);
  CHECK(mi_ul(bz, 0, 0) == doctest::Approx(0.0));
  CHECK(mi_radar(bz, 0) == doctest::Approx(0.0));
}

TEST_CASE("cwsm sums the weighted components") {
  SystemConfig cfg = small_config();
  ChannelSet ch = generate_channels(cfg, 2);
  SymbolSet sym = generate_symbols(cfg, 2);
  DesignState st = init_random(cfg, ch, sym, 2);
  CovarianceBundle b = build_bundle(cfg, ch, st, sym);
  MiBreakdown mi = mutual_information(cfg, b);
  double manual = 0.0, comms = 0.0;
  for (int n = 0; n < cfg.N_r; ++n) manual += cfg.alpha_r[n] * mi.I_r[n];
  for (int k = 0; k < cfg.K; ++k) {
    for (int i = 0; i < cfg.I; ++i) {
      manual += cfg.alpha_u[i] * mi.I_u[i][k];
      comms += cfg.alpha_u[i] * mi.I_u[i][k];
    }
    for (int j = 0; j < cfg.J; ++j) {
      manual += cfg.alpha_d[j] * mi.I_d[j][k];
      comms += cfg.alpha_d[j] * mi.I_d[j][k];
    }
  }
  CHECK(mi.I_cwsm == doctest::Approx(manual).epsilon(1e-12));
  CHECK(mi.I_fd == doctest::Approx(comms).epsilon(1e-12));
  CHECK(cwsm(cfg, b) == doctest::Approx(mi.I_cwsm).epsilon(1e-12));
}

TEST_CASE("filtered MI equals channel MI at the MMSE filters, never exceeds it") {
  SystemConfig cfg = small_config();
  ChannelSet ch = generate_channels(cfg, 3);
  SymbolSet sym = generate_symbols(cfg, 3);
  DesignState st = init_random(cfg, ch, sym, 3);
  CovarianceBundle b = build_bundle(cfg, ch, st, sym);
  // init_random leaves MMSE filters in place
  for (int k = 0; k < cfg.K; ++k) {
    CHECK(mi_ul_filtered(st, b, 0, k) ==
          doctest::Approx(mi_ul(b, 0, k)).epsilon(1e-8));
    CHECK(mi_dl_filtered(st, b, 0, k) ==
          doctest::Approx(mi_dl(b, 0, k)).epsilon(1e-8));
  }
  CHECK(mi_radar_filtered(st, b, 0) == doctest::Approx(mi_radar(b, 0)).epsilon(1e-8));

  // data processing: a random filter cannot beat the channel MI
  auto g = substream(99, 1);
  for (int trial = 0; trial < 20; ++trial) {
    DesignState pert = st;
    pert.U_u[0][1] = cgauss_mat(g, cfg.D_u[0], cfg.N_c);
    CHECK(mi_ul_filtered(pert, b, 0, 1) <= mi_ul(b, 0, 1) + 1e-10);
  }
}

TEST_CASE("MSE matrices hit their closed-form MMSE at the optimal filters") {
  SystemConfig cfg = small_config();
  ChannelSet ch = generate_channels(cfg, 4);
  SymbolSet sym = generate_symbols(cfg, 4);
  DesignState st = init_random(cfg, ch, sym, 4);
  CovarianceBundle b = build_bundle(cfg, ch, st, sym);
  for (int k = 0; k < cfg.K; ++k) {
    CMat e = mse_ul(cfg, ch, st, b, 0, k);
    CMat em = mmse_ul(cfg, ch, st, b, 0, k);
    CHECK((e - em).norm() < 1e-10 * (1.0 + em.norm()));
    CMat ed = mse_dl(cfg, ch, st, b, 0, k);
    CMat edm = mmse_dl(cfg, ch, st, b, 0, k);
    CHECK((ed - edm).norm() < 1e-10 * (1.0 + edm.norm()));
  }
  CMat er = mse_radar(cfg, st, b, 0);
  CMat erm = mmse_radar(cfg, st, b, 0);
  CHECK((er - erm).norm() < 1e-9 * (1.0 + erm.norm()));

  // U = 0 gives E = I (comms) and E = Sigma_t (radar)
  DesignState open = st;
  open.U_u[0][0].setZero();
  CHECK((mse_ul(cfg, ch, open, b, 0, 0) - CMat::Identity(1, 1)).norm() < 1e-14);
  open.U_r[0].setZero();
  CHECK((mse_radar(cfg, open, b, 0) - b.target[0].Sigma_t).norm() < 1e-12);
}

TEST_CASE("optimal filters beat random perturbations on the weighted MSE") {
  SystemConfig cfg = small_config();
  ChannelSet ch = generate_channels(cfg, 5);
  SymbolSet sym = generate_symbols(cfg, 5);
  DesignState st = init_random(cfg, ch, sym, 5);
  CovarianceBundle b = build_bundle(cfg, ch, st, sym);
  double base = mse_ul(cfg, ch, st, b, 0, 0).real().trace();
  auto g = substream(5, 2);
  for (int t = 0; t < 50; ++t) {
    DesignState pert = st;
    pert.U_u[0][0] += 0.3 * cgauss_mat(g, cfg.D_u[0], cfg.N_c);
    CHECK(mse_ul(cfg, ch, pert, b, 0, 0).real().trace() >= base - 1e-10);
  }
  double base_r = mse_radar(cfg, st, b, 0).real().trace();
  for (int t = 0; t < 10; ++t) {
    DesignState pert = st;
    pert.U_r[0] += 0.1 * cgauss_mat(g, cfg.K * cfg.M(), cfg.K);
    CHECK(mse_radar(cfg, pert, b, 0).real().trace() >= base_r - 1e-9);
  }
}

TEST_CASE("optimal weights invert the MMSE matrices") {
  SystemConfig cfg = small_config();
  ChannelSet ch = generate_channels(cfg, 6);
  SymbolSet sym = generate_symbols(cfg, 6);
  DesignState st = init_random(cfg, ch, sym, 6);
  CovarianceBundle b = build_bundle(cfg, ch, st, sym);
  CMat e = mmse_ul(cfg, ch, st, b, 0, 2);
  CHECK((st.W_u[0][2] * e - CMat::Identity(e.rows(), e.rows())).norm() < 1e-10);
  // radar weight is the rank-M pseudo-inverse of the singular MMSE matrix
  CMat er = mmse_radar(cfg, st, b, 0);
  CMat w = st.W_r[0];
  CHECK((w * er * w - w).norm() < 1e-8 * (1.0 + w.norm()));
  CHECK(herm_error(w) < 1e-10);
}

TEST_CASE("rates through the MMSE route match the SINR route") {
  SystemConfig cfg = small_config();
  ChannelSet ch = generate_channels(cfg, 7);
  SymbolSet sym = generate_symbols(cfg, 7);
  for (uint64_t s = 0; s < 5; ++s) {
    DesignState st = init_random(cfg, ch, sym, 100 + s);
    CovarianceBundle b = build_bundle(cfg, ch, st, sym);
    for (int k = 0; k < cfg.K; ++k) {
      double a = rate_ul_mmse(cfg, ch, st, b, 0, k);
      double ref = mi_ul(b, 0, k);
      CHECK(std::abs(a - ref) < 1e-8 * (1.0 + std::abs(ref)));
      double d = rate_dl_mmse(cfg, ch, st, b, 0, k);
      CHECK(std::abs(d - mi_dl(b, 0, k)) < 1e-8 * (1.0 + std::abs(d)));
    }
    double r = rate_radar_mmse(cfg, st, b, 0);
    CHECK(std::abs(r - mi_radar(b, 0)) < 1e-8 * (1.0 + std::abs(r)));
  }
}

TEST_CASE("weighted-sum MSE with open filters counts the stream dimensions") {
  SystemConfig cfg = small_config();
  ChannelSet ch = generate_channels(cfg, 8);
  SymbolSet sym = generate_symbols(cfg, 8);
  DesignState st = init_random(cfg, ch, sym, 8);
  for (int i = 0; i < cfg.I; ++i)
    for (int k = 0; k < cfg.K; ++k) {
      st.U_u[i][k].setZero();
      st.W_u[i][k].setIdentity();
    }
  for (int j = 0; j < cfg.J; ++j)
    for (int k = 0; k < cfg.K; ++k) {
      st.U_d[j][k].setZero();
      st.W_d[j][k].setIdentity();
    }
  for (int n = 0; n < cfg.N_r; ++n) {
    st.U_r[n].setZero();
    st.W_r[n].setIdentity();
  }
  CovarianceBundle b = build_bundle(cfg, ch, st, sym);
  double xi = weighted_sum_mse(cfg, ch, st, b);
  double expect = 0.0;
  for (int k = 0; k < cfg.K; ++k) {
    for (int i = 0; i < cfg.I; ++i) expect += cfg.alpha_u[i] * cfg.D_u[i];
    for (int j = 0; j < cfg.J; ++j) expect += cfg.alpha_d[j] * cfg.D_d[j];
  }
  for (int n = 0; n < cfg.N_r; ++n)
    expect += cfg.alpha_r[n] * b.target[n].Sigma_t.real().trace();
  CHECK(xi == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("surrogate identity: Xi' = -I_CWSM at the optimal filters and weights") {
  SystemConfig cfg = small_config();
  ChannelSet ch = generate_channels(cfg, 9);
  SymbolSet sym = generate_symbols(cfg, 9);
  for (uint64_t s = 0; s < 10; ++s) {
    DesignState st = init_random(cfg, ch, sym, 200 + s);
    CovarianceBundle b = build_bundle(cfg, ch, st, sym);
    double icwsm = cwsm(cfg, b);
    double resid = std::abs(xi_prime(cfg, ch, st, b) + icwsm) / (1.0 + std::abs(icwsm));
    CHECK(resid < 1e-8);
  }
}

TEST_CASE("power bookkeeping") {
  SystemConfig cfg = small_config();
  ChannelSet ch = generate_channels(cfg, 10);
  SymbolSet sym = generate_symbols(cfg, 10);
  DesignState st = init_deterministic(cfg, ch, sym, 10);
  for (int k = 0; k < cfg.K; ++k) {
    CHECK(ul_power(st, 0, k) == doctest::Approx(cfg.P_U).epsilon(1e-10));
    CHECK(dl_frame_power(st, cfg, k) == doctest::Approx(cfg.P_B).epsilon(1e-10));
  }
  CHECK(radar_power(st) == doctest::Approx(cfg.P_r[0] + cfg.P_r[1]).epsilon(1e-10));
}
