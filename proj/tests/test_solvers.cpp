#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mrmc/optimizer.hpp"
#include "mrmc/rng.hpp"
#include "mrmc/solvers.hpp"

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

struct Scene {
  SystemConfig cfg;
  ChannelSet ch;
  SymbolSet sym;
  DesignState st;
  CovarianceBundle b;
  GradientCache cache;
};

Scene make_scene(uint64_t seed) {
  Scene s{small_config(), {}, {}, {}, {}, {}};
  s.ch = generate_channels(s.cfg, seed);
  s.sym = generate_symbols(s.cfg, seed);
  s.st = init_random(s.cfg, s.ch, s.sym, seed);
  s.b = build_bundle(s.cfg, s.ch, s.st, s.sym);
  s.cache = build_gradient_cache(s.cfg, s.st, s.b);
  return s;
}
}  // namespace

TEST_CASE("Polyak step arithmetic") {
  CHECK(polyak_step(1, 1.0, 0.0, 2.0) == doctest::Approx(0.275).epsilon(1e-14));
  CHECK(polyak_step(1, 0.0, 0.0, 0.0) == 0.0);  // zero-slack guard
  CHECK(polyak_step(8, 5.0, 5.0, 2.0) == doctest::Approx(std::pow(0.1, 8) / 4.0));
}

TEST_CASE("Sylvester solve: degenerate and identity cases") {
  auto g = substream(1, 1);
  SylvesterSystem s;
  s.A = cgauss_mat(g, 3, 3) + 4.0 * CMat::Identity(3, 3);
  s.C = cgauss_mat(g, 3, 2);
  CMat p = solve_sylvester(s);  // no coupling terms -> A^{-1} C
  CHECK((s.A * p - s.C).norm() < 1e-12);

  SylvesterSystem id;
  id.A = CMat::Identity(2, 2);
  id.F = {CMat::Identity(2, 2)};
  id.B = {CMat::Identity(2, 2)};
  id.C = cgauss_mat(g, 2, 2);
  CHECK((solve_sylvester(id) - 0.5 * id.C).norm() < 1e-13);
}

TEST_CASE("Sylvester solve: random three-term systems") {
  auto g = substream(2, 1);
  for (int trial = 0; trial < 20; ++trial) {
    SylvesterSystem s;
    int n = 3, d = 2;
    s.A = cgauss_mat(g, n, n) + 5.0 * CMat::Identity(n, n);
    s.F = {cgauss_mat(g, n, n), cgauss_mat(g, n, n)};
    s.B = {cgauss_mat(g, d, d), cgauss_mat(g, d, d)};
    s.C = cgauss_mat(g, n, d);
    CMat p = solve_sylvester(s);
    CHECK(sylvester_residual(s, p) < 1e-10);
  }
}

TEST_CASE("block objectives track the full weighted-sum MSE exactly") {
  Scene s = make_scene(11);
  double xi0 = weighted_sum_mse(s.cfg, s.ch, s.st, s.b);
  auto g = substream(11, 7);

  SUBCASE("uplink block") {
    int i = 0, k = 2;
    CMat p_new = s.st.P_u[i][k] + 0.2 * cgauss_mat(g, s.cfg.N_u[i], s.cfg.D_u[i]);
    double delta =
        xi_block_ul(s.cfg, s.ch, s.st, s.sym, s.cache, i, k, p_new) -
        xi_block_ul(s.cfg, s.ch, s.st, s.sym, s.cache, i, k, s.st.P_u[i][k]);
    DesignState moved = s.st;
    moved.P_u[i][k] = p_new;
    CovarianceBundle b2 = build_bundle(s.cfg, s.ch, moved, s.sym);
    double xi1 = weighted_sum_mse(s.cfg, s.ch, moved, b2);
    CHECK(xi1 - xi0 == doctest::Approx(delta).epsilon(1e-9));
  }

  SUBCASE("downlink block") {
    int j = 0, k = 1;
    CMat p_new = s.st.P_d[j][k] + 0.2 * cgauss_mat(g, s.cfg.M_c, s.cfg.D_d[j]);
    double delta =
        xi_block_dl(s.cfg, s.ch, s.st, s.sym, s.cache, j, k, p_new) -
        xi_block_dl(s.cfg, s.ch, s.st, s.sym, s.cache, j, k, s.st.P_d[j][k]);
    DesignState moved = s.st;
    moved.P_d[j][k] = p_new;
    CovarianceBundle b2 = build_bundle(s.cfg, s.ch, moved, s.sym);
    double xi1 = weighted_sum_mse(s.cfg, s.ch, moved, b2);
    CHECK(xi1 - xi0 == doctest::Approx(delta).epsilon(1e-9));
  }

  SUBCASE("radar-code row") {
    int k = 3;
    CVec a_new = s.st.a_row(k) + 0.2 * cgauss_vec(g, s.cfg.M_r);
    double delta = xi_block_a(s.cfg, s.ch, s.st, s.sym, s.cache, k, a_new) -
                   xi_block_a(s.cfg, s.ch, s.st, s.sym, s.cache, k, s.st.a_row(k));
    DesignState moved = s.st;
    moved.A.row(k) = a_new.transpose();
    CovarianceBundle b2 = build_bundle(s.cfg, s.ch, moved, s.sym);
    double xi1 = weighted_sum_mse(s.cfg, s.ch, moved, b2);
    CHECK(xi1 - xi0 == doctest::Approx(delta).epsilon(1e-9));
  }
}

TEST_CASE("assembled uplink system solves to a small residual") {
  Scene s = make_scene(12);
  RateGradients rg = rate_gradients(s.cfg, s.ch, s.st, 0);
  std::vector<double> mu_u{0.5}, mu_d{0.25};
  SylvesterSystem sys = assemble_ul(s.cfg, s.ch, s.st, s.sym, s.cache, rg, 0, 0, 1.0, mu_u, mu_d);
  CMat p = solve_sylvester(sys);
  CHECK(sylvester_residual(sys, p) < 1e-10);
  SylvesterSystem sysd =
      assemble_dl(s.cfg, s.ch, s.st, s.sym, s.cache, rg, 0, 0, 1.0, mu_u, mu_d);
  CHECK(sylvester_residual(sysd, solve_sylvester(sysd)) < 1e-10);
  SylvesterSystem sysr = assemble_radar(s.cfg, s.ch, s.st, s.sym, s.cache, rg, 0, mu_u, mu_d);
  CHECK(sylvester_residual(sysr, solve_sylvester(sysr)) < 1e-10);
}

TEST_CASE("dual loops never regress the objective and keep xi_total consistent") {
  for (uint64_t seed : {21, 22, 23}) {
    Scene s = make_scene(seed);
    double xi_total = weighted_sum_mse(s.cfg, s.ch, s.st, s.b);
    double before = xi_total;
    SubgradInfo iu = subgradient_ul(s.cfg, s.ch, s.st, s.sym, s.cache, 0, 0, 50,
                                    s.cfg.R_UL, xi_total);
    CHECK(xi_total <= before + 1e-12);
    CHECK(iu.xi_final == doctest::Approx(xi_total));
    CHECK(iu.lambda >= 0.0);
    CHECK(iu.mu >= 0.0);

    double mid = xi_total;
    subgradient_dl(s.cfg, s.ch, s.st, s.sym, s.cache, 0, 0, 50, s.cfg.R_DL, xi_total);
    CHECK(xi_total <= mid + 1e-12);

    double pre_radar = xi_total;
    solve_radar_code(s.cfg, s.ch, s.st, s.sym, s.cache, 0, xi_total);
    CHECK(xi_total <= pre_radar + 1e-12);

    // the running objective matches a from-scratch evaluation
    CovarianceBundle fresh = build_bundle(s.cfg, s.ch, s.st, s.sym);
    double xi_fresh = weighted_sum_mse(s.cfg, s.ch, s.st, fresh);
    CHECK(xi_total == doctest::Approx(xi_fresh).epsilon(1e-8));
  }
}

TEST_CASE("dual loop rejects non-positive iteration budgets") {
  Scene s = make_scene(31);
  double xi = weighted_sum_mse(s.cfg, s.ch, s.st, s.b);
  CHECK_THROWS_AS(subgradient_ul(s.cfg, s.ch, s.st, s.sym, s.cache, 0, 0, 0, 0.1, xi),
                  std::invalid_argument);
  CHECK_THROWS_AS(subgradient_dl(s.cfg, s.ch, s.st, s.sym, s.cache, 0, 0, -3, 0.1, xi),
                  std::invalid_argument);
}

TEST_CASE("solved blocks are stationary points of the block Lagrangian") {
  // gradient of Xi + lambda*||P||^2 - sum mu*R_linearized vanishes at the
  // Sylvester solution; evaluated with the production gradient pieces
  Scene s = make_scene(41);
  int i = 0, k = 1;
  RateGradients rg = rate_gradients(s.cfg, s.ch, s.st, k);
  std::vector<double> mu_u{0.7}, mu_d{0.3};
  double lambda = 0.9;
  SylvesterSystem sys =
      assemble_ul(s.cfg, s.ch, s.st, s.sym, s.cache, rg, i, k, lambda, mu_u, mu_d);
  CMat p = solve_sylvester(sys);
  DesignState at = s.st;
  at.P_u[i][k] = p;
  CMat g_xi = grad_xi_pu(s.cfg, s.ch, at, s.sym, s.cache, i, k);
  CMat g_l = g_xi + 2.0 * lambda * p;
  for (int q = 0; q < s.cfg.I; ++q) g_l -= mu_u[q] * rg.dRu_dPu[q][i];
  for (int g = 0; g < s.cfg.J; ++g) g_l -= mu_d[g] * rg.dRd_dPu[g][i];
  double scale = std::max(1.0, g_xi.norm());
  CHECK(g_l.norm() < 1e-8 * scale);
}
