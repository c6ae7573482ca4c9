#pragma once
// Independent cross-checks used by the verification suite: finite-difference
// gradients, brute-force PAR projection, scalar closed forms, Monte Carlo
// covariance validation. These deliberately re-derive everything from first
// principles instead of calling the production formulas.

#include <functional>
#include <string>

#include "mrmc/optimizer.hpp"

namespace mrmc {

struct OracleReport {
  std::string name;
  std::string instance;  // dims / seed descriptor
  double max_rel_err = 0.0;
  double tol = 0.0;
  bool pass = false;
};

using ScalarFn = std::function<double(const CMat&)>;

// Central differences on every real/imaginary coordinate; returns the
// conjugate-coordinate gradient in the 2 df/dX* convention.
CMat fd_gradient(const ScalarFn& f, const CMat& x, double step);
// Three-step sweep picking the step whose result is most consistent with the
// others (guards against cancellation noise).
CMat fd_gradient_best(const ScalarFn& f, const CMat& x,
                      const std::vector<double>& steps = {1e-5, 1e-6, 1e-7});

// Exhaustive magnitude-profile search (phases provably preserved), K <= 3.
CVec brute_force_par(const CVec& a_prime, double p_r, double gamma, double resolution);

// Small system used across verification runs: M_r=N_r=M_c=N_c=2, I=J=1,
// single-stream users.
SystemConfig make_reduced_config(int K);

std::vector<OracleReport> fd_xi_gradient_checks(uint64_t seed);
std::vector<OracleReport> par_oracle_checks(uint64_t seed);
std::vector<OracleReport> scalar_link_suite();
OracleReport mc_covariance_check(uint64_t seed, int trials);

std::vector<OracleReport> run_all_oracles(uint64_t seed = 1);

}  // namespace mrmc
