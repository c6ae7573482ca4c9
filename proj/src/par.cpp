#include "mrmc/par.hpp"

#include <stdexcept>

namespace mrmc {

double par_of(const CVec& a) {
  double pw = a.squaredNorm();
  if (pw == 0.0) return 1.0;
  double peak = 0.0;
  for (int k = 0; k < a.size(); ++k) peak = std::max(peak, std::norm(a(k)));
  return (double)a.size() * peak / pw;
}

bool par_feasible(const CVec& a, double p_r, double gamma, double pow_tol, double par_tol) {
  double pw = a.squaredNorm();
  if (std::abs(pw - p_r) > pow_tol * p_r) return false;
  double peak = 0.0;
  for (int k = 0; k < a.size(); ++k) peak = std::max(peak, std::norm(a(k)));
  return (double)a.size() * peak / p_r <= gamma + par_tol;
}

CVec par_project(const CVec& a_prime, double p_r, double gamma) {
  int K = (int)a_prime.size();
  if (gamma < 1.0 || gamma > (double)K)
    throw std::invalid_argument("par_project: gamma must lie in [1, K]");
  double sigma = std::sqrt(p_r * gamma / (double)K);
  double nrm = a_prime.norm();
  if (nrm == 0.0)  // all-zero input: constant-modulus with zero phases
    return CVec::Constant(K, std::sqrt(p_r / (double)K));
  CVec b = a_prime / nrm;  // unit norm before projection

  RVec mag(K), phc(K), phs(K);
  for (int k = 0; k < K; ++k) {
    mag(k) = std::abs(b(k));
    if (mag(k) > 0.0) {
      phc(k) = b(k).real() / mag(k);
      phs(k) = b(k).imag() / mag(k);
    } else {  // zero entry: phase 0
      phc(k) = 1.0;
      phs(k) = 0.0;
    }
  }

  // clip-and-rescale: entries whose scaled magnitude exceeds sigma get pinned
  // there; the rest share the remaining power proportionally. At most K passes
  // because each pass pins at least one new index.
  std::vector<bool> clipped(K, false);
  RVec out = RVec::Zero(K);
  for (int pass = 0; pass < K; ++pass) {
    double pinned = 0.0, free_pw = 0.0;
    int free_n = 0;
    for (int k = 0; k < K; ++k) {
      if (clipped[k]) {
        pinned += sigma * sigma;
      } else {
        free_pw += mag(k) * mag(k);
        ++free_n;
      }
    }
    double rem = std::max(p_r - pinned, 0.0);
    bool changed = false;
    if (free_pw == 0.0) {
      // remaining entries all have zero magnitude: spread the leftover power
      double m = free_n > 0 ? std::sqrt(rem / (double)free_n) : 0.0;
      for (int k = 0; k < K; ++k)
        if (!clipped[k]) out(k) = m;
    } else {
      double rho = std::sqrt(rem / free_pw);
      for (int k = 0; k < K; ++k) {
        if (clipped[k]) continue;
        double m = rho * mag(k);
        if (m > sigma + 1e-15 * sigma) {
          clipped[k] = true;
          changed = true;
        } else {
          out(k) = m;
        }
      }
    }
    if (!changed) break;
  }
  CVec a(K);
  for (int k = 0; k < K; ++k) {
    double m = clipped[k] ? sigma : out(k);
    a(k) = cxd(m * phc(k), m * phs(k));
  }
  return a;
}

CMat project_code_matrix(const CMat& a_prime, const SystemConfig& cfg) {
  CMat a(a_prime.rows(), a_prime.cols());
  for (int m = 0; m < (int)a_prime.cols(); ++m)
    a.col(m) = par_project(a_prime.col(m), cfg.P_r[m], cfg.gamma_par[m]);
  return a;
}

}  // namespace mrmc
