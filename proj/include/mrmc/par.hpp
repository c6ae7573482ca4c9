#pragma once
// Column-wise projection of a radar code onto the power + PAR feasible set.

#include "mrmc/config.hpp"
#include "mrmc/linalg.hpp"

namespace mrmc {

// ||a||^2 = P_r and K*max|a_k|^2/P_r <= gamma.
bool par_feasible(const CVec& a, double p_r, double gamma, double pow_tol = 1e-9,
                  double par_tol = 1e-9);
double par_of(const CVec& a);

// Nearest (phase-preserving clip-and-rescale) feasible vector. Entries that hit
// the peak bound are fixed at magnitude sigma = sqrt(P_r*gamma/K); the rest are
// scaled by a common factor so the power constraint holds with equality.
CVec par_project(const CVec& a_prime, double p_r, double gamma);

// Apply par_project to every column of the K x M_r code matrix.
CMat project_code_matrix(const CMat& a_prime, const SystemConfig& cfg);

}  // namespace mrmc
