#pragma once
// Complex linear-algebra helpers shared across the library.
// All determinants are evaluated as sums of log-eigenvalues of Hermitian
// forms so that nothing overflows at the K*M = 64 scale.

#include <Eigen/Dense>
#include <complex>
#include <cmath>
#include <stdexcept>

namespace mrmc {

using cxd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

constexpr double LN2 = 0.6931471805599453;

inline double db2lin(double db) { return std::pow(10.0, db / 10.0); }
inline double lin2db(double lin) { return 10.0 * std::log10(lin); }

inline CMat hermitize(const CMat& m) { return 0.5 * (m + m.adjoint()); }

inline double herm_error(const CMat& m) {
  double n = m.norm();
  return n == 0.0 ? 0.0 : (m - m.adjoint()).norm() / n;
}

// log2 det of a Hermitian positive definite matrix.
inline double logdet2_pd(const CMat& m) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(m));
  double s = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    double ev = es.eigenvalues()(i);
    if (ev <= 0.0) throw std::runtime_error("logdet2_pd: non-positive eigenvalue");
    s += std::log2(ev);
  }
  return s;
}

// log2 pseudo-determinant over the top `rank` eigenvalues of a Hermitian PSD matrix.
inline double logpdet2_psd(const CMat& m, int rank) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(m));
  const auto& ev = es.eigenvalues();  // ascending
  double s = 0.0;
  for (int i = ev.size() - rank; i < ev.size(); ++i) {
    if (ev(i) <= 0.0) throw std::runtime_error("logpdet2_psd: rank exceeds positive spectrum");
    s += std::log2(ev(i));
  }
  return s;
}

// Moore-Penrose pseudo-inverse of a Hermitian PSD matrix restricted to its
// top `rank` eigenvalues (rank < 0: threshold at 1e-12 * max eigenvalue).
inline CMat pinv_psd(const CMat& m, int rank = -1) {
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(m));
  const auto& ev = es.eigenvalues();
  const CMat& v = es.eigenvectors();
  int n = (int)ev.size();
  double cut = rank >= 0 ? 0.0 : 1e-12 * std::max(ev(n - 1), 0.0);
  CMat out = CMat::Zero(n, n);
  int lo = rank >= 0 ? n - rank : 0;
  for (int i = std::max(lo, 0); i < n; ++i) {
    if (ev(i) > cut && ev(i) > 0.0)
      out += v.col(i) * v.col(i).adjoint() / ev(i);
  }
  return out;
}

// Inverse of a Hermitian PD matrix with an epsilon-regularization fallback
// when the condition number exceeds 1e12 (eps = 1e-12 * trace/dim).
inline CMat inv_hpd(const CMat& m, double* cond_out = nullptr) {
  CMat h = hermitize(m);
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  double lo = es.eigenvalues()(0), hi = es.eigenvalues()(es.eigenvalues().size() - 1);
  double cond = (lo > 0.0) ? hi / lo : std::numeric_limits<double>::infinity();
  if (cond_out) *cond_out = cond;
  if (!(lo > 0.0) || cond > 1e12) {
    double eps = 1e-12 * h.real().trace() / (double)h.rows();
    h += eps * CMat::Identity(h.rows(), h.cols());
    es.compute(h);
  }
  CMat out = CMat::Zero(h.rows(), h.cols());
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    out += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint() / es.eigenvalues()(i);
  return out;
}

// log2 det(I + Rsig * Rin^-1) for Hermitian PSD Rsig and Hermitian PD Rin,
// computed through a whitened Hermitian eigenproblem.
inline double logdet2_ratio(const CMat& rsig, const CMat& rin) {
  Eigen::LLT<CMat> llt(hermitize(rin));
  if (llt.info() != Eigen::Success) {
    CMat reg = hermitize(rin) + 1e-12 * rin.real().trace() / (double)rin.rows() *
                                    CMat::Identity(rin.rows(), rin.cols());
    llt.compute(reg);
  }
  CMat l = llt.matrixL();
  CMat w = l.triangularView<Eigen::Lower>().solve(hermitize(rsig));
  CMat white = l.triangularView<Eigen::Lower>().solve(w.adjoint()).adjoint();
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitize(white));
  double s = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    s += std::log2(std::max(1.0 + es.eigenvalues()(i), 1e-300));
  return s;
}

// Mutual information (bits) after the linear filter u (output_dim x obs_dim):
// log2 |I + (u Rsig u^H)(u Rin u^H)^-1|. MI is invariant under invertible
// output transforms, so it is evaluated on an orthonormal basis of the row
// space of u; rank-deficient filters (including u = 0) are handled exactly.
inline double mi_filtered_bits(const CMat& u, const CMat& rsig, const CMat& rin) {
  if (u.size() == 0 || u.norm() == 0.0) return 0.0;
  Eigen::ColPivHouseholderQR<CMat> qr(u.adjoint());  // obs_dim x output_dim
  int r = (int)qr.rank();
  if (r == 0) return 0.0;
  CMat q = qr.householderQ() * CMat::Identity(u.cols(), r);  // obs_dim x r
  CMat m1 = q.adjoint() * hermitize(rsig) * q;
  CMat m2 = q.adjoint() * hermitize(rin) * q;
  return logdet2_ratio(m1, m2);
}

}  // namespace mrmc
