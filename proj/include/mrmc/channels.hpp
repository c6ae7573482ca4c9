#pragma once
// Channel and symbol generation for one scenario realization.

#include <vector>

#include "mrmc/config.hpp"
#include "mrmc/linalg.hpp"

namespace mrmc {

struct ChannelSet {
  // comms matrices
  std::vector<CMat> H_iB;               // [i] N_c x N_u[i], UL UE -> BS
  std::vector<CMat> H_Bj;               // [j] N_d[j] x M_c, BS -> DL UE
  std::vector<std::vector<CMat>> H_ij;  // [i][j] N_d[j] x N_u[i]
  CMat H_BB;                            // N_c x M_c, BS self-interference
  CMat H_rB;                            // N_c x M_r, radar -> BS
  std::vector<CMat> H_rj;               // [j] N_d[j] x M_r, radar -> DL UE
  // radar-side realizations (used by Monte Carlo validation only; the
  // optimizer consumes their second-order statistics from SystemConfig)
  std::vector<std::vector<cxd>> alpha_rt;   // [m_r][n_r] target gain
  std::vector<std::vector<double>> f_rt;    // [m_r][n_r] normalized Doppler
  std::vector<CVec> alpha_Bt;               // [n_r] (M_c) BS->target->Rx gains
  std::vector<double> f_Bt;                 // [n_r]
  std::vector<CVec> h_c;                    // [n_r] (M_r) clutter gains
  std::vector<CVec> alpha_Bm;               // [n_r] (M_c) BS direct path
  std::vector<std::vector<CVec>> alpha_iU;  // [i][n_r] (N_u[i]) UL direct path
};

struct SymbolSet {
  // d_u[i][k] is D_u[i] x N (column l = symbol vector of slot l); d_d likewise
  std::vector<std::vector<CMat>> d_u;
  std::vector<std::vector<CMat>> d_d;
};

ChannelSet generate_channels(const SystemConfig& cfg, uint64_t seed);
// Additive CN(0, eta2) error on every comms matrix; radar statistics untouched.
ChannelSet perturb_csi(const ChannelSet& ch, const SystemConfig& cfg, double eta2, uint64_t seed);
// Unit-energy QPSK streams for every frame/slot.
SymbolSet generate_symbols(const SystemConfig& cfg, uint64_t seed);

}  // namespace mrmc
