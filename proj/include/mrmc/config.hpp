#pragma once
// Scenario configuration: dimensions, powers, noise levels, weights,
// iteration caps, and delay/symbol indices.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mrmc {

struct SystemConfig {
  // dimensions
  int M_r = 4, N_r = 4, M_c = 4, N_c = 4;
  int I = 2, J = 2;
  std::vector<int> N_u, D_u;  // per UL UE
  std::vector<int> N_d, D_d;  // per DL UE
  int K = 8, N = 32;
  // symbol / delay indices
  int n_t = 4, n_rB = 2, n_rd = 3, n_u = 2, n_Bm = 3;
  // powers (linear)
  double P_B = 0.01, P_U = 0.01;
  std::vector<double> P_r;       // per radar Tx
  std::vector<double> gamma_par; // PAR bounds (linear), per radar Tx
  // noise and interference levels (linear)
  double sigma2_r = 1e-3, sigma2_B = 1e-3, sigma2_d = 1e-3;
  double sigma2_c = 0.1;    // clutter power (CNR 20 dB over sigma2_r)
  double sigma2_SI = 1.0;   // SI attenuation (0 dB)
  double K_B = 1.0;         // Rician factor of the SI channel
  double kappa = 1.0;       // Rician factor of radar-to-comms direct paths
  double eta2_CSI = 0.0;
  // second-order statistics of radar-side priors
  double sigma2_rt = 1.0;   // target gain variance, radar paths
  double sigma2_Bt = 1.0;   // target gain variance, BS paths
  double sigma2_Bm = 1.0;   // BS -> radar Rx direct-path gain variance
  double sigma2_U = 1.0;    // UL UE -> radar Rx direct-path gain variance
  // CWSM weights
  std::vector<double> alpha_r, alpha_u, alpha_d;
  // QoS thresholds (bits/s/Hz); negative => derive from SNRs per the
  // default threshold formulas (see qos_thresholds)
  double R_UL = -1.0, R_DL = -1.0;
  // iteration caps
  int ell_max = 2000, iota_max = 1, t_u_max = 200, t_d_max = 200;
  uint64_t seed = 1;

  int M() const { return M_r + M_c; }
  int sum_D_d() const;
  int sum_N_u() const;

  // Fill per-UE/per-Tx vectors and weights that were left empty with the
  // standard defaults (2 antennas / 2 streams, uniform weights, ...).
  void finalize();
  // Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

SystemConfig default_config();

// QoS thresholds derived from the configured SNRs (bits/s/Hz).
void qos_thresholds(const SystemConfig& cfg, double& r_ul, double& r_dl);
// cfg with R_UL/R_DL resolved (formula applied when negative).
SystemConfig resolved(const SystemConfig& cfg);

// Flat key/value text config. Unknown keys are rejected. Values may carry a
// "dB" suffix (power ratio, 10^(x/10)). See README for the schema.
SystemConfig parse_config_text(const std::string& text);
SystemConfig load_config_file(const std::string& path);
std::string config_to_text(const SystemConfig& cfg);
// Apply a single "key=value" override.
void apply_override(SystemConfig& cfg, const std::string& key, const std::string& value);

}  // namespace mrmc
