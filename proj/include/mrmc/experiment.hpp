#pragma once
// Monte Carlo sweeps over SNR_r / CNR / self-interference / CSI error with
// deterministic CSV + JSON output.

#include <string>
#include <vector>

#include "mrmc/baselines.hpp"

namespace mrmc {

// Sweep-variable semantics: SNR_r and CNR grids are in dB relative to the
// radar noise floor (P_r = sigma2_r*10^(v/10), sigma2_c likewise); sigma2_SI
// grids are in dB (linear 10^(v/10)); eta2_CSI grids are linear variances.
struct ExperimentSpec {
  SystemConfig cfg;            // resolved base configuration
  std::string sweep_var = "none";  // SNR_r | CNR | sigma2_SI | eta2_CSI | none
  std::vector<double> grid{0.0};
  int trials = 1;
  std::vector<DesignKind> designs{DesignKind::co_design};
  uint64_t seed = 1;
};

struct ResultRow {
  std::string sweep_var;
  double value = 0.0;
  std::string design;
  int trial = 0;
  double I_cwsm = 0.0, I_fd = 0.0, min_rate_slack = 0.0;
  int iterations = 0;
  double seconds = 0.0;
  bool failed = false;
};

// Base config with one sweep value applied; eta2 (if any) returned separately
// because CSI error perturbs the channels rather than the config.
SystemConfig apply_sweep_value(const SystemConfig& cfg, const std::string& var, double v,
                               double& eta2);

// Seed for (grid point, trial): independently reproducible per row.
uint64_t trial_seed(uint64_t master, int point, int trial);

std::vector<ResultRow> run_sweep(const ExperimentSpec& spec);

std::string csv_text(const std::vector<ResultRow>& rows);
std::string metadata_json(const ExperimentSpec& spec);  // config, hash, timestamps
void write_outputs(const ExperimentSpec& spec, const std::vector<ResultRow>& rows,
                   const std::string& out_path);  // CSV at out_path, JSON alongside

uint64_t fnv1a64(const std::string& s);

}  // namespace mrmc
