#pragma once
// Outer optimization: WMMSE sweeps over all blocks, PAR projection, filter
// refresh, convergence tracking.

#include <string>

#include "mrmc/metrics.hpp"
#include "mrmc/par.hpp"
#include "mrmc/solvers.hpp"

namespace mrmc {

enum class InitKind { deterministic, random };

struct RunReport {
  std::vector<double> I_cwsm;      // per outer iteration (after filter refresh)
  std::vector<double> I_fd;
  std::vector<double> xi_wmmse;    // Xi at the end of each WMMSE call
  std::vector<double> qos_slack;   // min rate slack per outer iteration
  std::vector<double> xi_trace;    // Xi after every block update of the last WMMSE call
  std::string termination;         // "plateau" | "max_iterations" | "nonfinite_abort"
  int outer_iters = 0;
  bool qos_infeasible = false;     // a dual hit its cap somewhere
  bool rescale_triggered = false;  // post-hoc power rescale was needed
  double seconds = 0.0;
  double I_cwsm_final = 0.0, I_fd_final = 0.0, min_rate_slack_final = 0.0;
};

struct OptimizeOptions {
  InitKind init = InitKind::deterministic;
  uint64_t seed = 1;
  int ell_max = -1;   // < 0: use cfg.ell_max
  int iota_max = -1;  // < 0: use cfg.iota_max
  bool early_stop = true;          // plateau detection (rel change < 1e-6, 10 iters)
  bool freeze_precoders = false;   // hold {P}: optimize the radar code only
  bool freeze_radar = false;       // hold A: optimize the precoders only
};

// Both schemes scale to full power budgets; the radar code starts constant
// modulus with seeded random phases (feasible by construction).
DesignState init_deterministic(const SystemConfig& cfg, const ChannelSet& ch, const SymbolSet& sym,
                               uint64_t seed);
DesignState init_random(const SystemConfig& cfg, const ChannelSet& ch, const SymbolSet& sym,
                        uint64_t seed);

struct WmmseResult {
  std::vector<double> xi_trace;  // Xi after the initial evaluation and every block update
  bool dual_capped = false;
};

// One Algorithm-2 call: iota_max Gauss-Seidel sweeps with frozen U, W.
WmmseResult wmmse_mrmc(const SystemConfig& cfg, const ChannelSet& ch, const SymbolSet& sym,
                       DesignState& st, const std::vector<TargetModel>& target, int iota_max,
                       double r_ul, double r_dl, bool freeze_precoders = false,
                       bool freeze_radar = false);

// Full outer loop: WMMSE -> PAR projection -> feasibility rescale -> filter
// and weight refresh, with plateau-based early stopping. A caller-provided
// initial state (e.g. a baseline construction) overrides the built-in inits.
DesignState bcd_ap_mrmc(const SystemConfig& cfg, const ChannelSet& ch, const SymbolSet& sym,
                        const OptimizeOptions& opt, RunReport& report,
                        const DesignState* init_state = nullptr);

}  // namespace mrmc
