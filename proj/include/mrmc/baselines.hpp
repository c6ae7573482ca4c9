#pragma once
// Reference designs the co-design is compared against. Baselines that pin the
// precoders still optimize the radar code and vice versa.

#include "mrmc/optimizer.hpp"

namespace mrmc {

enum class DesignKind {
  co_design,
  uniform_precoding,
  random_precoding,
  random_radar_code,
  uncoded_radar,
};

DesignKind design_kind_from_string(const std::string& s);
std::string to_string(DesignKind k);

// Which side the baseline holds fixed while the other side is optimized.
bool freezes_precoders(DesignKind k);
bool freezes_radar(DesignKind k);

// Initial state for the given design: the pinned side gets its baseline
// construction, the free side gets the deterministic initialization.
DesignState baseline_design(DesignKind kind, const SystemConfig& cfg, const ChannelSet& ch,
                            const SymbolSet& sym, uint64_t seed);

// Construct the baseline and run the optimizer with the matching freeze flags.
DesignState run_design(DesignKind kind, const SystemConfig& cfg, const ChannelSet& ch,
                       const SymbolSet& sym, const OptimizeOptions& opt, RunReport& report);

}  // namespace mrmc
