#pragma once
// Mutual-information metrics, MMSE receive filters / weights, MSE matrices,
// and the weighted-sum-MSE surrogate objective.

#include "mrmc/covariance.hpp"

namespace mrmc {

struct MiBreakdown {
  std::vector<double> I_r;               // [n_r]
  std::vector<std::vector<double>> I_u;  // [i][k]
  std::vector<std::vector<double>> I_d;  // [j][k]
  double I_cwsm = 0.0;                   // weighted total
  double I_fd = 0.0;                     // comms-only part
};

// Channel MI (bits) of each link, i.e. the MI achieved by MMSE filtering.
double mi_ul(const CovarianceBundle& b, int i, int k);
double mi_dl(const CovarianceBundle& b, int j, int k);
double mi_radar(const CovarianceBundle& b, int n_r);

// MI through the receive filters currently stored in the design state.
double mi_ul_filtered(const DesignState& st, const CovarianceBundle& b, int i, int k);
double mi_dl_filtered(const DesignState& st, const CovarianceBundle& b, int j, int k);
double mi_radar_filtered(const DesignState& st, const CovarianceBundle& b, int n_r);

MiBreakdown mutual_information(const SystemConfig& cfg, const CovarianceBundle& b);
double cwsm(const SystemConfig& cfg, const CovarianceBundle& b);

// MSE matrices for the filters in `st` and their MMSE closed forms.
CMat mse_ul(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
            const CovarianceBundle& b, int i, int k);
CMat mse_dl(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
            const CovarianceBundle& b, int j, int k);
CMat mse_radar(const SystemConfig& cfg, const DesignState& st, const CovarianceBundle& b, int n_r);
CMat mmse_ul(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
             const CovarianceBundle& b, int i, int k);
CMat mmse_dl(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
             const CovarianceBundle& b, int j, int k);
CMat mmse_radar(const SystemConfig& cfg, const DesignState& st, const CovarianceBundle& b, int n_r);

// Overwrite the receive filters in `st` with their MMSE solutions.
void update_mmse_filters(const SystemConfig& cfg, const ChannelSet& ch, DesignState& st,
                         const CovarianceBundle& b);
// Overwrite the MSE weights with the optimal ones (inverse MMSE matrix for the
// comms links, rank-M pseudo-inverse for the radar).
void update_optimal_weights(const SystemConfig& cfg, const ChannelSet& ch, DesignState& st,
                            const CovarianceBundle& b);

// Rates in bits through the MMSE-matrix route (identical to the SINR-form
// channel MI up to numerical error).
double rate_ul_mmse(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                    const CovarianceBundle& b, int i, int k);
double rate_dl_mmse(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                    const CovarianceBundle& b, int j, int k);
double rate_radar_mmse(const SystemConfig& cfg, const DesignState& st, const CovarianceBundle& b,
                       int n_r);

// Xi: weighted sum of tr(W E) over every link and radar Rx.
double weighted_sum_mse(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                        const CovarianceBundle& b);
// Constant (in the transmit design, once W is fixed) offset that turns Xi into
// the MI surrogate: Xi' = Xi - offset satisfies Xi' = -I_CWSM at the MMSE
// filters with optimal weights.
double xi_offset(const SystemConfig& cfg, const DesignState& st, const CovarianceBundle& b);
double xi_prime(const SystemConfig& cfg, const ChannelSet& ch, const DesignState& st,
                const CovarianceBundle& b);

// Smallest QoS slack min(rate - threshold) over all UL/DL links and frames.
double min_rate_slack(const SystemConfig& cfg, const CovarianceBundle& b, double r_ul, double r_dl);

// Frobenius-norm powers of the transmit blocks.
double ul_power(const DesignState& st, int i, int k);
double dl_frame_power(const DesignState& st, const SystemConfig& cfg, int k);
double radar_power(const DesignState& st);

}  // namespace mrmc
