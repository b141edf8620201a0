#pragma once

#include <span>

#include "adaptba/allocation.hpp"
#include "adaptba/pathloss.hpp"

namespace adaptba {

/// S = P l(R) sum_k k p_k.
double mean_signal(const NetworkParams& net, const BandwidthConfig& ba);

/// P' = P sum_k k p_k / sum_k k p'_k, equalising the mean signal power.
double matched_power(const BandwidthConfig& ba, std::span<const double> alt_probs);

/// Campbell mean of the interference at a type-k receiver,
///   lambda pi delta c0^(delta-1) Gamma(delta) Gamma(1-delta) P sum_i p_i E[t | k, i].
/// Bounded path loss only: the power-law mean is infinite.
double mean_interference_k(const NetworkParams& net, const BandwidthConfig& ba, int k);

/// sum_k p_k mean_interference_k.
double mean_interference_overall(const NetworkParams& net, const BandwidthConfig& ba);

/// lambda' equalising the mean interference of the alternative network
/// (probabilities alt_probs, power alt_power) with the base network.
double matched_intensity(const NetworkParams& net, const BandwidthConfig& ba, std::span<const double> alt_probs,
                         double alt_power);

/// Mean signal over mean interference for a type-k user: k P l(R) / E[I_k].
double msmir_k(const NetworkParams& net, const BandwidthConfig& ba, int k);

/// Base network and its mean-matched alternative.
struct MeanModelPair {
    NetworkParams base_net;
    BandwidthConfig base_ba;
    NetworkParams alt_net;
    BandwidthConfig alt_ba;
};

/// Builds the alternative network with type mix alt_probs and (P', lambda')
/// chosen so mean signal and mean interference match the base. K is shared.
MeanModelPair match_means(const NetworkParams& net, const BandwidthConfig& ba, std::span<const double> alt_probs);

}  // namespace adaptba
