#pragma once

#include "adaptba/allocation.hpp"
#include "adaptba/pathloss.hpp"

namespace adaptba {

/// C = pi R^2 Gamma(1+delta) Gamma(1-delta). Power-law path loss only.
double interference_constant(const NetworkParams& net);

/// C_b = lambda pi (c0 + R^alpha) Gamma(1+delta) Gamma(1-delta). Bounded path loss only.
double bounded_interference_constant(const NetworkParams& net);

/// Success probability of a type-k link against type-i interferers alone.
/// theta is the linear SIR threshold and must be > 0.
double success_prob_ki(const NetworkParams& net, const BandwidthConfig& ba, int k, int i, double theta);

/// Product over interferer types of success_prob_ki.
double success_prob_k(const NetworkParams& net, const BandwidthConfig& ba, int k, double theta);

/// Type mixture sum_k p_k success_prob_k.
double success_prob_overall(const NetworkParams& net, const BandwidthConfig& ba, double theta);

/// A throughput integral truncated at y_max, with the estimated mass beyond it.
struct ThroughputResult {
    double value = 0.0;
    double y_max = 0.0;
    /// Estimate of the neglected integral over (y_max, inf), already scaled like value.
    double tail_estimate = 0.0;
    /// The integrand had not fallen below the cutoff at the hardest y limit
    /// (near-zero interference). value is then a lower bound.
    bool truncated = false;
};

/// Options for the Shannon integral over y = log2(1 + SIR).
struct ThroughputOptions {
    double abs_tol = 1e-8;
    double cutoff = 1e-10;
    double y_limit = 512.0;
};

/// (k/K) * integral_0^inf p_s^(k)(2^y - 1) dy.
ThroughputResult shannon_throughput_k(const NetworkParams& net, const BandwidthConfig& ba, int k,
                                      const ThroughputOptions& opt = {});
/// Throughput divided by the transmit power k P.
ThroughputResult shannon_throughput_per_joule_k(const NetworkParams& net, const BandwidthConfig& ba, int k,
                                                const ThroughputOptions& opt = {});
/// Throughput divided by the number of chunks k (per-Joule times P).
ThroughputResult shannon_throughput_per_hz_k(const NetworkParams& net, const BandwidthConfig& ba, int k,
                                             const ThroughputOptions& opt = {});

ThroughputResult shannon_throughput_overall(const NetworkParams& net, const BandwidthConfig& ba,
                                            const ThroughputOptions& opt = {});
ThroughputResult shannon_throughput_per_joule_overall(const NetworkParams& net, const BandwidthConfig& ba,
                                                      const ThroughputOptions& opt = {});

}  // namespace adaptba
