#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "adaptba/allocation.hpp"
#include "adaptba/parallel.hpp"
#include "adaptba/pathloss.hpp"
#include "adaptba/random.hpp"

namespace adaptba {

enum class ConditionalMode { ClosedFormGivenPhi, FullyEmpirical };

struct SimConfig {
    /// Radius of the simulated disk around the receiver, in units of R.
    double window_radius = 50.0;
    std::int64_t realizations = 10000;
    int fading_draws = 1000;
    std::uint64_t seed = 1;
    ConditionalMode conditional = ConditionalMode::ClosedFormGivenPhi;
    Execution execution = Execution::Parallel;

    void validate() const;

    bool operator==(const SimConfig&) const = default;
};

struct Interferer {
    double x = 0.0;
    double y = 0.0;
    double distance = 0.0;
    int type = 1;
    ChunkSet chunks;
    double fading = 1.0;
};

/// Receiver at the origin, its transmitter at (R, 0), and the interferers of
/// one PPP draw in the simulation disk (the typical transmitter is not among them).
struct NetworkRealization {
    int typical_type = 1;
    ChunkSet typical_chunks;
    double typical_fading = 1.0;
    std::vector<Interferer> interferers;
};

struct EstimateWithCI {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
};

inline constexpr double kInfiniteSir = std::numeric_limits<double>::infinity();
/// SIR used in place of the infinite sentinel inside log2(1 + SIR).
inline constexpr double kSirCap = 1e9;

NetworkRealization sample_realization(const NetworkParams& net, const BandwidthConfig& ba, const SimConfig& sim,
                                      int k_typical, Rng& rng);

/// Draws fresh types, chunk sets (typical and interferers) and fading for
/// the given positions.
void redraw_marks(NetworkRealization& real, const BandwidthConfig& ba, Rng& rng);

/// Interference sum_x t_x h_x l(x), per unit transmit power.
double normalized_interference(const NetworkRealization& real, const NetworkParams& net);

/// k h_0 l(R) / sum_x t_x h_x l(x); kInfiniteSir when the denominator is 0.
double sir_of_realization(const NetworkRealization& real, const NetworkParams& net);

/// prod_x sum_i p_i sum_t P(t|k,i) / (1 + theta (t/k) l(x)/l(R)): fading and
/// channel access averaged, positions fixed.
double conditional_success_prob(const NetworkRealization& real, const NetworkParams& net,
                                const BandwidthConfig& ba, int k, double theta);

/// Average of 1{SIR > theta} over `draws` redraws of all marks with positions fixed.
double conditional_success_prob_empirical(const NetworkRealization& real, const NetworkParams& net,
                                          const BandwidthConfig& ba, double theta, int draws, Rng& rng);

/// Fraction of realizations with SIR > theta, one threshold per entry of
/// thetas. All thresholds share the same realizations. k = 0 draws the
/// typical type from the type mix (overall success probability).
std::vector<EstimateWithCI> estimate_success_prob(const NetworkParams& net, const BandwidthConfig& ba,
                                                  const SimConfig& sim, int k, std::span<const double> thetas);
EstimateWithCI estimate_success_prob(const NetworkParams& net, const BandwidthConfig& ba, const SimConfig& sim,
                                     int k, double theta);

/// Per-realization conditional success probabilities (sim.conditional picks
/// the closed form or the fully empirical average).
std::vector<double> sample_conditional_success(const NetworkParams& net, const BandwidthConfig& ba,
                                               const SimConfig& sim, int k, double theta);

/// Mean of the conditional success probability over realizations.
EstimateWithCI estimate_conditional_mean(const NetworkParams& net, const BandwidthConfig& ba, const SimConfig& sim,
                                         int k, double theta);

/// Empirical P(P_s > x) on x_grid.
std::vector<EstimateWithCI> estimate_meta_distribution(const NetworkParams& net, const BandwidthConfig& ba,
                                                       const SimConfig& sim, int k, double theta,
                                                       std::span<const double> x_grid);

struct ThroughputEstimate {
    EstimateWithCI rate;
    /// Fraction of realizations with zero interference (SIR capped at kSirCap).
    double capped_fraction = 0.0;
};

/// (k/K) E[log2(1 + SIR)].
ThroughputEstimate estimate_throughput(const NetworkParams& net, const BandwidthConfig& ba, const SimConfig& sim,
                                       int k);

/// Mean of sum_x P t_x h_x l(x) at a type-k receiver.
EstimateWithCI estimate_mean_interference(const NetworkParams& net, const BandwidthConfig& ba,
                                          const SimConfig& sim, int k);

/// Mean number of interferers per realization.
EstimateWithCI estimate_interferer_count(const NetworkParams& net, const BandwidthConfig& ba, const SimConfig& sim);

/// Sample mean and standard error of the mean.
EstimateWithCI summarize(std::span<const double> samples);

}  // namespace adaptba
