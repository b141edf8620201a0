#include "adaptba/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace adaptba {

void SimConfig::validate() const {
    if (!(window_radius >= 10.0) || !std::isfinite(window_radius))
        throw std::invalid_argument("sim.window_radius: must be >= 10 (units of R)");
    if (realizations < 1) throw std::invalid_argument("sim.realizations: must be >= 1");
    if (fading_draws < 1) throw std::invalid_argument("sim.fading_draws: must be >= 1");
}

namespace {

void check_all(const NetworkParams& net, const BandwidthConfig& ba, const SimConfig& sim) {
    net.validate();
    ba.validate();
    sim.validate();
}

void check_typical(const BandwidthConfig& ba, int k, bool allow_mixture) {
    if ((k == 0 && allow_mixture) || (k >= 1 && k <= ba.chunks)) return;
    throw std::domain_error("typical type k=" + std::to_string(k) + " outside [1, K]");
}

// Closed-form per-interferer factor given the distance, for a type-k receiver.
class ConditionalKernel {
public:
    ConditionalKernel(const NetworkParams& net, const BandwidthConfig& ba, int k, double theta) : net_(net) {
        const std::vector<double> w = overlap_mixture(ba, k);
        for (int t = 1; t <= k; ++t) {
            if (w[static_cast<std::size_t>(t)] == 0.0) continue;
            weight_.push_back(w[static_cast<std::size_t>(t)]);
            scale_.push_back(theta * t / k);
        }
    }

    double operator()(const NetworkRealization& real) const {
        double log_p = 0.0;
        for (const Interferer& x : real.interferers) {
            const double g = net_.gain_ratio(x.distance);
            double c = 0.0;
            for (std::size_t j = 0; j < weight_.size(); ++j) {
                const double z = scale_[j] * g;
                c += weight_[j] * z / (1.0 + z);
            }
            log_p += std::log1p(-c);
        }
        return std::exp(log_p);
    }

private:
    const NetworkParams& net_;
    std::vector<double> weight_;
    std::vector<double> scale_;
};

double binomial_se(double p, std::int64_t n) { return std::sqrt(std::max(p * (1.0 - p), 0.0) / n); }

}  // namespace

NetworkRealization sample_realization(const NetworkParams& net, const BandwidthConfig& ba, const SimConfig& sim,
                                      int k_typical, Rng& rng) {
    check_typical(ba, k_typical, true);
    const TypeSampler draw_type(ba);
    const double radius = sim.window_radius * net.link_distance;

    NetworkRealization real;
    real.typical_type = k_typical == 0 ? draw_type(rng) : k_typical;
    real.typical_chunks = sample_chunk_set(ba, real.typical_type, rng);
    std::exponential_distribution<double> fading(1.0);
    real.typical_fading = fading(rng);

    std::poisson_distribution<std::int64_t> count(net.lambda * std::numbers::pi * radius * radius);
    const std::int64_t n = count(rng);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    real.interferers.resize(static_cast<std::size_t>(n));
    for (Interferer& x : real.interferers) {
        const double r = radius * std::sqrt(unit(rng));
        const double phi = 2.0 * std::numbers::pi * unit(rng);
        x.x = r * std::cos(phi);
        x.y = r * std::sin(phi);
        x.distance = r;
        x.type = draw_type(rng);
        x.chunks = sample_chunk_set(ba, x.type, rng);
        x.fading = fading(rng);
    }
    return real;
}

void redraw_marks(NetworkRealization& real, const BandwidthConfig& ba, Rng& rng) {
    const TypeSampler draw_type(ba);
    std::exponential_distribution<double> fading(1.0);
    real.typical_chunks = sample_chunk_set(ba, real.typical_type, rng);
    real.typical_fading = fading(rng);
    for (Interferer& x : real.interferers) {
        x.type = draw_type(rng);
        x.chunks = sample_chunk_set(ba, x.type, rng);
        x.fading = fading(rng);
    }
}

double normalized_interference(const NetworkRealization& real, const NetworkParams& net) {
    double total = 0.0;
    for (const Interferer& x : real.interferers) {
        const int t = real.typical_chunks.overlap(x.chunks);
        if (t > 0) total += t * x.fading * net.pathloss.gain(x.distance);
    }
    return total;
}

double sir_of_realization(const NetworkRealization& real, const NetworkParams& net) {
    const double interference = normalized_interference(real, net);
    if (interference == 0.0) return kInfiniteSir;
    return real.typical_type * real.typical_fading * net.signal_gain() / interference;
}

double conditional_success_prob(const NetworkRealization& real, const NetworkParams& net,
                                const BandwidthConfig& ba, int k, double theta) {
    check_typical(ba, k, false);
    if (!(theta > 0.0)) throw std::domain_error("SIR threshold theta must be > 0");
    return ConditionalKernel(net, ba, k, theta)(real);
}

double conditional_success_prob_empirical(const NetworkRealization& real, const NetworkParams& net,
                                          const BandwidthConfig& ba, double theta, int draws, Rng& rng) {
    if (draws < 1) throw std::invalid_argument("draws must be >= 1");
    NetworkRealization work = real;
    int hits = 0;
    for (int d = 0; d < draws; ++d) {
        redraw_marks(work, ba, rng);
        if (sir_of_realization(work, net) > theta) ++hits;
    }
    return static_cast<double>(hits) / draws;
}

std::vector<EstimateWithCI> estimate_success_prob(const NetworkParams& net, const BandwidthConfig& ba,
                                                  const SimConfig& sim, int k, std::span<const double> thetas) {
    check_all(net, ba, sim);
    check_typical(ba, k, true);
    const auto sirs = map_streams(sim.execution, sim.realizations, sim.seed, [&](std::int64_t, Rng& rng) {
        return sir_of_realization(sample_realization(net, ba, sim, k, rng), net);
    });
    std::vector<EstimateWithCI> out;
    out.reserve(thetas.size());
    for (double theta : thetas) {
        std::int64_t hits = 0;
        for (double s : sirs) hits += s > theta ? 1 : 0;
        const double p = static_cast<double>(hits) / sim.realizations;
        out.push_back({p, binomial_se(p, sim.realizations), sim.realizations});
    }
    return out;
}

EstimateWithCI estimate_success_prob(const NetworkParams& net, const BandwidthConfig& ba, const SimConfig& sim,
                                     int k, double theta) {
    const double thetas[] = {theta};
    return estimate_success_prob(net, ba, sim, k, thetas).front();
}

std::vector<double> sample_conditional_success(const NetworkParams& net, const BandwidthConfig& ba,
                                               const SimConfig& sim, int k, double theta) {
    check_all(net, ba, sim);
    check_typical(ba, k, false);
    if (!(theta > 0.0)) throw std::domain_error("SIR threshold theta must be > 0");
    const ConditionalKernel closed_form(net, ba, k, theta);
    return map_streams(sim.execution, sim.realizations, sim.seed, [&](std::int64_t, Rng& rng) {
        const NetworkRealization real = sample_realization(net, ba, sim, k, rng);
        if (sim.conditional == ConditionalMode::ClosedFormGivenPhi) return closed_form(real);
        return conditional_success_prob_empirical(real, net, ba, theta, sim.fading_draws, rng);
    });
}

EstimateWithCI estimate_conditional_mean(const NetworkParams& net, const BandwidthConfig& ba, const SimConfig& sim,
                                         int k, double theta) {
    const std::vector<double> ps = sample_conditional_success(net, ba, sim, k, theta);
    return summarize(ps);
}

std::vector<EstimateWithCI> estimate_meta_distribution(const NetworkParams& net, const BandwidthConfig& ba,
                                                       const SimConfig& sim, int k, double theta,
                                                       std::span<const double> x_grid) {
    const std::vector<double> ps = sample_conditional_success(net, ba, sim, k, theta);
    std::vector<EstimateWithCI> out;
    out.reserve(x_grid.size());
    for (double x : x_grid) {
        std::int64_t above = 0;
        for (double p : ps) above += p > x ? 1 : 0;
        const double f = static_cast<double>(above) / sim.realizations;
        out.push_back({f, binomial_se(f, sim.realizations), sim.realizations});
    }
    return out;
}

ThroughputEstimate estimate_throughput(const NetworkParams& net, const BandwidthConfig& ba, const SimConfig& sim,
                                       int k) {
    check_all(net, ba, sim);
    check_typical(ba, k, false);
    const double bandwidth = static_cast<double>(k) / ba.chunks;
    const auto rates = map_streams(sim.execution, sim.realizations, sim.seed, [&](std::int64_t, Rng& rng) {
        const double sir = sir_of_realization(sample_realization(net, ba, sim, k, rng), net);
        return bandwidth * std::log2(1.0 + std::min(sir, kSirCap));
    });
    const double capped_rate = bandwidth * std::log2(1.0 + kSirCap);
    std::int64_t capped = 0;
    for (double r : rates) capped += r == capped_rate ? 1 : 0;
    return {summarize(rates), static_cast<double>(capped) / sim.realizations};
}

EstimateWithCI estimate_mean_interference(const NetworkParams& net, const BandwidthConfig& ba,
                                          const SimConfig& sim, int k) {
    check_all(net, ba, sim);
    check_typical(ba, k, false);
    const auto powers = map_streams(sim.execution, sim.realizations, sim.seed, [&](std::int64_t, Rng& rng) {
        return ba.power_per_chunk * normalized_interference(sample_realization(net, ba, sim, k, rng), net);
    });
    return summarize(powers);
}

EstimateWithCI estimate_interferer_count(const NetworkParams& net, const BandwidthConfig& ba, const SimConfig& sim) {
    check_all(net, ba, sim);
    const auto counts = map_streams(sim.execution, sim.realizations, sim.seed, [&](std::int64_t, Rng& rng) {
        return static_cast<double>(sample_realization(net, ba, sim, 1, rng).interferers.size());
    });
    return summarize(counts);
}

EstimateWithCI summarize(std::span<const double> samples) {
    EstimateWithCI e;
    e.samples = static_cast<std::int64_t>(samples.size());
    if (samples.empty()) return e;
    double mean = 0.0;
    for (double s : samples) mean += s;
    mean /= static_cast<double>(samples.size());
    double ss = 0.0;
    for (double s : samples) ss += (s - mean) * (s - mean);
    e.value = mean;
    if (samples.size() > 1)
        e.std_error = std::sqrt(ss / static_cast<double>(samples.size() - 1) / static_cast<double>(samples.size()));
    return e;
}

}  // namespace adaptba
