#include "adaptba/mean_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace adaptba {

namespace {

BandwidthConfig with_probs(const BandwidthConfig& ba, std::span<const double> probs) {
    BandwidthConfig alt = ba;
    alt.type_probs.assign(probs.begin(), probs.end());
    if (alt.type_probs.size() != ba.type_probs.size())
        throw std::invalid_argument("alt_type_probs: expected " + std::to_string(ba.chunks) +
                                    " entries (K must match the base network), got " +
                                    std::to_string(alt.type_probs.size()));
    alt.validate();
    return alt;
}

// sum_k p_k sum_i p_i E[t | k, i].
double mean_overlap_mass(const BandwidthConfig& ba) {
    double s = 0.0;
    for (int k = 1; k <= ba.chunks; ++k) {
        const double pk = ba.type_prob(k);
        if (pk == 0.0) continue;
        for (int i = 1; i <= ba.chunks; ++i) {
            const double pi = ba.type_prob(i);
            if (pi == 0.0) continue;
            s += pk * pi * mean_overlap(overlap_pmf(ba.mode, ba.chunks, k, i));
        }
    }
    return s;
}

// lambda pi delta c0^(delta-1) Gamma(delta) Gamma(1-delta): Campbell integral of
// l over the plane per unit intensity, times lambda.
double campbell_prefactor(const NetworkParams& net) {
    net.validate();
    if (net.pathloss.kind != PathLossKind::Bounded)
        throw std::invalid_argument("mean interference requires bounded path loss (infinite under power law)");
    const double delta = net.pathloss.delta();
    return net.lambda * std::numbers::pi * delta * std::pow(net.pathloss.c0, delta - 1.0) * std::tgamma(delta) *
           std::tgamma(1.0 - delta);
}

}  // namespace

double mean_signal(const NetworkParams& net, const BandwidthConfig& ba) {
    net.validate();
    ba.validate();
    return ba.power_per_chunk * net.signal_gain() * ba.mean_type();
}

double matched_power(const BandwidthConfig& ba, std::span<const double> alt_probs) {
    ba.validate();
    const BandwidthConfig alt = with_probs(ba, alt_probs);
    return ba.power_per_chunk * ba.mean_type() / alt.mean_type();
}

double mean_interference_k(const NetworkParams& net, const BandwidthConfig& ba, int k) {
    ba.validate();
    if (k < 1 || k > ba.chunks) throw std::domain_error("typical type k outside [1, K]");
    const double prefactor = campbell_prefactor(net);
    double s = 0.0;
    for (int i = 1; i <= ba.chunks; ++i) {
        const double pi = ba.type_prob(i);
        if (pi != 0.0) s += pi * mean_overlap(overlap_pmf(ba.mode, ba.chunks, k, i));
    }
    return prefactor * ba.power_per_chunk * s;
}

double mean_interference_overall(const NetworkParams& net, const BandwidthConfig& ba) {
    ba.validate();
    return campbell_prefactor(net) * ba.power_per_chunk * mean_overlap_mass(ba);
}

double matched_intensity(const NetworkParams& net, const BandwidthConfig& ba, std::span<const double> alt_probs,
                         double alt_power) {
    net.validate();
    ba.validate();
    if (!(alt_power > 0.0)) throw std::invalid_argument("alt_power: must be > 0");
    const BandwidthConfig alt = with_probs(ba, alt_probs);
    const double denom = alt_power * mean_overlap_mass(alt);
    if (!(denom > 0.0)) throw std::domain_error("matched_intensity: alternative network has no mean interference");
    return net.lambda * ba.power_per_chunk * mean_overlap_mass(ba) / denom;
}

double msmir_k(const NetworkParams& net, const BandwidthConfig& ba, int k) {
    const double interference = mean_interference_k(net, ba, k);
    return k * ba.power_per_chunk * net.signal_gain() / interference;
}

MeanModelPair match_means(const NetworkParams& net, const BandwidthConfig& ba, std::span<const double> alt_probs) {
    MeanModelPair pair{net, ba, net, with_probs(ba, alt_probs)};
    pair.alt_ba.power_per_chunk = matched_power(ba, alt_probs);
    pair.alt_net.lambda = matched_intensity(net, ba, alt_probs, pair.alt_ba.power_per_chunk);
    return pair;
}

}  // namespace adaptba
