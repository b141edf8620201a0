#include "adaptba/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "adaptba/errors.hpp"
#include "adaptba/quadrature.hpp"

namespace adaptba {

namespace {

double gamma_product(double delta) { return std::tgamma(1.0 + delta) * std::tgamma(1.0 - delta); }

void check_theta(double theta) {
    if (!(theta > 0.0) || !std::isfinite(theta))
        throw std::domain_error("SIR threshold theta must be finite and > 0");
}

void check_type(const BandwidthConfig& ba, int k, const char* what) {
    if (k < 1 || k > ba.chunks) throw std::domain_error(std::string(what) + " outside [1, K]");
}

// Exponent of success_prob_ki without the theta > 0 check; theta == 0 gives 0.
double log_success_ki(const NetworkParams& net, const BandwidthConfig& ba, int k, int i, double theta) {
    const double p_i = ba.type_prob(i);
    if (p_i == 0.0 || theta == 0.0) return 0.0;
    const double delta = net.pathloss.delta();
    const OverlapPmf pmf = overlap_pmf(ba.mode, ba.chunks, k, i);
    double sum = 0.0;
    if (net.pathloss.kind == PathLossKind::PowerLaw) {
        // The t = 0 term is kept and contributes (0/k)^delta = 0.
        for (int t = pmf.t_min; t <= pmf.t_max(); ++t)
            sum += pmf(t) * std::pow(static_cast<double>(t) / k, delta);
        return -net.lambda * p_i * interference_constant(net) * std::pow(theta, delta) * sum;
    }
    const double c0 = net.pathloss.c0;
    const double link = c0 + std::pow(net.link_distance, net.pathloss.alpha);
    for (int t = pmf.t_min; t <= pmf.t_max(); ++t) {
        const double share = static_cast<double>(t) / k;
        sum += pmf(t) * share * std::pow(theta * share * link + c0, delta - 1.0);
    }
    return -p_i * bounded_interference_constant(net) * theta * sum;
}

double log_success_k(const NetworkParams& net, const BandwidthConfig& ba, int k, double theta) {
    double s = 0.0;
    for (int i = 1; i <= ba.chunks; ++i) s += log_success_ki(net, ba, k, i, theta);
    return s;
}

void validate(const NetworkParams& net, const BandwidthConfig& ba) {
    net.validate();
    ba.validate();
}

}  // namespace

double interference_constant(const NetworkParams& net) {
    if (net.pathloss.kind != PathLossKind::PowerLaw)
        throw std::invalid_argument("interference_constant: power-law path loss required");
    const double R = net.link_distance;
    return std::numbers::pi * R * R * gamma_product(net.pathloss.delta());
}

double bounded_interference_constant(const NetworkParams& net) {
    if (net.pathloss.kind != PathLossKind::Bounded)
        throw std::invalid_argument("bounded_interference_constant: bounded path loss required");
    const double link = net.pathloss.c0 + std::pow(net.link_distance, net.pathloss.alpha);
    return net.lambda * std::numbers::pi * link * gamma_product(net.pathloss.delta());
}

double success_prob_ki(const NetworkParams& net, const BandwidthConfig& ba, int k, int i, double theta) {
    validate(net, ba);
    check_type(ba, k, "typical type k");
    check_type(ba, i, "interferer type i");
    check_theta(theta);
    return std::exp(log_success_ki(net, ba, k, i, theta));
}

double success_prob_k(const NetworkParams& net, const BandwidthConfig& ba, int k, double theta) {
    validate(net, ba);
    check_type(ba, k, "typical type k");
    check_theta(theta);
    return std::exp(log_success_k(net, ba, k, theta));
}

double success_prob_overall(const NetworkParams& net, const BandwidthConfig& ba, double theta) {
    validate(net, ba);
    check_theta(theta);
    double s = 0.0;
    for (int k = 1; k <= ba.chunks; ++k)
        if (ba.type_prob(k) > 0.0) s += ba.type_prob(k) * std::exp(log_success_k(net, ba, k, theta));
    return s;
}

namespace {

// integral_0^inf p_s^(k)(2^y - 1) dy, before the bandwidth factor.
ThroughputResult log_rate_integral(const NetworkParams& net, const BandwidthConfig& ba, int k,
                                   const ThroughputOptions& opt) {
    auto integrand = [&](double y) { return std::exp(log_success_k(net, ba, k, std::expm1(y * std::numbers::ln2))); };

    ThroughputResult r;
    double y_max = 8.0;
    while (integrand(y_max) > opt.cutoff && y_max < opt.y_limit) y_max *= 2.0;
    if (integrand(y_max) > opt.cutoff) r.truncated = true;
    r.y_max = y_max;

    quad::Options qo;
    qo.abs_tol = opt.abs_tol;
    qo.rel_tol = 0.0;
    qo.max_intervals = 4000;
    // Split so the adaptive rule sees the fast-decaying part at fine scale.
    double value = 0.0;
    double lo = 0.0;
    for (double hi = std::min(8.0, y_max);; hi = std::min(2.0 * hi, y_max)) {
        const auto seg = quad::integrate(integrand, lo, hi, qo);
        if (!seg.converged)
            throw NumericalError("throughput integral did not converge on [" + std::to_string(lo) + ", " +
                                 std::to_string(hi) + "]");
        value += seg.value;
        lo = hi;
        if (hi >= y_max) break;
    }
    r.value = value;
    const auto tail = quad::integrate(integrand, y_max, 2.0 * y_max, qo);
    r.tail_estimate = tail.value;
    return r;
}

ThroughputResult scaled(ThroughputResult r, double factor) {
    r.value *= factor;
    r.tail_estimate *= factor;
    return r;
}

}  // namespace

ThroughputResult shannon_throughput_k(const NetworkParams& net, const BandwidthConfig& ba, int k,
                                      const ThroughputOptions& opt) {
    validate(net, ba);
    check_type(ba, k, "typical type k");
    return scaled(log_rate_integral(net, ba, k, opt), static_cast<double>(k) / ba.chunks);
}

ThroughputResult shannon_throughput_per_joule_k(const NetworkParams& net, const BandwidthConfig& ba, int k,
                                                const ThroughputOptions& opt) {
    return scaled(shannon_throughput_k(net, ba, k, opt), 1.0 / (k * ba.power_per_chunk));
}

ThroughputResult shannon_throughput_per_hz_k(const NetworkParams& net, const BandwidthConfig& ba, int k,
                                             const ThroughputOptions& opt) {
    return scaled(shannon_throughput_k(net, ba, k, opt), 1.0 / k);
}

namespace {

template <class PerType>
ThroughputResult mixture(const BandwidthConfig& ba, PerType per_type) {
    ThroughputResult total;
    for (int k = 1; k <= ba.chunks; ++k) {
        const double p = ba.type_prob(k);
        if (p == 0.0) continue;
        const ThroughputResult r = per_type(k);
        total.value += p * r.value;
        total.tail_estimate += p * r.tail_estimate;
        total.y_max = std::max(total.y_max, r.y_max);
        total.truncated = total.truncated || r.truncated;
    }
    return total;
}

}  // namespace

ThroughputResult shannon_throughput_overall(const NetworkParams& net, const BandwidthConfig& ba,
                                            const ThroughputOptions& opt) {
    validate(net, ba);
    return mixture(ba, [&](int k) { return shannon_throughput_k(net, ba, k, opt); });
}

ThroughputResult shannon_throughput_per_joule_overall(const NetworkParams& net, const BandwidthConfig& ba,
                                                      const ThroughputOptions& opt) {
    validate(net, ba);
    return mixture(ba, [&](int k) { return shannon_throughput_per_joule_k(net, ba, k, opt); });
}

}  // namespace adaptba
