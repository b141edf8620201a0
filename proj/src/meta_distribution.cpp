#include "adaptba/meta_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/special_functions/beta.hpp>

#include "adaptba/errors.hpp"

namespace adaptba {

namespace {

using cplx = std::complex<double>;

void check_inputs(const NetworkParams& net, const BandwidthConfig& ba, int k, double theta) {
    net.validate();
    ba.validate();
    if (k < 1 || k > ba.chunks) throw std::domain_error("typical type k outside [1, K]");
    if (!(theta > 0.0) || !std::isfinite(theta)) throw std::domain_error("SIR threshold theta must be > 0");
}

// Per-interferer factor S(r) of the conditional success probability, kept as
// its complement 1 - S(r) for accuracy far from the receiver.
class InterfererFactor {
public:
    InterfererFactor(const NetworkParams& net, const BandwidthConfig& ba, int k, double theta) : net_(net) {
        const std::vector<double> w = overlap_mixture(ba, k);
        for (int t = 1; t <= k; ++t) {
            if (w[static_cast<std::size_t>(t)] == 0.0) continue;
            weight_.push_back(w[static_cast<std::size_t>(t)]);
            scale_.push_back(theta * t / k);
        }
    }

    // 1 - S(r), with g = l(r)/l(R).
    double complement(double r) const {
        const double g = net_.gain_ratio(r);
        double c = 0.0;
        for (std::size_t j = 0; j < weight_.size(); ++j) {
            const double z = scale_[j] * g;
            c += weight_[j] * z / (1.0 + z);
        }
        return c;
    }

    double log_factor(double r) const { return std::log1p(-complement(r)); }

private:
    const NetworkParams& net_;
    std::vector<double> weight_;
    std::vector<double> scale_;
};

// 1 - exp(z) without cancellation for small |z|.
cplx one_minus_exp(cplx z) {
    if (std::abs(z) < 1e-5) return -(z + z * z / 2.0 + z * z * z / 6.0);
    return 1.0 - std::exp(z);
}

// int_0^inf h(r) r dr with r = R tan(v).
template <class T, class H>
T radial_integral(const NetworkParams& net, H&& h, const quad::Options& qo, const char* what) {
    const double R = net.link_distance;
    auto integrand = [&](double v) -> T {
        const double r = R * std::tan(v);
        const double c = std::cos(v);
        return h(r) * (r * R / (c * c));
    };
    const auto res = quad::integrate<T>(integrand, 0.0, std::numbers::pi / 2, qo);
    if (!res.converged)
        throw NumericalError(std::string(what) + ": radial integral did not converge (error " +
                             std::to_string(res.error) + ")");
    return res.value;
}

// ln M_b.
cplx log_moment(const NetworkParams& net, const InterfererFactor& f, cplx b, const MomentOptions& opt) {
    if (b == cplx(0.0, 0.0)) return 0.0;
    const cplx integral = radial_integral<cplx>(
        net, [&](double r) { return one_minus_exp(b * f.log_factor(r)); }, opt.quad, "moment_b_k");
    return -2.0 * std::numbers::pi * net.lambda * integral;
}

}  // namespace

cplx moment_b_k(const NetworkParams& net, const BandwidthConfig& ba, int k, double theta, cplx b,
                const MomentOptions& opt) {
    check_inputs(net, ba, k, theta);
    const InterfererFactor f(net, ba, k, theta);
    return std::exp(log_moment(net, f, b, opt));
}

double moment_b_k(const NetworkParams& net, const BandwidthConfig& ba, int k, double theta, double b,
                  const MomentOptions& opt) {
    check_inputs(net, ba, k, theta);
    if (b == 0.0) return 1.0;
    const InterfererFactor f(net, ba, k, theta);
    const double integral = radial_integral<double>(
        net, [&](double r) { return -std::expm1(b * f.log_factor(r)); }, opt.quad, "moment_b_k");
    return std::exp(-2.0 * std::numbers::pi * net.lambda * integral);
}

double mean_log_success(const NetworkParams& net, const BandwidthConfig& ba, int k, double theta,
                        const MomentOptions& opt) {
    check_inputs(net, ba, k, theta);
    const InterfererFactor f(net, ba, k, theta);
    const double integral =
        radial_integral<double>(net, [&](double r) { return f.log_factor(r); }, opt.quad, "mean_log_success");
    return 2.0 * std::numbers::pi * net.lambda * integral;
}

GilPelaezResult meta_ccdf_gilpelaez_detail(const NetworkParams& net, const BandwidthConfig& ba, int k,
                                           double theta, double x, const GilPelaezOptions& opt) {
    check_inputs(net, ba, k, theta);
    if (std::isnan(x)) throw std::domain_error("reliability x is NaN");
    if (x <= 0.0) return {1.0, 0.0, 0.0};
    if (x >= 1.0) return {0.0, 0.0, 0.0};

    const InterfererFactor f(net, ba, k, theta);
    const double log_x = std::log(x);
    const double small_u_limit = -log_x + mean_log_success(net, ba, k, theta, opt.moment);

    double envelope = 0.0;
    auto integrand = [&](double u) {
        if (u < 1e-6) return small_u_limit;
        const cplx lm = log_moment(net, f, cplx(0.0, u), opt.moment);
        return std::exp(cplx(lm.real(), lm.imag() - u * log_x)).imag() / u;
    };
    auto envelope_at = [&](double u) { return std::exp(log_moment(net, f, cplx(0.0, u), opt.moment).real()) / u; };

    GilPelaezResult out;
    double total = 0.0;
    double error = 0.0;
    double u = 0.0;
    bool settled = false;
    while (u < opt.u_max) {
        const double hi = std::min(u + opt.panel_width, opt.u_max);
        const auto panel = quad::integrate(integrand, u, hi, opt.panel_quad);
        if (!panel.converged)
            throw NumericalError("Gil-Pelaez panel [" + std::to_string(u) + ", " + std::to_string(hi) +
                                 "] did not converge");
        total += panel.value;
        error += panel.error;
        u = hi;
        envelope = envelope_at(u);
        if (std::abs(panel.value) < opt.tail_tol && envelope * opt.panel_width < opt.tail_tol) {
            settled = true;
            break;
        }
    }
    if (!settled && envelope > opt.fail_envelope)
        throw NumericalError("Gil-Pelaez tail still at " + std::to_string(envelope) + " at u_max=" +
                             std::to_string(opt.u_max));

    out.value = std::clamp(0.5 + total / std::numbers::pi, 0.0, 1.0);
    out.error_estimate = (error + (settled ? 0.0 : envelope)) / std::numbers::pi;
    out.u_stop = u;
    return out;
}

double meta_ccdf_gilpelaez(const NetworkParams& net, const BandwidthConfig& ba, int k, double theta, double x,
                           const GilPelaezOptions& opt) {
    return meta_ccdf_gilpelaez_detail(net, ba, k, theta, x, opt).value;
}

BetaFit fit_beta(double m1, double m2) {
    BetaFit fit;
    fit.mean = m1;
    fit.variance = m2 - m1 * m1;
    if (fit.variance < 1e-14) {
        fit.degenerate = true;
        return fit;
    }
    const double common = m1 * (1.0 - m1) / fit.variance - 1.0;
    fit.a = m1 * common;
    fit.b = (1.0 - m1) * common;
    if (!(fit.a > 0.0) || !(fit.b > 0.0))
        throw NumericalError("beta fit: moments inconsistent with a law on [0, 1] (M1=" + std::to_string(m1) +
                             ", M2=" + std::to_string(m2) + ")");
    return fit;
}

double BetaFit::ccdf(double x) const {
    if (degenerate) return x < mean ? 1.0 : 0.0;
    if (x <= 0.0) return 1.0;
    if (x >= 1.0) return 0.0;
    return boost::math::ibetac(a, b, x);
}

double meta_ccdf_beta(const NetworkParams& net, const BandwidthConfig& ba, int k, double theta, double x,
                      const MomentOptions& opt) {
    if (std::isnan(x)) throw std::domain_error("reliability x is NaN");
    const double m1 = moment_b_k(net, ba, k, theta, 1.0, opt);
    const double m2 = moment_b_k(net, ba, k, theta, 2.0, opt);
    return fit_beta(m1, m2).ccdf(x);
}

double meta_ccdf(MetaMethod method, const NetworkParams& net, const BandwidthConfig& ba, int k, double theta,
                 double x) {
    return method == MetaMethod::GilPelaez ? meta_ccdf_gilpelaez(net, ba, k, theta, x)
                                           : meta_ccdf_beta(net, ba, k, theta, x);
}

double meta_ccdf_overall(MetaMethod method, const NetworkParams& net, const BandwidthConfig& ba, double theta,
                         double x) {
    ba.validate();
    double s = 0.0;
    for (int k = 1; k <= ba.chunks; ++k)
        if (ba.type_prob(k) > 0.0) s += ba.type_prob(k) * meta_ccdf(method, net, ba, k, theta, x);
    return s;
}

}  // namespace adaptba
