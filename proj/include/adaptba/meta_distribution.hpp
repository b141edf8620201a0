#pragma once

#include <complex>

#include "adaptba/allocation.hpp"
#include "adaptba/pathloss.hpp"
#include "adaptba/quadrature.hpp"

namespace adaptba {

/// Radial quadrature settings for the moment integrals.
struct MomentOptions {
    quad::Options quad{1e-12, 1e-11, 4000};
};

/// b-th moment of the conditional success probability of a type-k link,
///   M_b = exp(-2 pi lambda int_0^inf [1 - S(r)^b] r dr),
///   S(r) = sum_i p_i sum_t P(t|k,i) / (1 + theta (t/k) l(r)/l(R)).
/// Throws NumericalError if the radial integral does not converge.
std::complex<double> moment_b_k(const NetworkParams& net, const BandwidthConfig& ba, int k, double theta,
                                std::complex<double> b, const MomentOptions& opt = {});
double moment_b_k(const NetworkParams& net, const BandwidthConfig& ba, int k, double theta, double b,
                  const MomentOptions& opt = {});

/// E[ln P_s] for a type-k link; the u -> 0 limit of the Gil-Pelaez integrand needs it.
double mean_log_success(const NetworkParams& net, const BandwidthConfig& ba, int k, double theta,
                        const MomentOptions& opt = {});

struct GilPelaezOptions {
    double u_max = 200.0;
    double panel_width = 2.0;
    double tail_tol = 1e-7;
    /// Envelope |M_ju| / u at u_max above which the inversion is declared failed.
    double fail_envelope = 1e-3;
    quad::Options panel_quad{1e-10, 1e-9, 400};
    MomentOptions moment{};
};

struct GilPelaezResult {
    double value = 0.0;
    /// Accumulated quadrature error plus the envelope bound at the stopping point.
    double error_estimate = 0.0;
    double u_stop = 0.0;
};

/// P(P_s > x) by Gil-Pelaez inversion of the imaginary moments:
///   1/2 + (1/pi) int_0^inf Im(exp(-j u ln x) M_ju) / u du.
/// Throws NumericalError when the oscillatory tail does not die out by u_max;
/// callers may fall back to meta_ccdf_beta.
GilPelaezResult meta_ccdf_gilpelaez_detail(const NetworkParams& net, const BandwidthConfig& ba, int k,
                                           double theta, double x, const GilPelaezOptions& opt = {});
double meta_ccdf_gilpelaez(const NetworkParams& net, const BandwidthConfig& ba, int k, double theta, double x,
                           const GilPelaezOptions& opt = {});

/// Beta law with matching mean and variance.
struct BetaFit {
    double mean = 0.0;
    double variance = 0.0;
    double a = 0.0;
    double b = 0.0;
    /// variance below 1e-14: the law is treated as a point mass at mean.
    bool degenerate = false;

    /// 1 - I_x(a, b), or the step 1{x < mean} when degenerate.
    double ccdf(double x) const;
};

BetaFit fit_beta(double m1, double m2);

/// Beta approximation of P(P_s > x) from the first two moments.
double meta_ccdf_beta(const NetworkParams& net, const BandwidthConfig& ba, int k, double theta, double x,
                      const MomentOptions& opt = {});

enum class MetaMethod { GilPelaez, Beta };

double meta_ccdf(MetaMethod method, const NetworkParams& net, const BandwidthConfig& ba, int k, double theta,
                 double x);

/// sum_k p_k F_k(theta, x).
double meta_ccdf_overall(MetaMethod method, const NetworkParams& net, const BandwidthConfig& ba, double theta,
                         double x);

}  // namespace adaptba
