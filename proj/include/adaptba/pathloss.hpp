#pragma once

namespace adaptba {

enum class PathLossKind { PowerLaw, Bounded };

/// l(r) = r^-alpha (PowerLaw) or l(r) = 1 / (c0 + r^alpha) (Bounded).
struct PathLossModel {
    PathLossKind kind = PathLossKind::Bounded;
    double alpha = 4.0;
    double c0 = 1.0;

    static PathLossModel power_law(double alpha) { return {PathLossKind::PowerLaw, alpha, 0.0}; }
    static PathLossModel bounded(double alpha, double c0) { return {PathLossKind::Bounded, alpha, c0}; }

    void validate() const;

    double delta() const { return 2.0 / alpha; }
    /// c0 for Bounded, 0 for PowerLaw.
    double offset() const { return kind == PathLossKind::Bounded ? c0 : 0.0; }
    double gain(double r) const;

    bool operator==(const PathLossModel&) const = default;
};

/// Poisson bipolar network: transmitter intensity and link distance.
struct NetworkParams {
    double lambda = 0.2;
    double link_distance = 1.0;
    PathLossModel pathloss{};

    void validate() const;

    double signal_gain() const { return pathloss.gain(link_distance); }
    /// l(r) / l(R); finite for r > 0 under either model.
    double gain_ratio(double r) const;

    bool operator==(const NetworkParams&) const = default;
};

}  // namespace adaptba
