#include "adaptba/pathloss.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace adaptba {

void PathLossModel::validate() const {
    if (!(alpha > 2.0) || !std::isfinite(alpha))
        throw std::invalid_argument("network.alpha: path loss exponent must be > 2");
    if (kind == PathLossKind::Bounded && !(c0 > 0.0))
        throw std::invalid_argument("network.c0: bounded path loss requires c0 > 0");
}

double PathLossModel::gain(double r) const {
    const double ra = std::pow(r, alpha);
    if (kind == PathLossKind::PowerLaw) return r > 0.0 ? 1.0 / ra : std::numeric_limits<double>::infinity();
    return 1.0 / (c0 + ra);
}

void NetworkParams::validate() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("network.lambda: must be > 0");
    if (!(link_distance > 0.0) || !std::isfinite(link_distance))
        throw std::invalid_argument("network.R: link distance must be > 0");
    pathloss.validate();
}

double NetworkParams::gain_ratio(double r) const {
    const double c = pathloss.offset();
    return (c + std::pow(link_distance, pathloss.alpha)) / (c + std::pow(r, pathloss.alpha));
}

}  // namespace adaptba
