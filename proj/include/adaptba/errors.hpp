#pragma once

#include <stdexcept>
#include <string>

namespace adaptba {

/// A numerical procedure (quadrature, inversion) failed to reach its tolerance.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace adaptba
