#pragma once

#include <cmath>

namespace restcheck::detail {

/// arcosh(1 + u) for u >= 0, stable for small u where the naive form
/// loses all significant digits.
inline double acosh1p(double u) {
    return std::log1p(u + std::sqrt(u * (2.0 + u)));
}

} // namespace restcheck::detail
