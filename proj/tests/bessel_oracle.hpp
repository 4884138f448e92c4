#pragma once

#include <quadmath.h>

#include <cmath>

/// J_0 by its power series in quad precision. The series alternates with
/// terms up to ~4e19 at x = 50, so ~20 decimal digits cancel; __float128's
/// 33 digits leave 13 good ones, ample for 1e-8 comparisons on [0, 50].
inline double bessel_j0_series(double x) {
    const __float128 q = static_cast<__float128>(x) * x / 4.0Q;
    __float128 term = 1.0Q, sum = 1.0Q;
    for (int k = 1; k <= 120; ++k) {
        term *= -q / (static_cast<__float128>(k) * k);
        sum += term;
        if (fabsq(term) < 1e-36Q * fabsq(sum) && k > 8) break;
    }
    return static_cast<double>(sum);
}
