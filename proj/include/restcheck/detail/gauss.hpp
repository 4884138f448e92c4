#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace restcheck::detail {

/// Gauss-Legendre rule on [-1, 1], nodes ascending. Newton iteration on
/// P_m from the asymptotic root guess; weights 2 / ((1 - x^2) P_m'^2).
struct GaussRule {
    std::vector<double> node;
    std::vector<double> weight;
};

inline GaussRule gauss_legendre(int m) {
    if (m < 1) throw std::invalid_argument("quadrature order must be >= 1");
    constexpr double pi = 3.141592653589793238462643383279502884;
    GaussRule rule;
    rule.node.resize(m);
    rule.weight.resize(m);
    const int half = (m + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(pi * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= m; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        // symmetric fill, ascending order
        rule.node[i] = -x;
        rule.node[m - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weight[i] = w;
        rule.weight[m - 1 - i] = w;
    }
    if (m % 2 == 1) rule.node[m / 2] = 0.0;
    return rule;
}

} // namespace restcheck::detail
