#include "restcheck/halfplane.hpp"

#include "restcheck/detail/stable.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace restcheck::halfplane {

using detail::acosh1p;

HPoint::HPoint(double x_, double y_) : x(x_), y(y_) {
    if (!(y_ > 0) || !std::isfinite(x_) || !std::isfinite(y_))
        throw std::invalid_argument("HPoint requires finite coordinates with y > 0");
}

MobiusMap::MobiusMap(double a_, double b_, double c_, double d_)
    : a(a_), b(b_), c(c_), d(d_) {
    if (std::abs(a * d - b * c - 1.0) > 1e-12)
        throw std::invalid_argument("MobiusMap requires ad - bc = 1");
}

TubeRadius::TubeRadius(double v) : value(v) {
    if (!(v > 0) || !std::isfinite(v))
        throw std::invalid_argument("TubeRadius must be positive");
}

double hp_distance(const HPoint& p, const HPoint& q) {
    const double dx = q.x - p.x;
    const double dy = q.y - p.y;
    const double u = (dx * dx + dy * dy) / (2.0 * p.y * q.y);
    return acosh1p(u);
}

HPoint geodesic_point(const Geodesic& g, double t) {
    if (std::abs(t) > 700.0)
        throw std::domain_error("geodesic_point: |t| > 700 would overflow");
    if (const auto* v = std::get_if<VerticalLine>(&g))
        return {v->x0, std::exp(t)};
    const auto& c = std::get<HalfCircle>(g);
    // (a - r tanh t, r sech t); tanh/sech keep both coordinates bounded.
    return {c.a - c.r * std::tanh(t), c.r / std::cosh(t)};
}

double dist_to_y_axis(const HPoint& p) {
    return std::asinh(std::abs(p.x) / p.y);
}

bool tube_contains(const HPoint& p, TubeRadius R) {
    return std::abs(p.x) <= p.y * std::sinh(R.value);
}

std::optional<TubeWindow> tube_window(double a, double r, TubeRadius R) {
    if (!(r > 0))
        throw std::invalid_argument("tube_window requires r > 0");
    const double S = std::sinh(R.value);
    const double d = a / r;
    const double inf = std::numeric_limits<double>::infinity();

    if (d == 1.0)
        return TubeWindow{1.0 / S, inf, true};
    if (d == -1.0)
        return TubeWindow{0.0, S, true};

    // Membership of (a - r tanh s, r sech s) in the tube reads
    // |(d - 1) u^2 + (d + 1)| <= 2 S u with u = e^s, i.e. the intersection of
    //   (A) (d - 1) u^2 - 2 S u + (d + 1) <= 0
    //   (B) (d - 1) u^2 + 2 S u + (d + 1) >= 0
    // over u > 0.
    const double disc = (S * S + 1.0) - d * d; // cosh^2 R - d^2
    if (std::abs(d) > 1.0) {
        if (disc < 0)
            return std::nullopt; // geodesic stays outside the tube
        const double root = std::sqrt(disc); // root <= S
        const double denom = d > 1.0 ? d - 1.0 : 1.0 - d;
        return TubeWindow{(S - root) / denom, (S + root) / denom};
    }
    // |d| < 1: the geodesic crosses the axis, so the window always exists.
    const double root = std::sqrt(disc); // root > S here
    return TubeWindow{(root - S) / (1.0 - d), (root + S) / (1.0 - d)};
}

HPoint mobius_apply(const MobiusMap& m, const HPoint& p) {
    // w = (az + b)(conj(cz + d)) / |cz + d|^2; Im w = y / |cz + d|^2.
    const double u = m.c * p.x + m.d;
    const double v = m.c * p.y;
    const double n2 = u * u + v * v;
    if (n2 == 0.0)
        throw std::domain_error("mobius_apply: degenerate denominator");
    const double wx = ((m.a * p.x + m.b) * u + m.a * p.y * v) / n2;
    const double wy = p.y / n2; // uses ad - bc = 1
    return {wx, wy};
}

Geodesic mobius_image_of_y_axis(const MobiusMap& m) {
    if (m.c == 0.0)
        return VerticalLine{m.b / m.d}; // inf stays at inf
    if (m.d == 0.0)
        return VerticalLine{m.a / m.c}; // 0 goes to inf
    const double e0 = m.b / m.d;
    const double e1 = m.a / m.c;
    return HalfCircle{0.5 * (e0 + e1), 0.5 * std::abs(e1 - e0)};
}

PairClass classify_pair(const Geodesic& g) {
    if (const auto* v = std::get_if<VerticalLine>(&g)) {
        if (v->x0 == 0.0)
            throw std::domain_error("classify_pair: geodesic coincides with the y-axis");
        return ParallelLine{v->x0};
    }
    const auto& c = std::get<HalfCircle>(g);
    const double aa = std::abs(c.a);
    if (c.r == aa)
        throw std::domain_error("classify_pair: tangent circle (r = |a|)");
    if (c.r < aa)
        return DisjointCircle{c.a, c.r};
    // Crossing point: t0 on the axis, s0 on the circle.
    const double t0 = 0.5 * std::log(c.r * c.r - c.a * c.a);
    const double s0 = 0.5 * std::log((c.r + c.a) / (c.r - c.a));
    return IntersectingCircle{c.a, c.r, t0, s0};
}

} // namespace restcheck::halfplane
