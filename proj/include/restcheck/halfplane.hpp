#pragma once

#include <optional>
#include <variant>

namespace restcheck::halfplane {

/// Point of the upper half-plane model; the metric is (dx^2 + dy^2) / y^2.
struct HPoint {
    double x = 0;
    double y = 1;

    HPoint() = default;
    HPoint(double x_, double y_);
};

/// Geodesic hitting the boundary vertically at x0.
struct VerticalLine {
    double x0 = 0;
};

/// Geodesic tracing the upper half of the circle |z - a| = r, r > 0.
struct HalfCircle {
    double a = 0;
    double r = 1;
};

using Geodesic = std::variant<VerticalLine, HalfCircle>;

/// Isometry z -> (az + b) / (cz + d), det constrained to 1.
struct MobiusMap {
    double a, b, c, d;
    MobiusMap(double a_, double b_, double c_, double d_);
};

/// Radius of a metric neighborhood of the y-axis geodesic.
struct TubeRadius {
    explicit TubeRadius(double v);
    double value;
};

/// Interval of u = e^s over which the circle geodesic point lies inside the
/// tube.  u_hi may be +infinity (ray); u_lo may be 0 (window reaching the
/// boundary).  degenerate marks the |a| = r branch where the quadratic
/// membership condition collapses to a linear one.
struct TubeWindow {
    double u_lo;
    double u_hi;
    bool degenerate = false;
};

/// Classification of a geodesic against the y-axis.
struct ParallelLine {
    double a; // boundary abscissa, nonzero
};
struct DisjointCircle {
    double a, r; // r < |a|
};
struct IntersectingCircle {
    double a, r;
    double t0; // y-axis parameter of the intersection point
    double s0; // circle parameter of the intersection point
};
using PairClass = std::variant<ParallelLine, DisjointCircle, IntersectingCircle>;

/// Geodesic distance; symmetric, exact 0 on the diagonal.
double hp_distance(const HPoint& p, const HPoint& q);

/// Unit-speed point: vertical line (x0, e^t); half-circle
/// (a - r tanh t, r sech t).  |t| > 700 is rejected rather than overflowed.
HPoint geodesic_point(const Geodesic& g, double t);

/// Distance from p to the y-axis geodesic: asinh(|x| / y).
double dist_to_y_axis(const HPoint& p);

/// Membership in the closed tube of radius R about the y-axis, evaluated via
/// the closed inequality |x| <= y sinh R.
bool tube_contains(const HPoint& p, TubeRadius R);

/// e^s-window where the half-circle {a, r} geodesic lies inside the tube.
/// Empty (nullopt) when the geodesic stays outside.  Requires r > 0.
std::optional<TubeWindow> tube_window(double a, double r, TubeRadius R);

HPoint mobius_apply(const MobiusMap& m, const HPoint& p);

/// Image of the y-axis geodesic: boundary endpoints 0 -> b/d, inf -> a/c.
Geodesic mobius_image_of_y_axis(const MobiusMap& m);

/// Classify a geodesic against the y-axis.  Coincident (vertical at 0) and
/// tangent (r = |a|) inputs are rejected.
PairClass classify_pair(const Geodesic& g);

} // namespace restcheck::halfplane
