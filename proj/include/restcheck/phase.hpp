#pragma once

#include <utility>
#include <variant>

namespace restcheck::phase {

/// Geodesic pair separation phi(t, s) between the y-axis parametrized as
/// (0, e^t) and a second geodesic parametrized by arc length s. The second
/// geodesic is either a parallel vertical line or a half-circle.

/// Second geodesic is the vertical line x = a. The offset a = 0 would make
/// the two geodesics coincide; derivative routines reject it.
struct LineCase {
    double a = 1;
};

/// Second geodesic is the half-circle of radius r centered at (a, 0).
/// Crosses the y-axis iff r > |a|.
struct CircleCase {
    double a = 0;
    double r = 1;
};

using PhaseCase = std::variant<LineCase, CircleCase>;

/// True when the half-circle crosses the y-axis (r > |a|).
bool is_intersecting(const CircleCase& c);

/// Crossing parameters of an intersecting half-circle: the axis hits it at
/// axis parameter t0 and circle parameter s0 (same point (0, e^{t0})).
struct CrossingParams {
    double t0;
    double s0;
};

/// Requires is_intersecting(c).
CrossingParams crossing_params(const CircleCase& c);

/// Separation and its mixed partial derivatives in one evaluation.
struct PhaseJet {
    double phi;      ///< separation phi(t, s), >= 0
    double phi_st;   ///< d^2 phi / ds dt
    double phi_stt;  ///< d^3 phi / ds dt^2
    double phi_sttt; ///< d^4 phi / ds dt^3
    /// cosh-ratio numerator: 2 e^{s+t} cosh(phi) for a line pair,
    /// 4 r e^{s+t} cosh(phi) for a circle pair.
    double A;
    /// phi >= 2: the lower separation threshold of the oscillatory regime.
    /// The upper, horizon-dependent cut is admissible_window's concern.
    bool admissible;
};

/// phi(t, s). Throws std::domain_error when |t| or |s| exceeds the overflow
/// guard, std::invalid_argument on an invalid case (circle r <= 0).
double phi_eval(const PhaseCase& c, double t, double s);

/// Closed-form phi_st with phi_stt, phi_sttt obtained by truncated-Taylor
/// forward differentiation in t of that closed form. Throws
/// std::domain_error at a coincidence point (phi = 0) and for out-of-guard
/// arguments; std::invalid_argument for a degenerate case (line a = 0,
/// circle r <= 0 or r = |a|).
PhaseJet phi_jet(const PhaseCase& c, double t, double s);

/// d phi / dt, used for oscillation-count estimates in quadrature sizing.
/// Same preconditions as phi_jet except degenerate cases are allowed.
double phi_dt(const PhaseCase& c, double t, double s);

/// Central finite-difference estimate of d^{order+1} phi / ds dt^order,
/// order in 1..3. Fourth-order stencils evaluated in quad precision; steps
/// scale as eps^{1/(order+2)} in t and eps^{1/3} in s, each multiplied by
/// the coordinate magnitude. Accepts degenerate cases (it only samples
/// phi_eval's formula).
double phi_fd_oracle(const PhaseCase& c, double t, double s, int order);

/// s-range over which the separation cut phi <= T is attainable with
/// t in [0, 1], plus the satisfiable parameter ranges at this horizon.
struct AdmissibleWindow {
    double s_lo; ///< +inf when empty
    double s_hi; ///< -inf when empty
    /// Satisfiability range of the offset magnitude |a| at this horizon
    /// (for a circle: given its radius).
    std::pair<double, double> a_bounds;
    /// Proven containment bracket for e^s over the window
    /// (max((a+r)^2, 1) / (4 e r cosh T), 4 r cosh T) for circles;
    /// (0, inf) for lines.
    std::pair<double, double> r_bounds;
    double T;

    bool empty() const { return !(s_lo <= s_hi); }
};

/// Computes {s : min_{t in [0,1]} phi(t, s) <= T} exactly (convexity of
/// cosh phi in (t, s) makes it an interval). The lower separation cut
/// phi >= 2 is a pointwise filter applied by scans, not a window property.
/// Requires T >= 2.
AdmissibleWindow admissible_window(const PhaseCase& c, double T);

} // namespace restcheck::phase
