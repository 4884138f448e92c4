#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "restcheck/phase.hpp"

namespace restcheck::oscquad {

/// Oscillatory integral operators T f(t) = int e^{i lambda phi(t,s)} a(t,s)
/// f(s) ds: their composition kernel K(s,s') = int e^{i lambda (phi(t,s) -
/// phi(t,s'))} a(t,s) a(t,s') dt, its decay in lambda|s-s'|, the
/// stationary-phase bound constant assembled from amplitude and phase
/// norms, operator-norm scaling in lambda, and the model circle /
/// restriction kernels that the same decay mechanism controls.

/// Closed support box of an amplitude; t is the integration variable.
struct SupportBox {
    double t_lo = 0, t_hi = 1;
    double s_lo = 0, s_hi = 1;
};

/// Real compactly supported amplitude a(t, s) with recorded sup norms of
/// d^i a / dt^i for i = 0, 1, 2 (supplied by construction or measured on a
/// grid). eval must be zero outside box.
struct Amplitude {
    std::function<double(double, double)> eval;
    SupportBox box;
    std::array<double, 3> dt_sup{};
};

/// C-infinity step: 0 for x <= 0, 1 for x >= 1, strictly increasing between.
double smooth_step(double x);

/// C-infinity bump on (0, 1): exp(4 - 1/(x(1-x))), peak value 1 at x = 1/2,
/// zero outside.
double bump01(double x);

/// Sup norms of d^i/dt^i of a sampled function over a box, i = 0, 1, 2,
/// measured on a grid_n x grid_n grid (central differences for i >= 1).
std::array<double, 3> measure_dt_sup(const std::function<double(double, double)>& f,
                                     const SupportBox& box, int grid_n);

/// Product bump w(t) w(s) on the given box (default the unit box), peak 1,
/// derivative norms measured on a 257-point grid.
Amplitude make_bump_amplitude(const SupportBox& box = {});

/// Product plateau amplitude: identically 1 on the central 95% of the box
/// with smooth ramps over the outer 2.5% of each extent. Flat at its peak,
/// so norm and decay measurements reach their large-frequency regime
/// without the slow transient a curved-peak bump induces; the narrow ramps
/// also keep the non-oscillatory branch of the operator norm at its cap,
/// which moves the branch crossover to the bottom of the dyadic ladder.
Amplitude make_plateau_amplitude(const SupportBox& box = {});

/// Same support, evaluator and recorded norms scaled by |c| (evaluator by c).
Amplitude scale_amplitude(const Amplitude& a, double c);

/// Phase bundle: the phase, its t-derivative (for oscillation counts), and
/// the mixed derivatives d^{1+j} phi / ds dt^j, j = 1..3, that enter the
/// bound constant. fold_t0 is set when phi_st vanishes exactly on the line
/// t = t0 (simple zero in t) and is empty when inf |phi_st| > 0.
struct PhaseModel {
    std::function<double(double, double)> phi;
    std::function<double(double, double)> phi_t;
    std::function<double(double, double)> phi_st;
    std::function<double(double, double)> phi_stt;
    std::function<double(double, double)> phi_sttt;
    std::optional<double> fold_t0;
    /// Set when the bundle wraps a geodesic-pair separation; the bound
    /// constant then measures phase norms over the separation band when
    /// horizon is also set (geodesic_family sets both).
    std::optional<phase::PhaseCase> geodesic;
    std::optional<double> horizon;
};

/// phi = t s: constant mixed derivative, the nondegenerate model.
PhaseModel product_phase();

/// phi = (t - 1/2)^2 s / 2: phi_st = (t - 1/2) s vanishes on the fold line
/// t = 1/2, the degenerate model. Pair with an amplitude whose s-support
/// stays away from 0.
PhaseModel fold_phase();

/// Geodesic-pair separation phi(t, s) from the phase module. Derivatives
/// come from the closed-form jet; evaluation anywhere the jet is defined.
PhaseModel geodesic_phase(const phase::PhaseCase& c);

/// Amplitude and phase with the frequency left free. Scaling families whose
/// window tracks the frequency (like the model amplitude's lambda^{1/2}
/// factor) set amp_at; consumers then use amp_at(lambda) and ignore amp,
/// which holds the base-frequency amplitude for direct single-operator use.
struct OperatorFamily {
    PhaseModel phase;
    Amplitude amp;
    std::function<Amplitude(double)> amp_at;
};

struct OscillatoryOperator {
    PhaseModel phase;
    Amplitude amp;
    double lambda = 1;
};

/// Validates lambda > 0 and a nonempty box.
OscillatoryOperator make_operator(PhaseModel phase, Amplitude amp, double lambda);

/// Geodesic-pair operator family at horizon T >= 2.5: the amplitude is the
/// radial window profile(r) = r^{-1/2} chi(r) / T composed with the
/// separation, supported on the band 2 <= phi <= T, t in [0, 1]. The s-box
/// (width at most one) is centered on the band's amplitude mass: the
/// admissible window is scanned for the contiguous run of s carrying
/// positive profile mass, and the box sits at that run's centroid. Smooth
/// plateau ramps in t and s keep the amplitude compactly supported in the
/// box. Throws std::invalid_argument when the window or the band is empty.
OperatorFamily geodesic_family(const phase::PhaseCase& c, double T);

/// Geodesic-pair family for the nondegenerate scaling test: a plateau
/// amplitude centered at the pair's closest approach, where the mixed
/// separation derivative is at its largest (1/sinh of the waist
/// separation). The box half extent is half_extent (in (0, 2]) at the
/// reference frequency 16 and shrinks like lambda^{-1/4} through amp_at,
/// making the family self-similar: in box-rescaled variables the phase is
/// a bilinear form growing like lambda^{1/2} plus a quartic correction
/// that the scaling freezes, so the quartic distorts the norm by a common
/// factor instead of a ladder-dependent drift and the fitted exponent is
/// clean. Requires a pair whose separation has an interior minimum inside
/// |t|, |s| <= 8 (disjoint circles; throws std::invalid_argument
/// otherwise, naming the failure).
OperatorFamily waist_family(const phase::PhaseCase& c, double half_extent);

/// Composition kernel K(s, s') by composite Gauss-Legendre quadrature over
/// t. Panels start at max(32, ceil(4 lambda osc_range)) with osc_range the
/// measured sup_t |phi_t(t,s) - phi_t(t,s')| times the t-extent over 2 pi,
/// then double until successive values agree to 1e-8 relative to
/// max(|K|, t-extent * ||a||_inf^2). Throws std::runtime_error with the
/// offending (s, s', panels, delta) after 6 doublings. Requires s, s' in
/// the box s-range.
std::complex<double> ttstar_kernel(const OscillatoryOperator& op, double s, double s1);

/// Kernel on an n x n grid over the box s-range.
struct KernelGrid {
    std::vector<double> s;                    ///< grid nodes, ascending
    std::vector<std::complex<double>> k;      ///< row-major, k[i*n+j] = K(s_i, s_j)
    double hermitian_defect = 0;              ///< max |K_ij - conj(K_ji)|
    double scale = 0;                         ///< t-extent * ||a||_inf^2
};

/// Computes the full grid and the Hermitian defect, which must stay below
/// 1e-9 * scale (throws std::logic_error otherwise; the integrand pairs are
/// exact conjugates, so a violation is a quadrature bug). n >= 2.
KernelGrid kernel_grid(const OscillatoryOperator& op, int n);

/// Stationary structure of the phase on the amplitude support.
enum class DecayCase {
    Nondegenerate, ///< inf |phi_st| > 0: kernel decay (1 + lambda|s-s'|)^{-2}
    Degenerate,    ///< simple fold line t = t0: decay (lambda|s-s'|)^{-1/2}
};

/// Ingredients of the stationary-phase operator-norm bound constant: the
/// support diameter, the recorded amplitude t-derivative norms, the
/// measured phase-derivative sup norms ||d^j phi_st / dt^j||, j = 0, 1, 2,
/// and the case-defining infimum (inf |phi_st|, or inf |phi_st / (t - t0)|
/// for a fold). value = diam^e (a0 + sum_ij a_i p_j / inf^2) with e = 1/2
/// nondegenerate, 1/4 degenerate; the absolute constant in front is set
/// to 1.
struct BoundConstant {
    DecayCase kind = DecayCase::Nondegenerate;
    double diam = 0;
    std::array<double, 3> a_sup{};
    std::array<double, 3> phi_sup{};
    double inf_quantity = 0;
    double value = 0;
    /// Location of the infimum (t, s), for cross-checks.
    double inf_t = 0, inf_s = 0;
};

/// Measures the phase norms over the amplitude support (refined grid for
/// model phases; the separation-band scan for geodesic phases) and
/// assembles the constant. Nondegenerate mode throws std::invalid_argument
/// when the measured infimum is zero, directing to the degenerate case;
/// degenerate mode requires fold_t0 (or a crossing geodesic pair).
BoundConstant norm_bound_constant(const OscillatoryOperator& op, DecayCase kind);

/// Weighted kernel sup M(lambda) = sup over the pair grid of
/// |K| (1 + lambda d)^2 (nondegenerate) or |K| (lambda d)^{1/2}
/// (degenerate), d = |s - s'|. The pair grid holds lambda d fixed across
/// lambdas (57 log-spaced values in [1/8, 16], pairs centered in the
/// s-range), so each lambda's sup weighs the kernel at matching points of
/// its decay profile. The trivial-region bound is additionally checked at
/// the diagonal and at large absolute separations.
struct DecayReport {
    DecayCase kind = DecayCase::Nondegenerate;
    std::vector<double> lambdas;
    std::vector<double> m;            ///< weighted sup per lambda
    double drift = 0;                 ///< max |m_{i+1}/m_i - 1|
    double trivial_excess = 0;        ///< max over lambda d <= 1 of |K| - diam ||a||^2
    double constant_ratio = 0;        ///< max m / value^2 of the bound constant
    bool stable = false;              ///< drift <= 0.15
    bool passed = false;              ///< stable && trivial_excess <= 1e-9 && ratio <= 1e3
};

/// Runs the family at each lambda (>= 2 values, ascending). Requires the
/// matching stationary structure (validated through norm_bound_constant).
DecayReport kernel_decay_check(const OperatorFamily& family, DecayCase kind,
                               const std::vector<double>& lambdas);

/// Largest singular value of the Nystrom discretization on n Gauss-Legendre
/// nodes per axis (weights folded symmetrically), computed by Krylov
/// iteration on T*T to relative 1e-6. Requires n >= 8 lambda max_extent
/// (resolving the oscillation) and n >= 8; throws std::runtime_error if the
/// iteration stalls before converging. A zero amplitude returns 0.
double opnorm(const OscillatoryOperator& op, int n);

/// Least-squares slope of log opnorm against log lambda over >= 5 dyadic
/// frequencies (each successive ratio exactly 2); n is chosen per lambda as
/// max(256, ceil(8 lambda max_extent)).
struct ScalingFit {
    double slope = 0, intercept = 0, residual = 0;
    std::vector<double> lambdas, norms;
};
ScalingFit norm_scaling_fit(const OperatorFamily& family,
                            const std::vector<double>& lambdas);

/// int_{S^1} e^{i x omega_1} d omega by the periodic trapezoid rule
/// (spectrally accurate; node count grows linearly in |x|). Real valued;
/// equals 2 pi J_0(x). x must be finite and >= 0.
double circle_kernel(double x);

/// Self-contained circle-kernel checks: value at 0 vs 2 pi, magnitude at
/// the first root 2.404825557695773, and sup over x in [1, 200] of
/// sqrt(x) |value| against the 5.1 envelope.
struct CircleReport {
    double at_zero_gap = 0;     ///< |value(0) - 2 pi|
    double at_first_root = 0;   ///< |value(j_{0,1})|
    double envelope_sup = 0;    ///< sup sqrt(x) |value|
    bool passed = false;
};
CircleReport circle_kernel_check();

/// Model restriction kernel magnitude |K_lambda(delta)|, delta = |s - s'|:
/// a single l-integral over [lambda/4, 4 lambda] of w_hat(l - lambda)
/// beta(l / lambda) circle_kernel(l delta) l dl, where beta is a smooth
/// bump equal to 1 on [1/2, 2] supported in [1/4, 4] and w_hat is the
/// closed-form transform of the cos^4 time window on [-2, 2] (decay
/// (1 + |l - lambda|)^{-5}; wide enough that the window profile stays
/// positive across unit pair separations). Requires lambda >= 8 and
/// delta in [0, 1].
double model_restriction_kernel(double lambda, double delta);

/// Scaling checks of the model kernel. The weighted kernel
/// lambda^{-1/2} delta^{1/2} |K| passes through its own oscillation zeros
/// as lambda delta sweeps a period, so q(lambda, delta) is its envelope:
/// the max over a half-octave separation bin around delta (clipped to
/// [4/lambda, 1]), stable per delta across lambdas within 15%.
/// c(lambda) = max over delta in {1/4, 1/2, 1} / lambda of |K| / lambda,
/// stable within 30%. Each listed delta must lie in [4/lambda_min, 1].
struct ModelKernelReport {
    std::vector<double> lambdas, deltas;
    std::vector<double> q;        ///< row-major lambdas x deltas, bin envelopes
    std::vector<double> c_small;  ///< per lambda
    double q_drift = 0, c_drift = 0;
    bool passed = false;
};
ModelKernelReport model_kernel_check(const std::vector<double>& lambdas,
                                     const std::vector<double>& deltas);

/// Radial amplitude profile a(r) = lambda^{1/2} r^{-1/2} chi(r) / T with a
/// C-infinity cutoff chi supported in [2, T], equal to 1 on the plateau
/// [2 + w, T - w], w = min(1/2, (T - 2)/4). Returned as an Amplitude in the
/// first argument (r plays the t role, the second argument is inert), box
/// [2, T] x [0, 1], derivative norms measured on the support. Requires
/// T >= 2, lambda >= 1.
Amplitude model_amplitude(double T, double lambda);

/// Plateau of the model amplitude cutoff at horizon T.
std::pair<double, double> model_amplitude_plateau(double T);

nlohmann::ordered_json to_json(const DecayReport& rep);
nlohmann::ordered_json to_json(const ScalingFit& fit);
nlohmann::ordered_json to_json(const CircleReport& rep);
nlohmann::ordered_json to_json(const ModelKernelReport& rep);

} // namespace restcheck::oscquad
