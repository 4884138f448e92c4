#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "restcheck/phase.hpp"

namespace restcheck::boundscan {

/// Empirical verification that the mixed separation derivatives of a
/// geodesic pair stay inside exponential-in-horizon bands: a grid scan of
/// |phi_st|, |phi_stt|, |phi_sttt| over the unit parameter square for
/// sampled pair configurations whose second geodesic leaves the tube
/// around the first, followed by least-squares fits of the measured
/// log-extrema against the horizon.

/// Families of second geodesics relative to the y-axis. A crossing circle
/// meets the axis at height e^{t0}; "inside" means t0 lands on the scanned
/// unit segment [0, 1], "outside" means t0 is at least one unit away from
/// it (t0 outside [-1, 2]).
enum class PairKind {
    ParallelLine,
    DisjointCircle,
    CrossingInside,
    CrossingOutside,
};

struct ScanConfig {
    std::vector<double> horizons{2.0, 3.0, 4.0, 5.0};
    int grid_n = 64;       ///< coarse grid points per unit axis length, >= 16
    int refine_depth = 3;  ///< local refinement levels around each extremum
    int samples = 200;     ///< sampled configurations per horizon
    std::uint64_t seed = 20250819;
    double tube_radius = 1.0;
};

/// Throws std::invalid_argument when a field is out of range
/// (horizons within [2, 12], grid_n >= 16, refine_depth in [0, 8],
/// samples >= 1, tube_radius > 0).
void validate(const ScanConfig& cfg);

inline constexpr double kInfLog =
    std::numeric_limits<double>::infinity();

/// Location and log-magnitude of one tracked extremum. Parameters (a, r)
/// identify the configuration (r = 0 for a line pair); (t, s) the grid
/// point. log_value is +/-inf when nothing was tracked.
struct Extremum {
    double log_value;
    double a = 0, r = 0, t = 0, s = 0;
};

/// Extrema of one scanned configuration at one horizon. All magnitudes are
/// stored in log-space; sups at horizon T reach e^{40T} scales.
struct ScanExtrema {
    double T = 0;
    double a = 0, r = 0;    ///< r = 0 for a line pair
    bool skipped = false;   ///< no scannable points (empty window)
    long long points = 0;   ///< coarse grid points that passed the filters

    Extremum inf_st{kInfLog};      ///< min log |phi_st|
    Extremum sup_st{-kInfLog};     ///< max log |phi_st|
    Extremum sup_stt{-kInfLog};    ///< max log |phi_stt|
    Extremum sup_sttt{-kInfLog};   ///< max log |phi_sttt|

    /// Crossing circles only: min log |phi_st / (t - t0)|.
    Extremum inf_ratio{kInfLog};
    bool has_ratio = false;

    /// Circle pairs: min log of |a + r + (a - r) e^{2s}| / r, the middle
    /// factor of the phi_st numerator; bounded below on non-tube points.
    Extremum min_middle{kInfLog};

    /// Circle pairs: min log of (A^2 - 16 r^2 e^{2s+2t}) (cosh T)^6 / r^4,
    /// the squared-denominator margin over its claimed floor on the
    /// far-separated branch.
    Extremum min_denom_margin{kInfLog};
};

/// Scans |phi_st| and higher mixed derivatives of the pair over the
/// separation band {(t, s) : t in [0,1], s in the admissible window,
/// 2 <= phi(t, s) <= T}, keeping points where the second geodesic point
/// lies outside the tube of cfg.tube_radius. s is gridded at cfg.grid_n
/// points per unit length; at each s the in-band t-intervals are exact
/// (cosh phi is a two-term exponential in t, so their endpoints are
/// quadratic roots) and are gridded endpoint-inclusive, which places
/// points on the band boundary where the extrema concentrate. At T = 2
/// the band degenerates to the curve phi = 2 and the scan follows it. Each
/// tracked extremum is then refined cfg.refine_depth times on shrinking
/// local grids (refinement only adds points, so refined infs never rise
/// and refined sups never fall). An empty scan set is reported via
/// skipped = true, not as an error.
ScanExtrema scan_extrema(const phase::PhaseCase& c, double T,
                         const ScanConfig& cfg);

/// Draws n configurations of the given kind, log-uniform over the
/// parameter ranges compatible with the scan at horizon T, each verified
/// to have admissible points outside the tube of radius R (window overlap
/// plus a pointwise tube-membership check). Circle offsets are normalized
/// to a >= 0; the mirrored configurations are isometric images. Throws
/// std::runtime_error when rejection sampling exceeds 10^6 draws.
std::vector<phase::PhaseCase> sample_nontube_params(PairKind kind, double T,
                                                    double R, int n,
                                                    std::uint64_t seed);

/// Aggregate of all scans at one horizon (optionally one branch of a
/// verifier). Extrema are taken across samples; the embedded (a, r, t, s)
/// identify the worst configuration and grid point.
struct HorizonSummary {
    double T = 0;
    std::string branch;     ///< "", "inside", or "outside"
    int sampled = 0;        ///< scanned configurations
    int skipped = 0;        ///< configurations with empty scan sets

    Extremum inf_st{kInfLog};
    Extremum sup_st{-kInfLog};
    Extremum sup_stt{-kInfLog};
    Extremum sup_sttt{-kInfLog};
    Extremum inf_ratio{kInfLog};
    Extremum min_middle{kInfLog};
    Extremum min_denom_margin{kInfLog};
    /// Disjoint circles: inf over the small nearly-tangent sub-branch
    /// (r <= 1/cosh T and a - r <= 1), which obeys a faster floor.
    Extremum inf_st_small{kInfLog};
};

struct NamedFit {
    std::string series;
    double slope = 0, intercept = 0, residual = 0;
};

struct BoundViolation {
    std::string quantity;
    double T = 0, a = 0, r = 0, t = 0, s = 0;
    double log_value = 0;  ///< measured log magnitude
    double log_bound = 0;  ///< asserted log bound it crossed
};

struct BoundReport {
    std::string case_id;
    std::vector<HorizonSummary> records;
    std::vector<NamedFit> fits;
    std::vector<BoundViolation> violations;
    bool passed = false;
};

/// Least-squares line through (T, log v) points; residual is the RMS
/// vertical misfit. Throws std::invalid_argument for fewer than 3 points
/// or a degenerate (constant-T) list.
struct FitResult {
    double slope = 0, intercept = 0, residual = 0;
};
FitResult fit_growth_constant(
    const std::vector<std::pair<double, double>>& t_logv);

/// Scans sampled parallel-line pairs at each horizon and asserts the
/// decay/growth bands: inf |phi_st| >= e^{-11 T} and the three sups below
/// e^{8 T}, e^{14 T}, e^{20 T}. Violations are listed in the report
/// rather than thrown.
BoundReport verify_parallel_line(const std::vector<double>& T_list,
                                 const ScanConfig& cfg);

/// Same for disjoint-circle pairs: inf >= e^{-9 T}, sups below e^{16 T},
/// e^{30 T}, e^{44 T}; additionally the small nearly-tangent sub-branch
/// floor e^{-3 T} and the far-separated squared-denominator margin >= 1.
BoundReport verify_parallel_circle(const std::vector<double>& T_list,
                                   const ScanConfig& cfg);

/// Crossing circles, split into branches by where the crossing lands.
/// Inside: inf |phi_st / (t - t0)| >= e^{-7 T}, sups below e^{14 T},
/// e^{24 T}, e^{34 T}. Outside: inf |phi_st| >= e^{-15 T}, sups below
/// e^{16 T}, e^{30 T}, e^{44 T}. Both branches: the middle factor of the
/// phi_st numerator stays >= r/2 on non-tube points, with a
/// horizon-independence fit.
BoundReport verify_intersecting(const std::vector<double>& T_list,
                                const ScanConfig& cfg);

/// One JSON object per report: case, per-horizon records (log extrema and
/// worst-point coordinates), fits, violations, pass flag. Non-finite logs
/// serialize as null.
std::string to_json(const BoundReport& report);

} // namespace restcheck::boundscan
