#include "restcheck/boundscan.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <variant>

#include <json.hpp>

#include "restcheck/detail/rng.hpp"
#include "restcheck/halfplane.hpp"

namespace restcheck::boundscan {
namespace {

namespace hp = restcheck::halfplane;
using phase::CircleCase;
using phase::LineCase;
using phase::PhaseCase;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Asserted decay/growth rates: the proved exponent for each quantity plus
// one unit of slack, since the constants behind the proved rates come from
// chained inequalities and are not tight.
constexpr double kLineInfRate = 11.0;                     // proved 10
constexpr double kLineSupRate[3] = {8.0, 14.0, 20.0};     // proved 7, 13, 19
constexpr double kCircleInfRate = 9.0;                    // worst branch 8
constexpr double kCircleSupRate[3] = {16.0, 30.0, 44.0};  // proved 15, 29, 43
constexpr double kCircleSmallInfRate = 3.0;               // proved 2
constexpr double kInsideRatioRate = 7.0;                  // proved 6
constexpr double kInsideSupRate[3] = {14.0, 24.0, 34.0};  // proved 13, 23, 33
constexpr double kOutsideInfRate = 15.0;                  // proved 14
constexpr double kOutsideSupRate[3] = {16.0, 30.0, 44.0}; // proved 15, 29, 43

// Middle-factor floor |a + r + (a - r) e^{2s}| / r on non-tube points at
// tube radius 1. The exact value on the tube boundary is
// 2 sinh(R) (cosh(R) - sinh(R)) ~ 0.865 at R = 1, worst at a = 0; the
// asserted floor keeps a wide margin under it. The companion slope bound
// asserts the floor does not decay with the horizon.
constexpr double kMiddleFloor = 0.5;
constexpr double kMiddleSlopeTol = 0.05;

// s-interval where the second geodesic sits inside the tube; empty when it
// never enters.
struct TubeSpan {
    double lo = kInf;
    double hi = -kInf;
    bool empty() const { return !(lo <= hi); }
    bool outside(double s) const { return empty() || s < lo || s > hi; }
};

TubeSpan tube_span(const PhaseCase& c, double R) {
    TubeSpan w;
    if (const auto* line = std::get_if<LineCase>(&c)) {
        // (a, e^s) is inside iff |a| <= e^s sinh R.
        w.lo = std::log(std::fabs(line->a) / std::sinh(R));
        w.hi = kInf;
        return w;
    }
    const auto& cc = std::get<CircleCase>(c);
    auto tw = hp::tube_window(cc.a, cc.r, hp::TubeRadius(R));
    if (!tw) return w;
    w.lo = tw->u_lo > 0 ? std::log(tw->u_lo) : -kInf;
    w.hi = std::isfinite(tw->u_hi) ? std::log(tw->u_hi) : kInf;
    return w;
}

hp::HPoint second_point(const PhaseCase& c, double s) {
    if (const auto* line = std::get_if<LineCase>(&c))
        return hp::geodesic_point(hp::VerticalLine{line->a}, s);
    const auto& cc = std::get<CircleCase>(c);
    return hp::geodesic_point(hp::HalfCircle{cc.a, cc.r}, s);
}

void take_min(Extremum& dst, const Extremum& src) {
    if (src.log_value < dst.log_value) dst = src;
}
void take_max(Extremum& dst, const Extremum& src) {
    if (src.log_value > dst.log_value) dst = src;
}

// Per-case constants hoisted out of the grid loop.
struct ScanCtx {
    const PhaseCase* c;
    double T;
    TubeSpan span;
    bool is_circle = false;
    bool has_ratio = false;
    double a = 0, r = 0;
    double t0 = 0, s0 = 0;
    double log_r = 0;
    double cosh6_log = 0; // 6 log cosh T
};

ScanCtx make_ctx(const PhaseCase& c, double T, const ScanConfig& cfg) {
    ScanCtx ctx;
    ctx.c = &c;
    ctx.T = T;
    ctx.span = tube_span(c, cfg.tube_radius);
    if (const auto* cc = std::get_if<CircleCase>(&c)) {
        ctx.is_circle = true;
        ctx.a = cc->a;
        ctx.r = cc->r;
        ctx.log_r = std::log(cc->r);
        ctx.cosh6_log = 6.0 * std::log(std::cosh(T));
        if (phase::is_intersecting(*cc)) {
            auto cr = phase::crossing_params(*cc);
            ctx.t0 = cr.t0;
            ctx.s0 = cr.s0;
            ctx.has_ratio = true;
        }
    } else {
        ctx.a = std::get<LineCase>(c).a;
    }
    return ctx;
}

// Middle factor (a + r) + (a - r) e^{2s} of the circle phi_st numerator,
// anchored at the crossing parameter when one exists so its zero is exact.
double middle_factor(const ScanCtx& ctx, double s) {
    if (ctx.has_ratio)
        return -(ctx.a + ctx.r) * std::expm1(2.0 * (s - ctx.s0));
    return (ctx.a + ctx.r) + (ctx.a - ctx.r) * std::exp(2.0 * s);
}

// In-band t-intervals at fixed s. With the first geodesic parametrized as
// (0, e^t), cosh phi(t) = alpha e^{-t} + beta e^t where alpha, beta depend
// only on the second point (x2, y2), so {t in [0,1] : 2 <= phi <= T} is
// [0,1] cut by exact quadratic roots: at most two closed intervals, and at
// T = 2 exactly the boundary points phi = 2. Sampling these intervals
// endpoint-inclusive puts grid points on the band boundary, where the
// extrema concentrate.
struct TBand {
    double lo[2] = {0, 0}, hi[2] = {0, 0};
    int n = 0;
};

TBand t_band(const PhaseCase& c, double s, double T) {
    const hp::HPoint p = second_point(c, s);
    const double alpha = (p.x * p.x + p.y * p.y) / (2.0 * p.y);
    const double beta = 1.0 / (2.0 * p.y);
    // Roots of beta x^2 - C x + alpha = 0 in x = e^t, stable form.
    const auto roots = [&](double C, double& lo, double& hi) {
        const double disc = C * C - 4.0 * alpha * beta;
        if (disc < 0) return false;
        const double q = C + std::sqrt(disc);
        lo = 2.0 * alpha / q;
        hi = q / (2.0 * beta);
        return true;
    };
    TBand b;
    double loT, hiT;
    if (!roots(std::cosh(T), loT, hiT)) return b;
    const double L = std::max(1.0, loT);
    const double H = std::min(std::exp(1.0), hiT);
    if (!(L <= H)) return b;
    double lo2, hi2;
    if (!roots(std::cosh(2.0), lo2, hi2)) {
        b.lo[0] = std::log(L);
        b.hi[0] = std::log(H);
        b.n = 1;
        return b;
    }
    // Cut out the open proximity interval (lo2, hi2) where phi < 2.
    if (L <= lo2 && lo2 <= H) {
        b.lo[b.n] = std::log(L);
        b.hi[b.n] = std::log(lo2);
        ++b.n;
    }
    const double R2 = std::max(L, hi2);
    if (R2 <= H && hi2 >= L) {
        b.lo[b.n] = std::log(R2);
        b.hi[b.n] = std::log(H);
        ++b.n;
    }
    if (b.n == 0 && lo2 < L && hi2 > H) return b; // fully inside phi < 2
    if (b.n == 0 && (hi2 < L || lo2 > H)) {
        // proximity interval entirely outside [L, H]: keep it all
        b.lo[0] = std::log(L);
        b.hi[0] = std::log(H);
        b.n = 1;
    }
    return b;
}

// Evaluates one point (t constructed in-band); updates every tracked
// extremum of rec when the point lies outside the tube.
bool visit(const ScanCtx& ctx, double t, double s, ScanExtrema& rec) {
    if (!ctx.span.outside(s)) return false;
    const phase::PhaseJet j = phase::phi_jet(*ctx.c, t, s);

    const double log_st = std::log(std::fabs(j.phi_st));
    const Extremum at_st{log_st, ctx.a, ctx.r, t, s};
    take_min(rec.inf_st, at_st);
    take_max(rec.sup_st, at_st);
    take_max(rec.sup_stt, {std::log(std::fabs(j.phi_stt)), ctx.a, ctx.r, t, s});
    take_max(rec.sup_sttt,
             {std::log(std::fabs(j.phi_sttt)), ctx.a, ctx.r, t, s});

    if (ctx.has_ratio) {
        const double dt = t - ctx.t0;
        if (dt != 0.0)
            take_min(rec.inf_ratio,
                     {log_st - std::log(std::fabs(dt)), ctx.a, ctx.r, t, s});
    }
    if (ctx.is_circle) {
        const double m = middle_factor(ctx, s);
        take_min(rec.min_middle,
                 {std::log(std::fabs(m)) - ctx.log_r, ctx.a, ctx.r, t, s});
        // Squared-denominator margin over its (cosh T)^{-6} r^4 floor,
        // from the jet's numerator A directly; no cancellation risk since
        // A^2 exceeds 16 r^2 e^{2s+2t} by cosh^2(phi) >= cosh^2(2).
        const double d2 =
            j.A * j.A - 16.0 * ctx.r * ctx.r * std::exp(2.0 * (s + t));
        take_min(rec.min_denom_margin,
                 {std::log(d2) + ctx.cosh6_log - 4.0 * ctx.log_r, ctx.a,
                  ctx.r, t, s});
    }
    return true;
}

double clamp(double v, double lo, double hi) {
    return std::min(hi, std::max(lo, v));
}

} // namespace

void validate(const ScanConfig& cfg) {
    if (cfg.horizons.empty())
        throw std::invalid_argument("scan config needs at least one horizon");
    for (double T : cfg.horizons)
        if (!(T >= 2.0 && T <= 12.0))
            throw std::invalid_argument("scan horizon outside [2, 12]");
    if (cfg.grid_n < 16)
        throw std::invalid_argument("scan grid_n below 16");
    if (cfg.refine_depth < 0 || cfg.refine_depth > 8)
        throw std::invalid_argument("scan refine_depth outside [0, 8]");
    if (cfg.samples < 1)
        throw std::invalid_argument("scan samples below 1");
    if (!(cfg.tube_radius > 0))
        throw std::invalid_argument("scan tube_radius not positive");
}

ScanExtrema scan_extrema(const phase::PhaseCase& c, double T,
                         const ScanConfig& cfg) {
    validate(cfg);
    if (!(T >= 2.0 && T <= 12.0))
        throw std::invalid_argument("scan horizon outside [2, 12]");

    ScanExtrema rec;
    rec.T = T;
    if (const auto* cc = std::get_if<CircleCase>(&c)) {
        rec.a = cc->a;
        rec.r = cc->r;
        rec.has_ratio = phase::is_intersecting(*cc);
    } else {
        rec.a = std::get<LineCase>(c).a;
    }

    const auto w = phase::admissible_window(c, T);
    if (w.empty()) {
        rec.skipped = true;
        return rec;
    }
    const ScanCtx ctx = make_ctx(c, T, cfg);

    const double L = w.s_hi - w.s_lo;
    const int ns =
        L > 0 ? std::max(2, static_cast<int>(std::lround(
                                cfg.grid_n * std::ceil(std::max(1.0, L)))))
              : 1;

    for (int js = 0; js < ns; ++js) {
        const double s = ns == 1 ? w.s_lo : w.s_lo + L * js / (ns - 1);
        if (!ctx.span.outside(s)) continue;
        const TBand b = t_band(c, s, T);
        for (int i = 0; i < b.n; ++i) {
            const double len = b.hi[i] - b.lo[i];
            const int nt =
                len > 0 ? std::max(2, static_cast<int>(
                                          std::ceil(cfg.grid_n * len)) +
                                          1)
                        : 1;
            for (int it = 0; it < nt; ++it) {
                const double t =
                    nt == 1 ? b.lo[i] : b.lo[i] + len * it / (nt - 1);
                if (visit(ctx, t, s, rec)) ++rec.points;
            }
        }
    }
    if (rec.points == 0) {
        rec.skipped = true;
        return rec;
    }

    // Local refinement around each tracked extremum. Refinement only adds
    // evaluation points, so infs are monotone nonincreasing and sups
    // monotone nondecreasing in refine_depth. Band endpoints are revisited
    // at every refined s so boundary extrema converge along the band edge.
    Extremum* slots[] = {&rec.inf_st,     &rec.sup_st,     &rec.sup_stt,
                         &rec.sup_sttt,   &rec.inf_ratio,  &rec.min_middle,
                         &rec.min_denom_margin};
    const double ht0 = 1.0 / cfg.grid_n;
    const double hs0 = ns > 1 ? L / (ns - 1) : 0.0;
    for (Extremum* slot : slots) {
        if (!std::isfinite(slot->log_value)) continue;
        double ht = ht0, hs = hs0;
        for (int lvl = 0; lvl < cfg.refine_depth; ++lvl) {
            const double ct = slot->t, cs = slot->s;
            for (int js = 0; js <= 16; ++js) {
                const double s = clamp(cs - hs + 2.0 * hs * js / 16.0,
                                       w.s_lo, w.s_hi);
                if (!ctx.span.outside(s)) continue;
                const TBand b = t_band(c, s, T);
                for (int i = 0; i < b.n; ++i) {
                    visit(ctx, b.lo[i], s, rec);
                    visit(ctx, b.hi[i], s, rec);
                    for (int it = 0; it <= 16; ++it)
                        visit(ctx,
                              clamp(ct - ht + 2.0 * ht * it / 16.0, b.lo[i],
                                    b.hi[i]),
                              s, rec);
                }
            }
            ht /= 8.0;
            hs /= 8.0;
        }
    }
    return rec;
}

namespace {

struct Viability {
    bool ok = false;
    double s_example = 0;
};

// A configuration is scannable when its admissible window keeps a
// non-degenerate piece outside the tube; the piece is spot-verified with a
// pointwise tube-membership check.
Viability nontube_viability(const PhaseCase& c, double T, double R) {
    const TubeSpan span = tube_span(c, R);
    if (std::holds_alternative<LineCase>(c)) {
        // Line windows live inside [-T, T+1] and the line tube is the ray
        // s >= span.lo, so span.lo <= -T forecloses any overlap. This
        // cheap reject keeps rejection storms affordable.
        if (span.lo <= -T) return {};
    }
    const auto w = phase::admissible_window(c, T);
    if (w.empty()) return {};

    constexpr double kMinLen = 1e-6;
    double s = 0;
    bool found = false;
    if (span.empty()) {
        s = 0.5 * (w.s_lo + w.s_hi);
        found = true;
    } else {
        const double left_hi = std::min(w.s_hi, span.lo);
        const double right_lo = std::max(w.s_lo, span.hi);
        if (left_hi - w.s_lo > kMinLen) {
            s = 0.5 * (w.s_lo + left_hi);
            found = true;
        } else if (w.s_hi - right_lo > kMinLen) {
            s = 0.5 * (right_lo + w.s_hi);
            found = true;
        }
    }
    if (!found) return {};
    if (hp::tube_contains(second_point(c, s), hp::TubeRadius(R))) return {};
    return {true, s};
}

// Log-uniform draw tolerant of a collapsed range.
double lu(detail::SplitRng& rng, double lo, double hi) {
    if (!(lo < hi)) return lo;
    return rng.log_uniform(lo, hi);
}

PhaseCase draw_one(PairKind kind, double T, double R, detail::SplitRng& rng,
                   int idx) {
    const double chT = std::cosh(T);
    switch (kind) {
    case PairKind::ParallelLine: {
        // Documented draw floor e^{-T} / sinh R; offsets up to e^{-T} sinh R
        // still land fully inside the tube and are rejected by the
        // viability filter. Offsets above e sinh T have empty windows.
        const double lo = std::exp(-T) / std::sinh(R);
        const double hi = std::exp(1.0) * std::sinh(T);
        double a = lu(rng, lo * (1 + 1e-12), hi);
        if (rng.coin()) a = -a;
        return LineCase{a};
    }
    case PairKind::DisjointCircle: {
        // Stratified: every 5th draw forces the small nearly-tangent
        // branch, the next forces the far-separated branch, the rest mix
        // log-uniform gap/radius buckets that stress both boundaries.
        const int stratum = idx % 5;
        double r, g;
        if (stratum == 0) {
            r = lu(rng, 0.02 / chT, 1.0 / chT);
            g = r * chT * lu(rng, 0.02, 0.9);
        } else if (stratum == 1) {
            r = lu(rng, chT * 1.0001, 8.0 * chT);
            g = lu(rng, 1.0001 / chT, 0.9 * std::exp(1.0) * chT);
        } else {
            const double u = rng.uniform();
            if (u < 0.4)
                g = lu(rng, 0.05 / chT, 1.0 / chT);
            else if (u < 0.7)
                g = lu(rng, 1.0 / chT, 1.0);
            else
                g = lu(rng, 1.0, 0.9 * std::exp(1.0) * chT);
            const double lo_r = std::max(0.02 / chT, 0.25 * g / chT);
            const double v = rng.uniform();
            if (v < 0.35)
                r = lu(rng, lo_r, std::max(2.0 * lo_r, 1.0 / chT));
            else if (v < 0.7)
                r = lu(rng, std::max(lo_r, 1.0 / chT),
                       std::max(2.0 * lo_r, chT));
            else
                r = lu(rng, std::max(lo_r, chT),
                       std::max(2.0 * lo_r, 8.0 * chT));
        }
        return CircleCase{r + g, r};
    }
    case PairKind::CrossingInside: {
        const double t0 = rng.uniform(0.0, 1.0);
        const double K = std::exp(2.0 * t0);
        const double r = lu(rng, std::sqrt(K) * (1 + 1e-9), 13.0 * chT);
        const double g = K / (r + std::sqrt(std::max(r * r - K, 0.0)));
        return CircleCase{std::max(0.0, r - g), r};
    }
    case PairKind::CrossingOutside: {
        const double t0 = rng.coin()
                              ? rng.uniform(2.05, std::min(T + 0.8, 4.0))
                              : rng.uniform(-3.0, -1.05);
        const double K = std::exp(2.0 * t0);
        // The radius cap keeps the gap r - a resolvable in doubles (it
        // shrinks like K / 2r) while still reaching the large-radius
        // branch when the crossing sits above the segment.
        const double rcap =
            std::min(2.0 * chT * chT * chT * chT, 4.0e6 * std::sqrt(K));
        const double r = lu(rng, std::sqrt(K) * (1 + 1e-9), rcap);
        const double g = K / (r + std::sqrt(std::max(r * r - K, 0.0)));
        return CircleCase{std::max(0.0, r - g), r};
    }
    }
    throw std::logic_error("unreachable pair kind");
}

// Branch-membership predicates on the stored doubles, so emitted samples
// satisfy their advertised conditions exactly as consumers recompute them.
bool kind_condition(PairKind kind, const PhaseCase& c) {
    switch (kind) {
    case PairKind::ParallelLine:
        return std::holds_alternative<LineCase>(c);
    case PairKind::DisjointCircle: {
        const auto& cc = std::get<CircleCase>(c);
        return cc.a > cc.r && cc.r > 0;
    }
    case PairKind::CrossingInside: {
        const auto& cc = std::get<CircleCase>(c);
        if (!(cc.r > std::fabs(cc.a))) return false;
        const double K = cc.r * cc.r - cc.a * cc.a;
        return K >= 1.0 && K <= std::exp(2.0);
    }
    case PairKind::CrossingOutside: {
        const auto& cc = std::get<CircleCase>(c);
        if (!(cc.r > std::fabs(cc.a))) return false;
        const double t0 = 0.5 * std::log(cc.r * cc.r - cc.a * cc.a);
        return t0 < -1.0 || t0 > 2.0;
    }
    }
    return false;
}

} // namespace

std::vector<phase::PhaseCase> sample_nontube_params(PairKind kind, double T,
                                                    double R, int n,
                                                    std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample count below 1");
    if (!(T >= 2.0 && T <= 12.0))
        throw std::invalid_argument("sampling horizon outside [2, 12]");
    if (!(R > 0)) throw std::invalid_argument("tube radius not positive");

    std::vector<PhaseCase> out;
    out.reserve(n);
    long long draws = 0;
    constexpr long long kBudget = 1000000;
    for (int i = 0; i < n; ++i) {
        detail::SplitRng rng(seed, (static_cast<std::uint64_t>(kind) << 48) +
                                       static_cast<std::uint64_t>(i));
        for (;;) {
            if (++draws > kBudget)
                throw std::runtime_error(
                    "rejection sampling exhausted 10^6 draws");
            PhaseCase c = draw_one(kind, T, R, rng, i);
            if (!kind_condition(kind, c)) continue;
            if (!nontube_viability(c, T, R).ok) continue;
            out.push_back(c);
            break;
        }
    }
    return out;
}

FitResult fit_growth_constant(
    const std::vector<std::pair<double, double>>& t_logv) {
    if (t_logv.size() < 3)
        throw std::invalid_argument("growth fit needs at least 3 points");
    double mt = 0, mv = 0;
    for (const auto& [t, v] : t_logv) {
        if (!std::isfinite(t) || !std::isfinite(v))
            throw std::invalid_argument("growth fit needs finite points");
        mt += t;
        mv += v;
    }
    const double n = static_cast<double>(t_logv.size());
    mt /= n;
    mv /= n;
    double stt = 0, stv = 0;
    for (const auto& [t, v] : t_logv) {
        stt += (t - mt) * (t - mt);
        stv += (t - mt) * (v - mv);
    }
    if (stt == 0)
        throw std::invalid_argument("growth fit horizons are degenerate");
    FitResult f;
    f.slope = stv / stt;
    f.intercept = mv - f.slope * mt;
    double rss = 0;
    for (const auto& [t, v] : t_logv) {
        const double e = v - (f.slope * t + f.intercept);
        rss += e * e;
    }
    f.residual = std::sqrt(rss / n);
    return f;
}

namespace {

void note_violation(BoundReport& rep, const std::string& quantity, double T,
                    const Extremum& e, double log_bound) {
    rep.violations.push_back(
        {quantity, T, e.a, e.r, e.t, e.s, e.log_value, log_bound});
}

void check_inf(BoundReport& rep, const std::string& q, double T,
               const Extremum& e, double rate) {
    if (!(e.log_value >= -rate * T)) note_violation(rep, q, T, e, -rate * T);
}

void check_sups(BoundReport& rep, const std::string& prefix, double T,
                const HorizonSummary& hs, const double rate[3]) {
    const Extremum* sups[] = {&hs.sup_st, &hs.sup_stt, &hs.sup_sttt};
    const char* names[] = {"sup|phi_st|", "sup|phi_stt|", "sup|phi_sttt|"};
    for (int k = 0; k < 3; ++k)
        if (!(sups[k]->log_value <= rate[k] * T))
            note_violation(rep, prefix + names[k], T, *sups[k], rate[k] * T);
}

void check_coverage(BoundReport& rep, const std::string& q, double T,
                    bool nonempty) {
    if (!nonempty) rep.violations.push_back({q, T, 0, 0, 0, 0, 0, 0});
}

std::vector<std::pair<double, double>> series(
    const BoundReport& rep, const std::string& branch,
    Extremum HorizonSummary::*field) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& hs : rep.records)
        if (hs.branch == branch && std::isfinite((hs.*field).log_value))
            pts.emplace_back(hs.T, (hs.*field).log_value);
    return pts;
}

void add_fit(BoundReport& rep, const std::string& name,
             const std::vector<std::pair<double, double>>& pts) {
    if (pts.size() < 3) return;
    double t0 = pts.front().first;
    bool distinct = false;
    for (const auto& p : pts)
        if (p.first != t0) distinct = true;
    if (!distinct) return;
    const FitResult f = fit_growth_constant(pts);
    rep.fits.push_back({name, f.slope, f.intercept, f.residual});
}

void add_standard_fits(BoundReport& rep, const std::string& branch,
                       const std::string& prefix) {
    add_fit(rep, prefix + "inf_st",
            series(rep, branch, &HorizonSummary::inf_st));
    add_fit(rep, prefix + "sup_st",
            series(rep, branch, &HorizonSummary::sup_st));
    add_fit(rep, prefix + "sup_stt",
            series(rep, branch, &HorizonSummary::sup_stt));
    add_fit(rep, prefix + "sup_sttt",
            series(rep, branch, &HorizonSummary::sup_sttt));
}

void validate_horizons(const std::vector<double>& T_list) {
    if (T_list.empty())
        throw std::invalid_argument("verification needs at least one horizon");
    for (double T : T_list)
        if (!(T >= 2.0 && T <= 12.0))
            throw std::invalid_argument("scan horizon outside [2, 12]");
}

} // namespace

BoundReport verify_parallel_line(const std::vector<double>& T_list,
                                 const ScanConfig& cfg) {
    validate(cfg);
    validate_horizons(T_list);
    BoundReport rep;
    rep.case_id = "parallel-line";

    for (std::size_t k = 0; k < T_list.size(); ++k) {
        const double T = T_list[k];
        auto cases = sample_nontube_params(PairKind::ParallelLine, T,
                                           cfg.tube_radius, cfg.samples,
                                           cfg.seed + 0x100003ull * k);
        // Deterministic probes at the offset floor (worst inf) and the
        // window-satisfiability edge.
        const double lo = std::exp(-T) / std::sinh(cfg.tube_radius);
        const double hi = std::exp(1.0) * std::sinh(T);
        for (double a :
             {1.05 * lo, 1.3 * lo, 2.0 * lo, 4.0 * lo, 0.5 * hi, 0.999 * hi}) {
            PhaseCase c = LineCase{a};
            if (nontube_viability(c, T, cfg.tube_radius).ok)
                cases.push_back(c);
        }

        HorizonSummary hs;
        hs.T = T;
        for (const auto& c : cases) {
            const ScanExtrema rec = scan_extrema(c, T, cfg);
            if (rec.skipped) {
                ++hs.skipped;
                continue;
            }
            ++hs.sampled;
            take_min(hs.inf_st, rec.inf_st);
            take_max(hs.sup_st, rec.sup_st);
            take_max(hs.sup_stt, rec.sup_stt);
            take_max(hs.sup_sttt, rec.sup_sttt);
        }
        check_coverage(rep, "coverage", T, hs.sampled > 0);
        if (hs.sampled > 0) {
            check_inf(rep, "inf|phi_st|", T, hs.inf_st, kLineInfRate);
            check_sups(rep, "", T, hs, kLineSupRate);
        }
        rep.records.push_back(std::move(hs));
    }
    add_standard_fits(rep, "", "");
    rep.passed = rep.violations.empty();
    return rep;
}

BoundReport verify_parallel_circle(const std::vector<double>& T_list,
                                   const ScanConfig& cfg) {
    validate(cfg);
    validate_horizons(T_list);
    BoundReport rep;
    rep.case_id = "disjoint-circle";

    for (std::size_t k = 0; k < T_list.size(); ++k) {
        const double T = T_list[k];
        const double chT = std::cosh(T);
        auto cases = sample_nontube_params(PairKind::DisjointCircle, T,
                                           cfg.tube_radius, cfg.samples,
                                           cfg.seed + 0x100003ull * k);
        // Probes: the small nearly-tangent boundary, the far-separated
        // branch, and a moderate near-tangent pair.
        const double rs = 0.999 / chT;
        for (CircleCase probe : {CircleCase{rs + 0.4 * rs * chT, rs},
                                 CircleCase{2.0 * chT + 2.0 / chT, 2.0 * chT},
                                 CircleCase{0.2 + 0.25 / chT, 0.2}}) {
            PhaseCase c = probe;
            if (kind_condition(PairKind::DisjointCircle, c) &&
                nontube_viability(c, T, cfg.tube_radius).ok)
                cases.push_back(c);
        }

        HorizonSummary hs;
        hs.T = T;
        for (const auto& c : cases) {
            const auto& cc = std::get<CircleCase>(c);
            const ScanExtrema rec = scan_extrema(c, T, cfg);
            if (rec.skipped) {
                ++hs.skipped;
                continue;
            }
            ++hs.sampled;
            take_min(hs.inf_st, rec.inf_st);
            take_max(hs.sup_st, rec.sup_st);
            take_max(hs.sup_stt, rec.sup_stt);
            take_max(hs.sup_sttt, rec.sup_sttt);
            take_min(hs.min_middle, rec.min_middle);
            if (cc.r <= 1.0 / chT && cc.a - cc.r <= 1.0)
                take_min(hs.inf_st_small, rec.inf_st);
            if (cc.a - cc.r >= 1.0 / chT && cc.r >= chT)
                take_min(hs.min_denom_margin, rec.min_denom_margin);
        }
        check_coverage(rep, "coverage", T, hs.sampled > 0);
        check_coverage(rep, "coverage-small-branch", T,
                       std::isfinite(hs.inf_st_small.log_value));
        check_coverage(rep, "coverage-far-branch", T,
                       std::isfinite(hs.min_denom_margin.log_value));
        if (hs.sampled > 0) {
            check_inf(rep, "inf|phi_st|", T, hs.inf_st, kCircleInfRate);
            check_sups(rep, "", T, hs, kCircleSupRate);
            if (std::isfinite(hs.inf_st_small.log_value))
                check_inf(rep, "small-branch inf|phi_st|", T, hs.inf_st_small,
                          kCircleSmallInfRate);
            if (std::isfinite(hs.min_denom_margin.log_value) &&
                !(hs.min_denom_margin.log_value >= 0.0))
                note_violation(rep, "far-branch denominator margin", T,
                               hs.min_denom_margin, 0.0);
        }
        rep.records.push_back(std::move(hs));
    }
    add_standard_fits(rep, "", "");
    rep.passed = rep.violations.empty();
    return rep;
}

BoundReport verify_intersecting(const std::vector<double>& T_list,
                                const ScanConfig& cfg) {
    validate(cfg);
    validate_horizons(T_list);
    BoundReport rep;
    rep.case_id = "crossing-circle";

    const int n_in = std::max(1, (cfg.samples + 1) / 2);
    const int n_out = std::max(1, cfg.samples - n_in);
    for (std::size_t k = 0; k < T_list.size(); ++k) {
        const double T = T_list[k];
        auto inside = sample_nontube_params(PairKind::CrossingInside, T,
                                            cfg.tube_radius, n_in,
                                            cfg.seed + 0x100003ull * k);
        // Canonical crossing probes: one with the crossing at height 1.2,
        // one axis-centered.
        for (CircleCase probe :
             {CircleCase{0.5, 1.3}, CircleCase{0.0, std::exp(0.5)}}) {
            PhaseCase c = probe;
            if (kind_condition(PairKind::CrossingInside, c) &&
                nontube_viability(c, T, cfg.tube_radius).ok)
                inside.push_back(c);
        }
        const auto outside = sample_nontube_params(PairKind::CrossingOutside,
                                                   T, cfg.tube_radius, n_out,
                                                   cfg.seed + 0x100003ull * k);

        HorizonSummary in;
        in.T = T;
        in.branch = "inside";
        for (const auto& c : inside) {
            const ScanExtrema rec = scan_extrema(c, T, cfg);
            if (rec.skipped) {
                ++in.skipped;
                continue;
            }
            ++in.sampled;
            take_min(in.inf_st, rec.inf_st);
            take_max(in.sup_st, rec.sup_st);
            take_max(in.sup_stt, rec.sup_stt);
            take_max(in.sup_sttt, rec.sup_sttt);
            take_min(in.inf_ratio, rec.inf_ratio);
            take_min(in.min_middle, rec.min_middle);
        }
        check_coverage(rep, "coverage-inside", T, in.sampled > 0);
        if (in.sampled > 0) {
            check_inf(rep, "inside inf|phi_st/(t-t0)|", T, in.inf_ratio,
                      kInsideRatioRate);
            check_sups(rep, "inside ", T, in, kInsideSupRate);
            if (!(in.min_middle.log_value >= std::log(kMiddleFloor)))
                note_violation(rep, "inside middle factor", T, in.min_middle,
                               std::log(kMiddleFloor));
        }
        rep.records.push_back(std::move(in));

        HorizonSummary out;
        out.T = T;
        out.branch = "outside";
        for (const auto& c : outside) {
            const ScanExtrema rec = scan_extrema(c, T, cfg);
            if (rec.skipped) {
                ++out.skipped;
                continue;
            }
            ++out.sampled;
            take_min(out.inf_st, rec.inf_st);
            take_max(out.sup_st, rec.sup_st);
            take_max(out.sup_stt, rec.sup_stt);
            take_max(out.sup_sttt, rec.sup_sttt);
            take_min(out.inf_ratio, rec.inf_ratio);
            take_min(out.min_middle, rec.min_middle);
        }
        check_coverage(rep, "coverage-outside", T, out.sampled > 0);
        if (out.sampled > 0) {
            check_inf(rep, "outside inf|phi_st|", T, out.inf_st,
                      kOutsideInfRate);
            check_sups(rep, "outside ", T, out, kOutsideSupRate);
            if (!(out.min_middle.log_value >= std::log(kMiddleFloor)))
                note_violation(rep, "outside middle factor", T,
                               out.min_middle, std::log(kMiddleFloor));
        }
        rep.records.push_back(std::move(out));
    }

    add_fit(rep, "inside/inf_ratio",
            series(rep, "inside", &HorizonSummary::inf_ratio));
    add_standard_fits(rep, "inside", "inside/");
    add_standard_fits(rep, "outside", "outside/");
    // Horizon-independence of the middle-factor floor: pooled over both
    // branches, its fitted slope must not decay.
    {
        std::vector<std::pair<double, double>> pooled;
        for (const auto& hs : rep.records)
            if (std::isfinite(hs.min_middle.log_value))
                pooled.emplace_back(hs.T, hs.min_middle.log_value);
        // Two records per horizon; collapse to the per-horizon min.
        std::vector<std::pair<double, double>> collapsed;
        for (const auto& p : pooled) {
            bool merged = false;
            for (auto& q : collapsed)
                if (q.first == p.first) {
                    q.second = std::min(q.second, p.second);
                    merged = true;
                }
            if (!merged) collapsed.push_back(p);
        }
        add_fit(rep, "min_middle", collapsed);
        for (const auto& f : rep.fits)
            if (f.series == "min_middle" && !(f.slope >= -kMiddleSlopeTol))
                rep.violations.push_back({"middle factor horizon slope", 0, 0,
                                          0, 0, 0, f.slope,
                                          -kMiddleSlopeTol});
    }
    rep.passed = rep.violations.empty();
    return rep;
}

namespace {

nlohmann::ordered_json json_extremum(const Extremum& e) {
    nlohmann::ordered_json j;
    j["log_value"] = e.log_value;
    j["a"] = e.a;
    j["r"] = e.r;
    j["t"] = e.t;
    j["s"] = e.s;
    return j;
}

} // namespace

std::string to_json(const BoundReport& report) {
    nlohmann::ordered_json j;
    j["case"] = report.case_id;
    j["passed"] = report.passed;
    j["records"] = nlohmann::ordered_json::array();
    for (const auto& hs : report.records) {
        nlohmann::ordered_json r;
        r["T"] = hs.T;
        if (!hs.branch.empty()) r["branch"] = hs.branch;
        r["sampled"] = hs.sampled;
        r["skipped"] = hs.skipped;
        r["inf_st"] = json_extremum(hs.inf_st);
        r["sup_st"] = json_extremum(hs.sup_st);
        r["sup_stt"] = json_extremum(hs.sup_stt);
        r["sup_sttt"] = json_extremum(hs.sup_sttt);
        if (std::isfinite(hs.inf_ratio.log_value))
            r["inf_ratio"] = json_extremum(hs.inf_ratio);
        if (std::isfinite(hs.min_middle.log_value))
            r["min_middle"] = json_extremum(hs.min_middle);
        if (std::isfinite(hs.min_denom_margin.log_value))
            r["min_denom_margin"] = json_extremum(hs.min_denom_margin);
        if (std::isfinite(hs.inf_st_small.log_value))
            r["inf_st_small"] = json_extremum(hs.inf_st_small);
        j["records"].push_back(std::move(r));
    }
    j["fits"] = nlohmann::ordered_json::array();
    for (const auto& f : report.fits) {
        nlohmann::ordered_json r;
        r["series"] = f.series;
        r["slope"] = f.slope;
        r["intercept"] = f.intercept;
        r["residual"] = f.residual;
        j["fits"].push_back(std::move(r));
    }
    j["violations"] = nlohmann::ordered_json::array();
    for (const auto& v : report.violations) {
        nlohmann::ordered_json r;
        r["quantity"] = v.quantity;
        r["T"] = v.T;
        r["a"] = v.a;
        r["r"] = v.r;
        r["t"] = v.t;
        r["s"] = v.s;
        r["log_value"] = v.log_value;
        r["log_bound"] = v.log_bound;
        j["violations"].push_back(std::move(r));
    }
    return j.dump();
}

} // namespace restcheck::boundscan
