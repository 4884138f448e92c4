#include "restcheck/phase.hpp"

#include "restcheck/detail/stable.hpp"
#include "restcheck/detail/taylor.hpp"

#include <quadmath.h>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace restcheck::phase {

using detail::acosh1p;
using detail::Jet;

namespace {

constexpr double kEvalArgGuard = 350.0;
constexpr double kJetArgGuard = 40.0;
constexpr double kParamGuard = 1e20;

void validate_params(const PhaseCase& c) {
    if (const auto* line = std::get_if<LineCase>(&c)) {
        if (!std::isfinite(line->a) || std::abs(line->a) > kParamGuard)
            throw std::invalid_argument("line offset out of supported range");
        return;
    }
    const auto& circ = std::get<CircleCase>(c);
    if (!std::isfinite(circ.a) || !std::isfinite(circ.r) || circ.r <= 0 ||
        circ.r > kParamGuard || std::abs(circ.a) > kParamGuard)
        throw std::invalid_argument("circle parameters out of supported range");
}

void validate_args(double t, double s, double guard) {
    if (!std::isfinite(t) || !std::isfinite(s) || std::abs(t) > guard ||
        std::abs(s) > guard)
        throw std::domain_error("phase argument outside overflow guard");
}

/// cosh(phi) - 1 for the line pair, in a form with no cancellation:
/// a^2 e^{-s-t}/2 + 2 sinh^2((t-s)/2).
double line_u(double a, double t, double s) {
    const double sh = std::sinh(0.5 * (t - s));
    return 0.5 * a * a * std::exp(-s - t) + 2.0 * sh * sh;
}

/// cosh(phi) - 1 for the circle pair via the point coordinates
/// (x2, y2) = (a - r tanh s, r sech s) against (0, e^t).
double circle_u(double a, double r, double t, double s) {
    const double y2 = r / std::cosh(s);
    const double x2 = a - r * std::tanh(s);
    const double et = std::exp(t);
    const double dy = et - y2;
    return (x2 * x2 + dy * dy) / (2.0 * et * y2);
}

double u_of(const PhaseCase& c, double t, double s) {
    if (const auto* line = std::get_if<LineCase>(&c))
        return line_u(line->a, t, s);
    const auto& circ = std::get<CircleCase>(c);
    return circle_u(circ.a, circ.r, t, s);
}

/// arcosh(1 + u) lifted to jets; singular at u = 0.
Jet jet_acosh1p(const Jet& u) {
    const double w = std::sqrt(u.f * (u.f + 2.0)); // sinh(phi)
    const double d1 = 1.0 / w;
    const double d2 = -(u.f + 1.0) / (w * w * w);
    return {acosh1p(u.f), d1 * u.f1, d2 * u.f1 * u.f1 + d1 * u.f2};
}

/// cosh(phi) - 1 as a jet in t.
Jet u_jet_in_t(const PhaseCase& c, double t, double s) {
    if (const auto* line = std::get_if<LineCase>(&c)) {
        const double ea = 0.5 * line->a * line->a * std::exp(-s - t);
        return {line_u(line->a, t, s), -ea + std::sinh(t - s),
                ea + std::cosh(t - s)};
    }
    const auto& circ = std::get<CircleCase>(c);
    const double y2 = circ.r / std::cosh(s);
    const double x2 = circ.a - circ.r * std::tanh(s);
    const Jet w = detail::jet_exp(Jet::variable(t));
    const Jet dy = w - y2;
    return (x2 * x2 + dy * dy) / ((2.0 * y2) * w);
}

} // namespace

bool is_intersecting(const CircleCase& c) { return c.r > std::abs(c.a); }

CrossingParams crossing_params(const CircleCase& c) {
    if (!is_intersecting(c))
        throw std::domain_error("crossing parameters require an intersecting circle");
    return {0.5 * std::log(c.r * c.r - c.a * c.a),
            0.5 * std::log((c.r + c.a) / (c.r - c.a))};
}

double phi_eval(const PhaseCase& c, double t, double s) {
    validate_params(c);
    validate_args(t, s, kEvalArgGuard);
    const double phi = acosh1p(u_of(c, t, s));
    if (!std::isfinite(phi))
        throw std::domain_error("separation overflow");
    return phi;
}

double phi_dt(const PhaseCase& c, double t, double s) {
    validate_params(c);
    validate_args(t, s, kEvalArgGuard);
    const Jet u = u_jet_in_t(c, t, s);
    if (!(u.f > 0))
        throw std::domain_error("separation derivative at a coincidence point");
    return jet_acosh1p(u).f1;
}

PhaseJet phi_jet(const PhaseCase& c, double t, double s) {
    validate_params(c);
    validate_args(t, s, kJetArgGuard);

    PhaseJet out{};
    out.phi = acosh1p(u_of(c, t, s));
    out.admissible = out.phi >= 2.0;

    const double e2s = std::exp(2.0 * s);
    const Jet w = detail::jet_exp(Jet::variable(t));
    const double e2t = w.f * w.f;

    if (const auto* line = std::get_if<LineCase>(&c)) {
        const double a = line->a;
        if (a == 0)
            throw std::invalid_argument("line offset a = 0 is the coincident pair");
        const double es = std::exp(s);
        // e^t - e^s anchored through expm1 so D1 keeps full precision at t ~ s.
        const Jet diff{es * std::expm1(t - s), w.f, w.f};
        const Jet sum = w + es;
        const Jet d1 = diff * diff + a * a;
        const Jet d2 = sum * sum + a * a;
        const Jet d = d1 * d2;
        const Jet d32 = d * detail::jet_sqrt(d);
        const Jet num = (-8.0 * a * a * e2s) * (w * w);
        const Jet r = num / d32;
        out.phi_st = r.f;
        out.phi_stt = r.f1;
        out.phi_sttt = r.f2;
        out.A = a * a + e2t + e2s;
        return out;
    }

    const auto& circ = std::get<CircleCase>(c);
    const double a = circ.a, r = circ.r;
    if (r == std::abs(a))
        throw std::invalid_argument("tangent circle (r = |a|) is degenerate");

    const double u0 = circle_u(a, r, t, s);
    if (!(u0 > 0))
        throw std::domain_error("mixed derivative at a coincidence point");

    // u as a jet in t; D = (A - 4re^{s+t})(A + 4re^{s+t}) with the small
    // factor written as 4re^{s+t} u to avoid the cancellation in A itself.
    const double y2 = r / std::cosh(s);
    const double x2 = a - r * std::tanh(s);
    const Jet dy = w - y2;
    const Jet u = (x2 * x2 + dy * dy) / ((2.0 * y2) * w);
    const double es = std::exp(s);
    const Jet f_minus = (4.0 * r * es) * (w * u);
    const Jet f_plus = f_minus + (8.0 * r * es) * w;
    const Jet d = f_minus * f_plus;
    const Jet d32 = d * detail::jet_sqrt(d);

    // Numerator factors M (constant in t) and G. In the intersecting case
    // both are anchored at their exact zeros so phi_st vanishes to the last
    // bit on t = t0 and s = s0.
    double m;
    Jet g;
    if (is_intersecting(circ)) {
        const auto [t0, s0] = crossing_params(circ);
        m = -(a + r) * std::expm1(2.0 * (s - s0));
        g = Jet{(r * r - a * a) * std::expm1(2.0 * (t - t0)), 2.0 * e2t,
                4.0 * e2t};
    } else {
        m = (a + r) + (a - r) * e2s;
        g = Jet{(a * a - r * r) + e2t, 2.0 * e2t, 4.0 * e2t};
    }
    const Jet num = (16.0 * r * e2s * m) * ((w * w) * g);
    const Jet res = num / d32;
    out.phi_st = res.f;
    out.phi_stt = res.f1;
    out.phi_sttt = res.f2;
    out.A = f_minus.f + 4.0 * r * es * w.f;
    return out;
}

namespace {

__float128 qphi(const PhaseCase& c, __float128 t, __float128 s) {
    __float128 u;
    if (const auto* line = std::get_if<LineCase>(&c)) {
        const __float128 sh = sinhq(0.5Q * (t - s));
        u = 0.5Q * line->a * line->a * expq(-s - t) + 2.0Q * sh * sh;
    } else {
        const auto& circ = std::get<CircleCase>(c);
        const __float128 y2 = circ.r / coshq(s);
        const __float128 x2 = circ.a - circ.r * tanhq(s);
        const __float128 et = expq(t);
        const __float128 dy = et - y2;
        u = (x2 * x2 + dy * dy) / (2.0Q * et * y2);
    }
    return log1pq(u + sqrtq(u * (u + 2.0Q)));
}

struct StencilNode {
    int offset;
    int num; // integer numerator; the common denominator divides once at the
             // end so the weight sum cancels exactly
};

// Fourth-order central stencils, numerators over the listed denominator.
constexpr StencilNode kFirst[] = {{-2, 1}, {-1, -8}, {1, 8}, {2, -1}}; // /12
constexpr StencilNode kSecond[] = {
    {-2, -1}, {-1, 16}, {0, -30}, {1, 16}, {2, -1}}; // /12
constexpr StencilNode kThird[] = {
    {-3, 1}, {-2, -8}, {-1, 13}, {1, -13}, {2, 8}, {3, -1}}; // /8

} // namespace

double phi_fd_oracle(const PhaseCase& c, double t, double s, int order) {
    validate_params(c);
    validate_args(t, s, kEvalArgGuard);
    if (order < 1 || order > 3)
        throw std::invalid_argument("finite-difference order must be 1, 2 or 3");

    const double eps = std::numeric_limits<double>::epsilon();
    const double hs = std::cbrt(eps) * std::max(1.0, std::abs(s));
    const double ht =
        std::pow(eps, 1.0 / (order + 2.0)) * std::max(1.0, std::abs(t));

    const StencilNode* tn = kFirst;
    int tcount = 4, tden = 12;
    if (order == 2) {
        tn = kSecond;
        tcount = 5;
    } else if (order == 3) {
        tn = kThird;
        tcount = 6;
        tden = 8;
    }

    __float128 acc = 0.0Q;
    for (const StencilNode& sn : kFirst)
        for (int j = 0; j < tcount; ++j)
            acc += (__float128)(sn.num * tn[j].num) *
                   qphi(c, t + tn[j].offset * ht, s + sn.offset * hs);

    __float128 scale = (__float128)(12 * tden) * hs;
    for (int k = 0; k < order; ++k)
        scale *= ht;
    return (double)(acc / scale);
}

namespace {

/// min over t in [0,1] of cosh phi(t, s), via the closed-form inner
/// minimizer in v = e^{2t} clamped to [1, e^2].
double min_over_t_cosh(const PhaseCase& c, double s) {
    constexpr double e2 = 7.38905609893065; // e^2
    if (const auto* line = std::get_if<LineCase>(&c)) {
        const double e2s = std::exp(2.0 * s);
        const double v = std::min(std::max(line->a * line->a + e2s, 1.0), e2);
        return (line->a * line->a + e2s + v) / (2.0 * std::exp(s) * std::sqrt(v));
    }
    const auto& circ = std::get<CircleCase>(c);
    const double p = (circ.a - circ.r) * (circ.a - circ.r);
    const double q = (circ.a + circ.r) * (circ.a + circ.r);
    const double es = std::exp(s), ems = std::exp(-s);
    const double v =
        std::min(std::max((p * es + q * ems) / (es + ems), 1.0), e2);
    const double sv = std::sqrt(v);
    return ((p * es + q * ems) / sv + (es + ems) * sv) / (4.0 * circ.r);
}

/// Golden-section argmin of a convex function on [lo, hi].
template <class F>
double convex_argmin(F&& f, double lo, double hi) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 160; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - gr * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + gr * (hi - lo);
            f2 = f(x2);
        }
    }
    return 0.5 * (lo + hi);
}

/// Root of f on [lo, hi] with f(lo), f(hi) of opposite sign.
template <class F>
double bisect(F&& f, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((flo < 0) == (fm < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Joint min over t in [0,1], s real of cosh phi for a circle with offset
/// magnitude alpha: sqrt(g(v*)) / (2r), g(v) = ((alpha-r)^2+v)((alpha+r)^2+v)/v,
/// v* = clamp(|alpha^2 - r^2|, 1, e^2).
double circle_joint_min_cosh(double alpha, double r) {
    constexpr double e2 = 7.38905609893065;
    const double p = (alpha - r) * (alpha - r);
    const double q = (alpha + r) * (alpha + r);
    const double v = std::min(std::max(std::abs(alpha * alpha - r * r), 1.0), e2);
    return std::sqrt((p + v) * (q + v) / v) / (2.0 * r);
}

} // namespace

AdmissibleWindow admissible_window(const PhaseCase& c, double T) {
    validate_params(c);
    if (!(T >= 2.0) || T > 300.0)
        throw std::invalid_argument("horizon T must lie in [2, 300]");

    AdmissibleWindow win{};
    win.T = T;
    const double chT = std::cosh(T);

    double blo, bhi;
    if (const auto* line = std::get_if<LineCase>(&c)) {
        win.a_bounds = {0.0, std::exp(1.0) * std::sinh(T)};
        win.r_bounds = {0.0, std::numeric_limits<double>::infinity()};
        blo = -T - 2.0;
        bhi = T + 3.0;
        (void)line;
    } else {
        const auto& circ = std::get<CircleCase>(c);
        const double a = circ.a, r = circ.r;
        win.r_bounds = {std::max((a + r) * (a + r), 1.0) /
                            (4.0 * std::exp(1.0) * r * chT),
                        4.0 * r * chT};
        blo = std::log(win.r_bounds.first) - 2.0;
        bhi = std::log(win.r_bounds.second) + 2.0;

        // |a|-satisfiability: joint min cosh is quasiconvex in alpha
        // (decreasing, flat at the crossing plateau, then increasing).
        auto f = [&](double alpha) { return circle_joint_min_cosh(alpha, r); };
        double ahi = 4.0 * r + 4.0;
        int guard = 0;
        while (f(ahi) <= chT && ++guard < 200)
            ahi *= 2.0;
        const double adip = convex_argmin(f, 0.0, ahi);
        if (f(adip) > chT) {
            win.a_bounds = {std::numeric_limits<double>::quiet_NaN(),
                            std::numeric_limits<double>::quiet_NaN()};
        } else {
            const double lo =
                f(0.0) > chT ? bisect([&](double x) { return f(x) - chT; }, 0.0, adip)
                             : 0.0;
            const double hi = bisect([&](double x) { return f(x) - chT; }, adip, ahi);
            win.a_bounds = {lo, hi};
        }
    }

    auto m = [&](double s) { return min_over_t_cosh(c, s); };
    const double smin = convex_argmin(m, blo, bhi);
    if (m(smin) > chT) {
        win.s_lo = std::numeric_limits<double>::infinity();
        win.s_hi = -std::numeric_limits<double>::infinity();
        return win;
    }
    win.s_lo = bisect([&](double s) { return chT - m(s); }, blo, smin);
    win.s_hi = bisect([&](double s) { return m(s) - chT; }, smin, bhi);
    return win;
}

} // namespace restcheck::phase
