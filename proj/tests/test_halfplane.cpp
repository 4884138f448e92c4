#include <doctest.h>

#include "restcheck/detail/rng.hpp"
#include "restcheck/halfplane.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

using namespace restcheck::halfplane;
using restcheck::detail::SplitRng;

namespace {

/// Independent distance oracle: quadrature of the length element along the
/// connecting geodesic arc (vertical segment or half-circle through p, q).
double path_length_oracle(const HPoint& p, const HPoint& q) {
    if (p.x == q.x)
        return std::abs(std::log(q.y / p.y));
    const double c = (q.x * q.x + q.y * q.y - p.x * p.x - p.y * p.y) /
                     (2.0 * (q.x - p.x));
    const double r = std::hypot(p.x - c, p.y);
    double phi_p = std::atan2(p.y, p.x - c);
    double phi_q = std::atan2(q.y, q.x - c);
    if (phi_p > phi_q)
        std::swap(phi_p, phi_q);
    // Composite Gauss-Legendre on 1/sin(phi), 4 nodes per panel.
    static const double gx[4] = {-0.8611363115940526, -0.3399810435848563,
                                 0.3399810435848563, 0.8611363115940526};
    static const double gw[4] = {0.3478548451374538, 0.6521451548625461,
                                 0.6521451548625461, 0.3478548451374538};
    const int panels = 256;
    const double h = (phi_q - phi_p) / panels;
    double sum = 0;
    for (int k = 0; k < panels; ++k) {
        const double mid = phi_p + (k + 0.5) * h;
        for (int j = 0; j < 4; ++j)
            sum += gw[j] / std::sin(mid + 0.5 * h * gx[j]);
        (void)r;
    }
    return sum * 0.5 * h;
}

HPoint random_point(SplitRng& rng) {
    return {rng.uniform(-3.0, 3.0), rng.log_uniform(0.05, 20.0)};
}

MobiusMap random_mobius(SplitRng& rng) {
    double a = 0;
    while (std::abs(a) < 0.2)
        a = rng.uniform(-2.0, 2.0);
    const double b = rng.uniform(-2.0, 2.0);
    const double c = rng.uniform(-2.0, 2.0);
    return {a, b, c, (1.0 + b * c) / a};
}

} // namespace

TEST_CASE("distance: frozen value, symmetry, diagonal") {
    CHECK(hp_distance({0, 1}, {1, 1}) == doctest::Approx(0.9624236501192069).epsilon(1e-12));
    CHECK(hp_distance({2, 5}, {2, 5}) == 0.0);

    SplitRng rng(42, 0);
    for (int i = 0; i < 10000; ++i) {
        const HPoint p = random_point(rng), q = random_point(rng);
        CHECK(std::abs(hp_distance(p, q) - hp_distance(q, p)) <= 1e-15);
    }
}

TEST_CASE("distance: triangle inequality on random triples") {
    SplitRng rng(42, 1);
    for (int i = 0; i < 2000; ++i) {
        const HPoint p = random_point(rng), q = random_point(rng), w = random_point(rng);
        CHECK(hp_distance(p, q) <= hp_distance(p, w) + hp_distance(w, q) + 1e-12);
    }
}

TEST_CASE("distance agrees with path-length quadrature oracle") {
    SplitRng rng(7, 0);
    for (int i = 0; i < 200; ++i) {
        const HPoint p = random_point(rng), q = random_point(rng);
        CHECK(hp_distance(p, q) == doctest::Approx(path_length_oracle(p, q)).epsilon(1e-6));
    }
    // Vertically aligned pair exercises the log branch.
    CHECK(hp_distance({1, 2}, {1, 6}) == doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("geodesic_point: unit speed for both geodesic kinds") {
    SplitRng rng(7, 1);
    for (int i = 0; i < 500; ++i) {
        const double s = rng.uniform(-4.0, 4.0);
        const double sp = s + rng.uniform(-5.0, 5.0);
        const Geodesic line = VerticalLine{rng.uniform(-2.0, 2.0)};
        CHECK(hp_distance(geodesic_point(line, s), geodesic_point(line, sp)) ==
              doctest::Approx(std::abs(s - sp)).epsilon(1e-9));
        const Geodesic circ = HalfCircle{rng.uniform(-3.0, 3.0), rng.log_uniform(0.1, 10.0)};
        CHECK(hp_distance(geodesic_point(circ, s), geodesic_point(circ, sp)) ==
              doctest::Approx(std::abs(s - sp)).epsilon(1e-9));
    }
}

TEST_CASE("geodesic_point: frozen half-circle value and endpoint limits") {
    const HPoint p = geodesic_point(HalfCircle{0.5, 1.3}, std::log(1.5));
    CHECK(std::abs(p.x) <= 1e-14);
    CHECK(p.y == doctest::Approx(1.2).epsilon(1e-14));

    const HPoint far = geodesic_point(HalfCircle{2.0, 1.0}, 300.0);
    CHECK(far.x == doctest::Approx(1.0).epsilon(1e-12)); // a - r
    CHECK(far.y < 1e-100);
    CHECK(far.y > 0);
}

TEST_CASE("geodesic_point: parameter overflow guard") {
    CHECK_THROWS_AS(geodesic_point(VerticalLine{0}, 701.0), std::domain_error);
    CHECK_THROWS_AS(geodesic_point(HalfCircle{0, 1}, -701.0), std::domain_error);
    CHECK_NOTHROW(geodesic_point(HalfCircle{0, 1}, 699.0));
}

TEST_CASE("dist_to_y_axis: frozen value and minimization oracle") {
    CHECK(dist_to_y_axis({1, 1}) == doctest::Approx(0.8813735870195430).epsilon(1e-12));
    CHECK(dist_to_y_axis({0, 5}) == 0.0);

    SplitRng rng(11, 0);
    for (int i = 0; i < 100; ++i) {
        const HPoint p = random_point(rng);
        // Golden-section minimization of distance to axis points (0, e^t).
        double lo = -20, hi = 20;
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        auto f = [&](double t) { return hp_distance(p, {0.0, std::exp(t)}); };
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = f(x1), f2 = f(x2);
        for (int it = 0; it < 200; ++it) {
            if (f1 < f2) {
                hi = x2; x2 = x1; f2 = f1;
                x1 = hi - gr * (hi - lo); f1 = f(x1);
            } else {
                lo = x1; x1 = x2; f1 = f2;
                x2 = lo + gr * (hi - lo); f2 = f(x2);
            }
        }
        CHECK(dist_to_y_axis(p) == doctest::Approx(std::min(f1, f2)).epsilon(1e-8));
    }
}

TEST_CASE("tube_contains: boundary points sit exactly on the tube wall") {
    const TubeRadius R(1.0);
    SplitRng rng(11, 1);
    for (int i = 0; i < 100; ++i) {
        const double y = rng.log_uniform(0.1, 10.0);
        const double x = y * std::sinh(1.0);
        CHECK(tube_contains({x, y}, R));
        CHECK(dist_to_y_axis({x, y}) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(!tube_contains({x * (1 + 1e-9), y}, R));
    }
}

TEST_CASE("tube_window: pointwise agreement with tube_contains") {
    SplitRng rng(13, 0);
    for (int i = 0; i < 100; ++i) {
        const double r = rng.log_uniform(0.1, 10.0);
        double a = rng.uniform(-3.0, 3.0) * r;
        if (std::abs(std::abs(a) - r) < 1e-6 * r)
            a *= 1.01;
        const TubeRadius R(rng.uniform(0.3, 2.0));
        const auto w = tube_window(a, r, R);
        for (int j = 0; j < 200; ++j) {
            const double s = rng.uniform(-12.0, 12.0);
            const double u = std::exp(s);
            const bool inside = tube_contains(geodesic_point(HalfCircle{a, r}, s), R);
            const bool windowed = w && u >= w->u_lo && u <= w->u_hi;
            // Skip samples within rounding distance of the window boundary.
            if (w && (std::abs(u - w->u_lo) < 1e-9 * (1 + u) ||
                      std::abs(u - w->u_hi) < 1e-9 * (1 + u)))
                continue;
            CHECK(inside == windowed);
        }
    }
}

TEST_CASE("tube_window: structural cases") {
    const TubeRadius R(1.0);
    const double S = std::sinh(1.0);

    // Far circle entirely outside: a/r above cosh R kills the discriminant.
    CHECK(!tube_window(10.0, 1.0, R).has_value());

    // Crossing circle always has a window; a = 0 contains the apex u = 1.
    const auto mid = tube_window(0.0, 2.0, R);
    REQUIRE(mid.has_value());
    CHECK(mid->u_lo < 1.0);
    CHECK(mid->u_hi > 1.0);
    CHECK(mid->u_lo == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(mid->u_hi == doctest::Approx(std::exp(1.0)).epsilon(1e-12));

    // Degenerate linear branches.
    const auto ray = tube_window(2.0, 2.0, R);
    REQUIRE(ray.has_value());
    CHECK(ray->degenerate);
    CHECK(ray->u_lo == doctest::Approx(1.0 / S).epsilon(1e-12));
    CHECK(std::isinf(ray->u_hi));
    const auto low = tube_window(-2.0, 2.0, R);
    REQUIRE(low.has_value());
    CHECK(low->degenerate);
    CHECK(low->u_lo == 0.0);
    CHECK(low->u_hi == doctest::Approx(S).epsilon(1e-12));

    CHECK_THROWS_AS(tube_window(1.0, -1.0, R), std::invalid_argument);
}

TEST_CASE("mobius_apply: preserves distance and the upper half-plane") {
    SplitRng rng(17, 0);
    for (int i = 0; i < 2000; ++i) {
        const MobiusMap m = random_mobius(rng);
        const HPoint p = random_point(rng), q = random_point(rng);
        const HPoint mp = mobius_apply(m, p), mq = mobius_apply(m, q);
        CHECK(mp.y > 0);
        CHECK(std::abs(hp_distance(mp, mq) - hp_distance(p, q)) <=
              1e-10 * (1 + hp_distance(p, q)));
    }
}

TEST_CASE("mobius map validation") {
    CHECK_THROWS_AS(MobiusMap(1, 0, 0, 2), std::invalid_argument);
    CHECK_NOTHROW(MobiusMap(2, 0, 0, 0.5));
}

TEST_CASE("mobius_image_of_y_axis: endpoints and membership") {
    // c = 0 keeps infinity fixed: image is vertical at b/d.
    const auto v = mobius_image_of_y_axis(MobiusMap(2, 1, 0, 0.5));
    REQUIRE(std::holds_alternative<VerticalLine>(v));
    CHECK(std::get<VerticalLine>(v).x0 == doctest::Approx(2.0));

    // d = 0 sends 0 to infinity: image is vertical at a/c.
    const auto v2 = mobius_image_of_y_axis(MobiusMap(3, -1, 1, 0));
    REQUIRE(std::holds_alternative<VerticalLine>(v2));
    CHECK(std::get<VerticalLine>(v2).x0 == doctest::Approx(3.0));

    // Generic image: axis points must land on the computed half-circle.
    SplitRng rng(17, 1);
    for (int i = 0; i < 300; ++i) {
        MobiusMap m = random_mobius(rng);
        if (m.c == 0.0 || m.d == 0.0)
            continue;
        const auto g = mobius_image_of_y_axis(m);
        REQUIRE(std::holds_alternative<HalfCircle>(g));
        const auto hc = std::get<HalfCircle>(g);
        for (double t : {-2.0, -0.5, 0.0, 1.0, 3.0}) {
            const HPoint im = mobius_apply(m, {0.0, std::exp(t)});
            CHECK(std::hypot(im.x - hc.a, im.y) == doctest::Approx(hc.r).epsilon(1e-9));
        }
    }
}

TEST_CASE("classify_pair: all branches and the frozen crossing example") {
    const auto pl = classify_pair(VerticalLine{2.0});
    REQUIRE(std::holds_alternative<ParallelLine>(pl));
    CHECK(std::get<ParallelLine>(pl).a == 2.0);

    const auto dc = classify_pair(HalfCircle{3.0, 1.0});
    REQUIRE(std::holds_alternative<DisjointCircle>(dc));

    const auto ic = classify_pair(HalfCircle{0.5, 1.3});
    REQUIRE(std::holds_alternative<IntersectingCircle>(ic));
    const auto& x = std::get<IntersectingCircle>(ic);
    CHECK(x.t0 == doctest::Approx(std::log(1.2)).epsilon(1e-12));
    CHECK(x.s0 == doctest::Approx(std::log(1.5)).epsilon(1e-12));
    // Both parametrizations meet at (0, 1.2).
    const HPoint on_axis = geodesic_point(VerticalLine{0}, x.t0);
    const HPoint on_circ = geodesic_point(HalfCircle{0.5, 1.3}, x.s0);
    CHECK(hp_distance(on_axis, on_circ) <= 1e-12);
    CHECK(on_axis.y == doctest::Approx(1.2).epsilon(1e-12));

    CHECK_THROWS_AS(classify_pair(HalfCircle{1.3, 1.3}), std::domain_error);
    CHECK_THROWS_AS(classify_pair(VerticalLine{0.0}), std::domain_error);
}

TEST_CASE("point validation rejects the closed lower half-plane") {
    CHECK_THROWS_AS(HPoint(0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(HPoint(1.0, -2.0), std::invalid_argument);
    CHECK_THROWS_AS(HPoint(1.0, std::numeric_limits<double>::quiet_NaN()),
                    std::invalid_argument);
}
