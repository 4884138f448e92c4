#include "restcheck/sphere.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include <doctest.h>
#include <json.hpp>

namespace sp = restcheck::sphere;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
const double kInf = std::numeric_limits<double>::infinity();

double zonal_scale(int n) { return std::sqrt((2.0 * n + 1.0) / (4.0 * kPi)); }

} // namespace

TEST_CASE("factory validates and stores the eigenvalue") {
    const auto f = sp::make_harmonic(sp::HarmonicKind::Zonal, 12);
    CHECK(f.degree == 12);
    CHECK(f.eigenvalue == doctest::Approx(std::sqrt(12.0 * 13.0)).epsilon(1e-15));
    CHECK(std::exp(f.log_scale) == doctest::Approx(zonal_scale(12)).epsilon(1e-14));
    CHECK_THROWS_AS(sp::make_harmonic(sp::HarmonicKind::Zonal, -1), std::invalid_argument);
    CHECK_THROWS_AS(sp::make_harmonic(sp::HarmonicKind::HighestWeight, 10001),
                    std::invalid_argument);
}

TEST_CASE("legendre recurrence matches closed low-degree forms") {
    for (double x : {-1.0, -0.7, -0.2, 0.0, 0.33, 0.9, 1.0}) {
        CHECK(sp::legendre(0, x) == 1.0);
        CHECK(sp::legendre(1, x) == x);
        CHECK(sp::legendre(2, x) == doctest::Approx(0.5 * (3 * x * x - 1)).epsilon(1e-15));
        CHECK(sp::legendre(3, x) == doctest::Approx(0.5 * (5 * x * x * x - 3 * x)).epsilon(1e-15));
        CHECK(sp::legendre(4, x) ==
              doctest::Approx((35 * std::pow(x, 4) - 30 * x * x + 3) / 8).epsilon(1e-14));
    }
    for (int n : {5, 17, 100, 999}) {
        CHECK(sp::legendre(n, 1.0) == 1.0); // recurrence is exact at the endpoint
        CHECK(sp::legendre(n, -1.0) == (n % 2 == 0 ? 1.0 : -1.0));
        for (double x : {-0.95, -0.4, 0.1, 0.77}) {
            CHECK(std::abs(sp::legendre(n, x)) <= 1.0 + 1e-12);
        }
    }
    CHECK_THROWS_AS(sp::legendre(3, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(sp::legendre(10001, 0.5), std::invalid_argument);
}

TEST_CASE("zonal evaluation peaks at the pole and is constant at degree zero") {
    for (int n : {1, 7, 64, 10000}) {
        CHECK(sp::zonal_eval(n, 0.0) == doctest::Approx(zonal_scale(n)).epsilon(1e-14));
        for (double theta : {0.3, 1.0, 2.2, kPi}) {
            CHECK(std::abs(sp::zonal_eval(n, theta)) <= zonal_scale(n) * (1 + 1e-12));
        }
    }
    for (double theta : {0.0, 0.5, 1.6, kPi}) {
        CHECK(sp::zonal_eval(0, theta) ==
              doctest::Approx(1.0 / std::sqrt(4.0 * kPi)).epsilon(1e-15));
    }
    CHECK_THROWS_AS(sp::zonal_eval(3, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(sp::zonal_eval(3, kPi + 0.1), std::invalid_argument);
}

TEST_CASE("beam evaluation: equatorial maximum, phase, and graceful underflow") {
    for (int n : {1, 10, 200}) {
        const auto f = sp::make_harmonic(sp::HarmonicKind::HighestWeight, n);
        const auto at_eq = sp::beam_eval(n, 0.5 * kPi, 0.0);
        CHECK(at_eq.real() == doctest::Approx(std::exp(f.log_scale)).epsilon(1e-13));
        CHECK(at_eq.imag() == 0.0);
        // e^{i n phi} phase
        const double phi = 0.37;
        const auto v = sp::beam_eval(n, 0.5 * kPi, phi);
        CHECK(std::arg(v) == doctest::Approx(std::remainder(n * phi, 2 * kPi)).epsilon(1e-12));
        // vanishes at the poles
        CHECK(std::abs(sp::beam_eval(n, 0.0, 1.0)) == 0.0);
    }
    // degree 0 is the same constant as the zonal family
    CHECK(sp::beam_eval(0, 0.0, 0.0).real() ==
          doctest::Approx(1.0 / std::sqrt(4.0 * kPi)).epsilon(1e-14));
    // far off the belt at high degree: underflows to zero instead of NaN
    const double tiny = std::abs(sp::beam_eval(5000, 0.25 * kPi, 1.0));
    CHECK(tiny == 0.0);
    CHECK(std::isfinite(tiny));
}

TEST_CASE("quadrature oracle confirms unit L2 norm for both families") {
    for (int n : {1, 2, 5, 18, 100, 283, 500}) {
        const auto z = sp::make_harmonic(sp::HarmonicKind::Zonal, n);
        const auto b = sp::make_harmonic(sp::HarmonicKind::HighestWeight, n);
        CHECK(sp::l2_norm_quadrature(z) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(sp::l2_norm_quadrature(b) == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("zonal harmonics of different degree are orthogonal") {
    const std::pair<int, int> pairs[] = {{1, 0}, {3, 7}, {40, 41}, {99, 100}, {2, 98}};
    for (const auto& [n, m] : pairs) {
        CHECK(std::abs(sp::zonal_product_integral(n, m)) <= 1e-8);
    }
    // and the diagonal reproduces the unit norm
    CHECK(sp::zonal_product_integral(25, 25) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("segment factory validates its ranges") {
    CHECK_THROWS_AS(sp::make_segment(sp::CircleKind::Equator, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sp::make_segment(sp::CircleKind::Equator, -1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sp::make_segment(sp::CircleKind::Equator, 7.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sp::make_segment(sp::CircleKind::Meridian, 1.0, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(sp::make_segment(sp::CircleKind::Meridian, 2.0, -3.2), std::invalid_argument);
    const auto seg = sp::make_segment(sp::CircleKind::Meridian, 1.0, -0.5);
    CHECK(seg.length == 1.0);
}

TEST_CASE("restriction norm of the constant harmonic is exact") {
    const auto f = sp::make_harmonic(sp::HarmonicKind::Zonal, 0);
    const double c = 1.0 / std::sqrt(4.0 * kPi);
    for (double p : {1.0, 2.0, 4.0, kInf}) {
        for (sp::CircleKind circle : {sp::CircleKind::Equator, sp::CircleKind::Meridian}) {
            const auto seg = sp::make_segment(circle, 1.0, -0.5);
            CHECK(sp::restriction_norm(f, seg, p) == doctest::Approx(c).epsilon(1e-12));
        }
    }
    // non-unit length scales by length^{1/p} for finite p
    const auto seg2 = sp::make_segment(sp::CircleKind::Equator, 2.0, 0.0);
    CHECK(sp::restriction_norm(f, seg2, 2.0) == doctest::Approx(c * std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("beam restriction on the equator is its constant magnitude") {
    for (int n : {3, 50, 141}) {
        const auto f = sp::make_harmonic(sp::HarmonicKind::HighestWeight, n);
        const double c = std::exp(f.log_scale);
        const auto unit = sp::make_segment(sp::CircleKind::Equator, 1.0, 0.4);
        for (double p : {1.0, 2.0, 6.0, kInf}) {
            CHECK(sp::restriction_norm(f, unit, p) == doctest::Approx(c).epsilon(1e-9));
        }
        const auto two = sp::make_segment(sp::CircleKind::Equator, 2.0, 0.0);
        CHECK(sp::restriction_norm(f, two, 2.0) == doctest::Approx(c * std::sqrt(2.0)).epsilon(1e-9));
    }
}

TEST_CASE("zonal sup norm on a pole-centered arc equals the pole value") {
    const auto seg = sp::make_segment(sp::CircleKind::Meridian, 1.0, -0.5);
    for (int n : {4, 33, 283}) {
        const auto f = sp::make_harmonic(sp::HarmonicKind::Zonal, n);
        CHECK(sp::restriction_norm(f, seg, kInf) ==
              doctest::Approx(std::exp(f.log_scale)).epsilon(1e-14));
    }
}

TEST_CASE("restriction norm agrees with a dense trapezoid oracle") {
    const auto f = sp::make_harmonic(sp::HarmonicKind::Zonal, 32);
    const auto seg = sp::make_segment(sp::CircleKind::Meridian, 1.0, -0.5);
    for (double p : {2.0, 4.0}) {
        const int n_pts = 200000;
        double sum = 0.0;
        for (int i = 0; i <= n_pts; ++i) {
            const double t = -0.5 + static_cast<double>(i) / n_pts;
            const double v = std::pow(std::abs(sp::zonal_eval(32, std::abs(t))), p);
            sum += (i == 0 || i == n_pts) ? 0.5 * v : v;
        }
        const double oracle = std::pow(sum / n_pts, 1.0 / p);
        CHECK(sp::restriction_norm(f, seg, p) == doctest::Approx(oracle).epsilon(1e-6));
    }
}

TEST_CASE("restriction norms are monotone in p and in segment length") {
    const auto f = sp::make_harmonic(sp::HarmonicKind::Zonal, 32);
    double prev = 0.0;
    for (double p : {1.0, 2.0, 3.0, 4.0, 8.0, kInf}) {
        const auto seg = sp::make_segment(sp::CircleKind::Meridian, 1.0, -0.5);
        const double cur = sp::restriction_norm(f, seg, p);
        CHECK(cur >= prev * (1.0 - 1e-9));
        prev = cur;
    }
    prev = 0.0;
    for (double len : {0.25, 0.5, 1.0, 2.0}) {
        const auto seg = sp::make_segment(sp::CircleKind::Meridian, len, -0.5 * len);
        const double cur = sp::restriction_norm(f, seg, 2.0);
        CHECK(cur >= prev);
        prev = cur;
    }
    CHECK_THROWS_AS(sp::restriction_norm(
                        f, sp::make_segment(sp::CircleKind::Equator, 1.0, 0.0), 0.5),
                    std::invalid_argument);
}

TEST_CASE("finite-difference eigenrelation residuals are small") {
    const auto z1 = sp::make_harmonic(sp::HarmonicKind::Zonal, 1);
    CHECK(sp::laplacian_residual(z1, 1000, 7) <= 1e-8);
    const auto z100 = sp::make_harmonic(sp::HarmonicKind::Zonal, 100);
    CHECK(sp::laplacian_residual(z100, 1000, 7) <= 1e-4);
    const auto b50 = sp::make_harmonic(sp::HarmonicKind::HighestWeight, 50);
    CHECK(sp::laplacian_residual(b50, 1000, 7) <= 1e-4);
    // determinism in the seed
    CHECK(sp::laplacian_residual(z100, 200, 11) == sp::laplacian_residual(z100, 200, 11));

    CHECK_THROWS_AS(sp::laplacian_residual(sp::make_harmonic(sp::HarmonicKind::Zonal, 0), 10, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(sp::laplacian_residual(sp::make_harmonic(sp::HarmonicKind::Zonal, 501), 10, 1),
                    std::invalid_argument);
}

TEST_CASE("reference exponent table is continuous at the critical point") {
    CHECK(sp::sigma_reference(2.0) == 0.25);
    CHECK(sp::sigma_reference(4.0) == 0.25);
    CHECK(sp::sigma_reference(4.0 + 1e-12) == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(sp::sigma_reference(8.0) == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(sp::sigma_reference(kInf) == 0.5);
    CHECK_THROWS_AS(sp::sigma_reference(1.5), std::invalid_argument);
}

TEST_CASE("exponent fits recover the reference table on saturating segments") {
    const std::vector<int> degrees = {18, 25, 35, 50, 71, 100};
    const auto meridian = sp::make_segment(sp::CircleKind::Meridian, 1.0, -0.5);
    const auto equator = sp::make_segment(sp::CircleKind::Equator, 1.0, 0.0);

    const auto beam_p2 = sp::exponent_fit(sp::HarmonicKind::HighestWeight, equator, 2.0, degrees);
    CHECK(std::abs(beam_p2.slope - 0.25) <= 0.04);

    const auto zonal_p8 = sp::exponent_fit(sp::HarmonicKind::Zonal, meridian, 8.0, degrees);
    CHECK(std::abs(zonal_p8.slope - 0.375) <= 0.04);

    const auto zonal_sup = sp::exponent_fit(sp::HarmonicKind::Zonal, meridian, kInf, degrees);
    CHECK(std::abs(zonal_sup.slope - 0.5) <= 0.02);
}

TEST_CASE("exponent fit rejects degenerate input") {
    const auto equator = sp::make_segment(sp::CircleKind::Equator, 1.0, 0.0);
    // odd zonal degrees vanish identically on the equator
    CHECK_THROWS_AS(
        sp::exponent_fit(sp::HarmonicKind::Zonal, equator, 2.0, {3, 5, 7, 9, 11, 13}),
        std::runtime_error);
    CHECK_THROWS_AS(
        sp::exponent_fit(sp::HarmonicKind::Zonal, equator, 2.0, {2, 4, 6, 8, 10}),
        std::invalid_argument); // too few degrees
    CHECK_THROWS_AS(
        sp::exponent_fit(sp::HarmonicKind::Zonal, equator, 2.0, {2, 4, 6, 8, 10, 10}),
        std::invalid_argument); // not ascending
}

TEST_CASE("norm table covers the requested grid with positive norms") {
    const std::vector<double> ps = {2.0, 4.0, kInf};
    const std::vector<int> degrees = {18, 25, 35, 50, 71, 100};
    const auto rows = sp::norm_table(sp::HarmonicKind::HighestWeight,
                                     sp::make_segment(sp::CircleKind::Equator, 1.0, 0.0), ps,
                                     degrees);
    REQUIRE(rows.size() == ps.size() * degrees.size());
    for (const auto& r : rows) {
        CHECK(r.norm > 0.0);
        CHECK(std::isfinite(r.norm));
        CHECK(r.eigenvalue == doctest::Approx(std::sqrt(r.degree * (r.degree + 1.0))));
    }
}

TEST_CASE("verification suite passes and serializes deterministically") {
    sp::SphereConfig cfg;
    cfg.ortho_max_degree = 60;
    cfg.laplacian_points = 400;
    const auto rep = sp::verify_sphere(cfg);
    CHECK(rep.passed);
    CHECK(rep.rows.size() == cfg.p_list.size() * cfg.degrees.size() * 2);
    for (const auto& r : rep.records) {
        CAPTURE(r.name);
        CHECK(r.pass);
    }
    // the critical point is saturated by both families
    bool both_at_critical = false;
    for (const auto& e : rep.exponents) {
        if (e.p == 4.0) {
            both_at_critical = std::abs(e.zonal_slope - 0.25) <= 0.04 &&
                               std::abs(e.beam_slope - 0.25) <= 0.04;
        }
    }
    CHECK(both_at_critical);

    const std::string text = sp::to_json(rep).dump();
    const auto parsed = nlohmann::json::parse(text);
    CHECK(parsed["passed"].get<bool>());
    CHECK(parsed["exponents"].size() == cfg.p_list.size());
    CHECK(parsed["exponents"].back()["p"] == "inf");
    CHECK(sp::to_json(sp::verify_sphere(cfg)).dump() == text);

    sp::SphereConfig bad;
    bad.p_list = {1.5};
    CHECK_THROWS_AS(sp::verify_sphere(bad), std::invalid_argument);
    bad = sp::SphereConfig{};
    bad.degrees = {10, 20, 30};
    CHECK_THROWS_AS(sp::verify_sphere(bad), std::invalid_argument);
}
