#include "restcheck/lorentz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "restcheck/detail/rng.hpp"

namespace lz = restcheck::lorentz;
using restcheck::detail::SplitRng;

namespace {

lz::SampledFunction random_cells(SplitRng& rng, std::size_t n, double length) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform() < 0.15 ? 0.0 : rng.log_uniform(1e-3, 1e3);
    if (*std::max_element(v.begin(), v.end()) == 0.0) v[0] = 1.0;
    return lz::make_sampled(std::move(v), length);
}

} // namespace

TEST_CASE("construction validates and takes magnitudes") {
    const auto u = lz::make_sampled({-3.0, 2.0, -1.0}, 6.0);
    CHECK(u.values[0] == 3.0);
    CHECK(u.values[2] == 1.0);
    CHECK(u.cell() == doctest::Approx(2.0));
    CHECK_THROWS_AS(lz::make_sampled({}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(lz::make_sampled({1.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(lz::make_sampled({1.0}, -2.0), std::invalid_argument);
    CHECK_THROWS_AS(lz::make_sampled({1.0 / 0.0}, 1.0), std::invalid_argument);
}

TEST_CASE("distribution function on constants and ramps") {
    const auto one = lz::make_sampled(std::vector<double>(8, 1.0), 1.0);
    CHECK(lz::distribution_fn(one, 0.5) == doctest::Approx(1.0));
    CHECK(lz::distribution_fn(one, 2.0) == 0.0);
    CHECK(lz::distribution_fn(one, 1.0) == 0.0); // strict super-level set

    // Midpoint-sampled ramp 0 -> 1: measure{u > alpha} = 1 - alpha up to a cell.
    const std::size_t n = 200;
    std::vector<double> ramp(n);
    for (std::size_t i = 0; i < n; ++i) {
        ramp[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    }
    const auto u = lz::make_sampled(std::move(ramp), 1.0);
    for (double alpha : {0.0, 0.1, 0.37, 0.5, 0.93}) {
        CHECK(std::abs(lz::distribution_fn(u, alpha) - (1.0 - alpha)) <= 1.0 / n + 1e-12);
    }

    CHECK_THROWS_AS(lz::distribution_fn(one, -0.1), std::invalid_argument);
}

TEST_CASE("distribution function is nonincreasing and right-continuous in alpha") {
    SplitRng rng(11, 0);
    const auto u = random_cells(rng, 64, 3.0);
    double prev = lz::distribution_fn(u, 0.0);
    for (int k = 1; k <= 50; ++k) {
        const double alpha = 1e-3 * std::pow(1e6 / 1e-3, k / 50.0);
        const double cur = lz::distribution_fn(u, alpha);
        CHECK(cur <= prev);
        prev = cur;
    }
    // Right-continuity at a value actually taken: omega(v) excludes the cells
    // equal to v, and nudging alpha upward does not change the count.
    const double v = u.values[7];
    if (v > 0.0) {
        CHECK(lz::distribution_fn(u, v) ==
              lz::distribution_fn(u, v * (1.0 + 1e-12)));
    }
}

TEST_CASE("rearrangement of an indicator is a single step") {
    // Indicator of measure m = 0.75 with height 3, on [0, 2] split into 8 cells.
    std::vector<double> v(8, 0.0);
    v[2] = v[5] = v[6] = 3.0;
    const auto u = lz::make_sampled(std::move(v), 2.0);
    const auto r = lz::rearrangement(u);
    REQUIRE(r.value.size() == 2);
    CHECK(r.value[0] == 3.0);
    CHECK(r.value[1] == 0.0);
    CHECK(r.breakpoint[0] == 0.0);
    CHECK(r.breakpoint[1] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(r.breakpoint[2] == 2.0);
    CHECK(r.weight[0] + r.weight[1] == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("monotone decreasing input is its own rearrangement") {
    std::vector<double> v(32);
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = 10.0 / (1.0 + static_cast<double>(i));
    }
    const auto u = lz::make_sampled(v, 4.0);
    const auto r = lz::rearrangement(u);
    REQUIRE(r.value.size() == v.size()); // all values distinct
    for (std::size_t i = 0; i < v.size(); ++i) {
        CHECK(r.value[i] == v[i]);
        CHECK(r.weight[i] == doctest::Approx(4.0 / 32.0).epsilon(1e-15));
    }
}

TEST_CASE("rearrangement is nonincreasing, equimeasurable, and measure-complete") {
    SplitRng rng(12, 3);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform(0.0, 200.0));
        const auto u = random_cells(rng, n, rng.log_uniform(0.05, 20.0));
        const auto r = lz::rearrangement(u);

        REQUIRE(r.breakpoint.size() == r.value.size() + 1);
        REQUIRE(r.weight.size() == r.value.size());
        CHECK(r.breakpoint.front() == 0.0);
        CHECK(r.breakpoint.back() == u.length);
        for (std::size_t k = 1; k < r.value.size(); ++k) {
            CHECK(r.value[k] < r.value[k - 1]);
            CHECK(r.breakpoint[k] > r.breakpoint[k - 1]);
        }
        double total = 0.0;
        for (double w : r.weight) total += w;
        CHECK(total == doctest::Approx(u.length).epsilon(1e-13));

        const double top = r.value.front();
        for (int k = 0; k < 100; ++k) {
            const double alpha =
                k % 3 == 0 ? u.values[static_cast<std::size_t>(
                                 rng.uniform(0.0, static_cast<double>(n)))]
                           : rng.uniform(0.0, top * 1.1);
            CHECK(lz::distribution_fn(u, alpha) ==
                  doctest::Approx(lz::distribution_fn(r, alpha)).epsilon(1e-13));
        }
    }
}

TEST_CASE("norm of a single step is height times measure^(1/p) for every q") {
    // Height h = 2.5 on measure m = 0.75 inside [0, 2].
    std::vector<double> v(8, 0.0);
    v[1] = v[4] = v[7] = 2.5;
    const auto u = lz::make_sampled(std::move(v), 2.0);
    const double m = 0.75;
    for (double p : {1.0, 2.0, 3.0, 4.0}) {
        for (double q : {1.0, 2.0, 2.5, 4.0, 7.0}) {
            CHECK(lz::lorentz_norm(u, p, q) ==
                  doctest::Approx(2.5 * std::pow(m, 1.0 / p)).epsilon(1e-13));
        }
    }
    CHECK(lz::weak_norm(u, 3.0) == doctest::Approx(2.5 * std::pow(m, 1.0 / 3.0)).epsilon(1e-13));
}

TEST_CASE("p equals q recovers the grid Lp norm") {
    SplitRng rng(13, 5);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform(0.0, 128.0));
        const auto u = random_cells(rng, n, rng.log_uniform(0.1, 10.0));
        for (double p : {1.0, 2.0, 3.5, 4.0}) {
            const double a = lz::lorentz_norm(u, p, p);
            const double b = lz::grid_norm(u, p);
            worst = std::max(worst, std::abs(a - b) / std::max(a, 1e-300));
        }
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("norms are homogeneous and rearrangement-invariant") {
    SplitRng rng(14, 2);
    const auto u = random_cells(rng, 97, 5.0);
    auto shuffled = u;
    for (std::size_t k = shuffled.values.size(); k > 1; --k) {
        const std::size_t j = static_cast<std::size_t>(rng.uniform(0.0, static_cast<double>(k)));
        std::swap(shuffled.values[k - 1], shuffled.values[std::min(j, k - 1)]);
    }
    auto scaled = u;
    for (double& x : scaled.values) x *= 37.5;
    for (double p : {1.0, 2.0, 4.0}) {
        for (double q : {1.0, 2.0, 4.0, 6.0}) {
            const double base = lz::lorentz_norm(u, p, q);
            CHECK(lz::lorentz_norm(shuffled, p, q) == doctest::Approx(base).epsilon(1e-12));
            CHECK(lz::lorentz_norm(scaled, p, q) == doctest::Approx(37.5 * base).epsilon(1e-12));
        }
    }
}

TEST_CASE("lorentz norm validates its exponents") {
    const auto u = lz::make_sampled({1.0, 2.0}, 1.0);
    CHECK_THROWS_AS(lz::lorentz_norm(u, 0.5, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(lz::lorentz_norm(u, 2.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(lz::lorentz_norm(u, 1.0 / 0.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(lz::weak_norm(u, 0.99), std::invalid_argument);
    CHECK_THROWS_AS(lz::grid_norm(u, 0.0), std::invalid_argument);
}

TEST_CASE("weak norm of a two-step function maximizes over the breakpoints") {
    // v0 = 4 on measure 0.5, v1 = 1 on measure 1.5 (length 2, 8 cells).
    std::vector<double> v = {1.0, 4.0, 1.0, 1.0, 4.0, 1.0, 1.0, 1.0};
    const auto u = lz::make_sampled(std::move(v), 2.0);
    for (double p : {1.0, 2.0, 4.0}) {
        const double expect = std::max(4.0 * std::pow(0.5, 1.0 / p), 1.0 * std::pow(2.0, 1.0 / p));
        CHECK(lz::weak_norm(u, p) == doctest::Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("weak norm identity and embedding hold on random data") {
    SplitRng rng(15, 9);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform(0.0, 96.0));
        const auto u = random_cells(rng, n, rng.log_uniform(0.1, 10.0));
        for (double p : {1.0, 2.0, 4.0}) {
            const auto w = lz::weak_norm_routes(u, p);
            CHECK(w.from_rearrangement ==
                  doctest::Approx(w.from_distribution).epsilon(1e-12));
            const double strong = lz::lorentz_norm(u, p, p);
            CHECK(w.from_rearrangement <= strong * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("interpolation ratio is exactly one on a single step") {
    const auto rep = lz::interpolation_check(lz::make_sampled({2.5, 2.5, 2.5}, 1.7));
    CHECK(rep.ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.l4 == doctest::Approx(rep.weak4).epsilon(1e-13));
    CHECK(rep.l4 == doctest::Approx(rep.l42).epsilon(1e-13));
    CHECK(rep.bound == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-15));
}

TEST_CASE("interpolation ratio stays under the sharp constant on random data") {
    SplitRng rng(16, 1);
    const double bound = std::pow(2.0, 0.25);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform(0.0, 160.0));
        const auto u = random_cells(rng, n, rng.log_uniform(0.05, 20.0));
        const auto rep = lz::interpolation_check(u);
        CHECK(rep.ratio <= bound + 1e-9);
        worst = std::max(worst, rep.ratio);
    }
    CHECK(worst <= bound + 1e-9);
    CHECK(worst > 0.9); // the corpus gets within sight of the constant
}

TEST_CASE("interpolation ratio of a ramp sits strictly under the constant") {
    std::vector<double> v(256);
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = (static_cast<double>(i) + 0.5) / 256.0;
    }
    const auto rep = lz::interpolation_check(lz::make_sampled(std::move(v), 1.0));
    CHECK(rep.ratio < rep.bound - 0.01);
    CHECK(rep.ratio > 0.8);
}

TEST_CASE("wide dynamic range stays finite and in closed form") {
    // Peak 7e150: the raw fourth-power sum would overflow, but the norm
    // itself is representable and must come back finite and exact.
    const auto u = lz::make_sampled({1e-150, 3.0, 7e150, 2e-9}, 1e-3);
    const double m = 1e-3 / 4.0;
    for (double p : {1.0, 2.0, 4.0}) {
        const double expect = 7e150 * std::pow(m, 1.0 / p);
        CHECK(lz::lorentz_norm(u, p, p) == doctest::Approx(expect).epsilon(1e-9));
        CHECK(lz::grid_norm(u, p) == doctest::Approx(expect).epsilon(1e-9));
        CHECK(lz::weak_norm(u, p) == doctest::Approx(expect).epsilon(1e-9));
    }
    const auto rep = lz::interpolation_check(u);
    CHECK(std::isfinite(rep.ratio));
    CHECK(rep.ratio <= rep.bound + 1e-9);
    CHECK(rep.ratio == doctest::Approx(1.0).epsilon(1e-6)); // one dominant step
}

TEST_CASE("interpolation check rejects the zero function") {
    CHECK_THROWS_AS(lz::interpolation_check(lz::make_sampled({0.0, 0.0}, 1.0)),
                    std::invalid_argument);
}

TEST_CASE("verification report passes and serializes deterministically") {
    const auto rep = lz::verify_lorentz(300, 20250819);
    CHECK(rep.passed);
    REQUIRE(rep.records.size() == 8);
    for (const auto& rec : rep.records) {
        CAPTURE(rec.name);
        CHECK(rec.pass);
        CHECK(rec.value <= rec.reference);
    }

    const auto j = lz::to_json(rep);
    const std::string text = j.dump();
    const auto parsed = nlohmann::json::parse(text);
    CHECK(parsed["passed"].get<bool>());
    CHECK(parsed["records"].size() == 8);
    CHECK(parsed["records"][0]["name"].is_string());

    const auto rep2 = lz::verify_lorentz(300, 20250819);
    CHECK(lz::to_json(rep2).dump() == text);

    CHECK_THROWS_AS(lz::verify_lorentz(0, 1), std::invalid_argument);
}
