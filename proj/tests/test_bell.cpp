// Copyright 2026 The biphoton authors.
// Licensed under the Apache License, Version 2.0.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "biphoton/bell.hpp"
#include "biphoton/rng.hpp"

using namespace biphoton;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTsirelson = 2.0 * std::numbers::sqrt2;

double closed_form_s(const ChshSettings& s) {
    return std::cos(s.a - s.b) + std::cos(s.a - s.b_prime) + std::cos(s.a_prime - s.b) -
           std::cos(s.a_prime - s.b_prime);
}

// Positive root of 3 cos(theta) - cos(3 theta) = 2, found independently of
// the scan's own refinement.
double family_boundary() {
    double lo = 0.5, hi = 1.5;  // S(0.5) > 2, S(1.5) < 2
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (3.0 * std::cos(mid) - std::cos(3.0 * mid) > 2.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("correlation_at equals the cosine of the difference") {
    CHECK(correlation_at(0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(correlation_at(0.0, 0.25 * kPi) ==
          doctest::Approx(std::cos(0.25 * kPi)).epsilon(1e-12));
    CHECK(correlation_at(kPi / 3.0, kPi / 3.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("canonical settings reach the quantum maximum") {
    const ChshResult r = chsh_statistic(canonical_settings());
    CHECK(std::abs(r.s_value - kTsirelson) <= 1e-12);
    CHECK(r.violated);
}

TEST_CASE("equal settings sit exactly on the classical bound") {
    for (double phase : {0.0, 0.4, 1.9}) {
        const ChshResult r = chsh_statistic({phase, phase, phase, phase});
        CHECK(std::abs(r.s_value - 2.0) <= 1e-12);
        CHECK_FALSE(r.violated);
    }
}

TEST_CASE("an orthogonal-settings example, by direct evaluation") {
    // E(0,pi/2) + E(0,0) + E(pi/2,pi/2) - E(pi/2,0) = 0 + 1 + 1 - 0.
    const ChshResult r = chsh_statistic({0.0, 0.5 * kPi, 0.5 * kPi, 0.0});
    CHECK(r.s_value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_FALSE(r.violated);
}

TEST_CASE("pipeline matches the closed form on 100 random settings") {
    Xoshiro256 rng(55);
    for (int i = 0; i < 100; ++i) {
        const ChshSettings s{rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi),
                             rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi)};
        CHECK(std::abs(chsh_statistic(s).s_value - closed_form_s(s)) <= 1e-12);
    }
}

TEST_CASE("sampled statistic approaches the analytic one") {
    const ChshResult analytic = chsh_statistic(canonical_settings());
    const ChshResult sampled = chsh_statistic_sampled(canonical_settings(), 200000, 42);
    // Four correlations, each with std_err about sqrt(1/2)/sqrt(n).
    CHECK(std::abs(sampled.s_value - analytic.s_value) < 0.02);
    CHECK(sampled.violated);
}

TEST_CASE("maximize_chsh finds the Tsirelson point") {
    const ChshMaximum fine = maximize_chsh(kPi / 64.0);
    CHECK(std::abs(std::abs(fine.result.s_value) - kTsirelson) <= 1e-3);
    CHECK(std::abs(fine.result.s_value) <= kTsirelson + 1e-9);
    CHECK(fine.result.violated);

    const ChshMaximum coarse = maximize_chsh(kPi / 8.0);
    CHECK(std::abs(coarse.result.s_value) > 2.0);
    CHECK(std::abs(coarse.result.s_value) <= kTsirelson + 1e-9);
}

TEST_CASE("maximize_chsh validates its grid step") {
    CHECK_THROWS_AS(maximize_chsh(0.0), std::invalid_argument);
    CHECK_THROWS_AS(maximize_chsh(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(maximize_chsh(0.5), std::invalid_argument);
}

TEST_CASE("restricting b' = b cannot violate the bound") {
    double worst = 0.0;
    for (int i = 0; i < 64; ++i) {
        for (int j = 0; j < 64; ++j) {
            const double ap = 2.0 * kPi * i / 64.0;
            const double b = 2.0 * kPi * j / 64.0;
            worst = std::max(worst, std::abs(chsh_statistic({0.0, ap, b, b}).s_value));
        }
    }
    CHECK(worst <= 2.0 + 1e-12);
}

TEST_CASE("violation scan follows 3cos(theta) - cos(3theta)") {
    const ViolationScan scan = violation_scan(linspace(-0.5 * kPi, 0.5 * kPi, 181));
    REQUIRE(scan.points.size() == 181);
    for (const auto& p : scan.points) {
        CHECK(std::abs(p.s_value - (3.0 * std::cos(p.theta) - std::cos(3.0 * p.theta))) <=
              1e-12);
    }

    const auto& quarter = scan.points[135];  // theta = pi/4 on the 1-degree grid
    CHECK(quarter.theta == doctest::Approx(0.25 * kPi));
    CHECK(quarter.s_value == doctest::Approx(kTsirelson).epsilon(1e-12));
    CHECK(quarter.violated);

    const auto& center = scan.points[90];  // theta = 0
    CHECK(std::abs(center.s_value - 2.0) <= 1e-12);
    CHECK_FALSE(center.violated);
}

TEST_CASE("violating set is symmetric and the interval matches the root") {
    const ViolationScan scan = violation_scan(linspace(-0.5 * kPi, 0.5 * kPi, 181));
    for (std::size_t i = 0; i < scan.points.size(); ++i) {
        const auto& mirrored = scan.points[scan.points.size() - 1 - i];
        CHECK(scan.points[i].violated == mirrored.violated);
    }

    REQUIRE(scan.interval.has_value());
    const double boundary = family_boundary();
    CHECK(std::abs(scan.interval->hi - boundary) <= 1e-3);
    CHECK(std::abs(scan.interval->lo + boundary) <= 1e-3);
    CHECK(std::abs(scan.interval->lo + scan.interval->hi) <= 2e-3);
}

TEST_CASE("scan without any violation reports no interval") {
    const ViolationScan scan = violation_scan(linspace(1.3, 1.5, 5));
    CHECK_FALSE(scan.interval.has_value());
    for (const auto& p : scan.points) CHECK_FALSE(p.violated);
}

TEST_CASE("theta grids at and beyond the boundary") {
    CHECK_THROWS_AS(violation_scan({}), std::invalid_argument);
    const ViolationScan tiny = violation_scan({0.25 * kPi});
    REQUIRE(tiny.points.size() == 1);
    CHECK(tiny.points.front().violated);
}

TEST_CASE("sampled scan marks the deep-violation region") {
    const ViolationScan scan =
        violation_scan_sampled(linspace(-0.5 * kPi, 0.5 * kPi, 7), 50000, 11);
    REQUIRE(scan.points.size() == 7);
    // theta = +-pi/4 sits far above the classical bound, beyond noise.
    CHECK(scan.points[1].violated);
    CHECK(scan.points[5].violated);
    CHECK(scan.interval.has_value());
}

TEST_CASE("linspace endpoints") {
    const auto grid = linspace(-1.0, 1.0, 5);
    REQUIRE(grid.size() == 5);
    CHECK(grid.front() == -1.0);
    CHECK(grid.back() == 1.0);
    CHECK(grid[2] == doctest::Approx(0.0));
    CHECK_THROWS_AS(linspace(0.0, 1.0, 1), std::invalid_argument);
}
