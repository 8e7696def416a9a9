// Copyright 2026 The biphoton authors.
// Licensed under the Apache License, Version 2.0.

#include "biphoton/bell.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace biphoton {

namespace {

constexpr double kPi = std::numbers::pi;

ChshResult combine(double e_ab, double e_ab_prime, double e_a_prime_b,
                   double e_a_prime_b_prime) {
    ChshResult r{e_ab, e_ab_prime, e_a_prime_b, e_a_prime_b_prime, 0.0, false};
    r.s_value = r.e_ab + r.e_ab_prime + r.e_a_prime_b - r.e_a_prime_b_prime;
    r.violated = beyond_classical_bound(r.s_value);
    return r;
}

ChshSettings family_settings(double theta) { return {0.0, 2.0 * theta, theta, -theta}; }

// Golden-section maximization of f on [lo, hi]; f must be unimodal there.
double golden_max(const std::function<double(double)>& f, double lo, double hi) {
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > 1e-12) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

ViolationScan scan_with(const std::vector<double>& theta_grid,
                        const std::function<double(std::size_t, double)>& s_of,
                        const std::function<double(double)>* refine_with) {
    if (theta_grid.empty()) throw std::invalid_argument("scan needs at least one theta");
    if (!std::is_sorted(theta_grid.begin(), theta_grid.end())) {
        throw std::invalid_argument("theta grid must be ascending");
    }
    ViolationScan scan;
    scan.points.reserve(theta_grid.size());
    for (std::size_t i = 0; i < theta_grid.size(); ++i) {
        const double s = s_of(i, theta_grid[i]);
        scan.points.push_back({theta_grid[i], s, beyond_classical_bound(s)});
    }
    const auto& pts = scan.points;
    const std::size_t n = pts.size();

    // The violating run around the origin. S(0) = 2 exactly, so the grid
    // point sitting on the tangent (the one nearest 0, when it is 0 up to
    // rounding) never violates and must not split the run in two.
    std::size_t center = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs(pts[i].theta) < std::abs(pts[center].theta)) center = i;
    }
    double spacing = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < n; ++i) {
        spacing = std::min(spacing, pts[i].theta - pts[i - 1].theta);
    }
    const bool on_tangent = n >= 2 ? std::abs(pts[center].theta) <= 0.25 * spacing
                                   : pts[center].theta == 0.0;
    if (!pts[center].violated && !on_tangent) return scan;

    std::size_t left = center, right = center;
    while (right + 1 < n && pts[right + 1].violated) ++right;
    while (left > 0 && pts[left - 1].violated) --left;
    bool any_violation = false;
    for (std::size_t i = left; i <= right; ++i) any_violation |= pts[i].violated;
    if (!any_violation) return scan;

    // Sharpens the boundary between the run and its non-violating neighbor;
    // without a refiner the grid values are reported as-is.
    auto bisect = [&](double inside, double outside) {
        if (refine_with == nullptr) return inside;
        double in = inside, out = outside;
        while (std::abs(out - in) > 1e-6) {
            const double mid = 0.5 * (in + out);
            (beyond_classical_bound((*refine_with)(mid)) ? in : out) = mid;
        }
        return 0.5 * (in + out);
    };

    ViolationInterval interval{0.0, 0.0};
    interval.hi = right + 1 < n ? bisect(pts[right].theta, pts[right + 1].theta)
                                : pts[right].theta;
    interval.lo = left > 0 ? bisect(pts[left].theta, pts[left - 1].theta) : pts[left].theta;
    scan.interval = interval;
    return scan;
}

}  // namespace

ChshSettings canonical_settings() { return {0.0, 0.5 * kPi, 0.25 * kPi, -0.25 * kPi}; }

bool beyond_classical_bound(double s_value) {
    return std::abs(s_value) > 2.0 + kClassicalBoundTol;
}

double correlation_at(double phi_s, double phi_a) {
    return degree_of_correlation(joint_probabilities(build_rto(phi_s, phi_a)));
}

double sampled_correlation_at(double phi_s, double phi_a, std::uint64_t trials,
                              std::uint64_t seed) {
    const JointDistribution joint = joint_probabilities(build_rto(phi_s, phi_a));
    return estimate_correlation(sample_trials(joint, trials, seed)).c_hat;
}

ChshResult chsh_statistic(const ChshSettings& settings) {
    return combine(correlation_at(settings.a, settings.b),
                   correlation_at(settings.a, settings.b_prime),
                   correlation_at(settings.a_prime, settings.b),
                   correlation_at(settings.a_prime, settings.b_prime));
}

ChshResult chsh_statistic_sampled(const ChshSettings& settings, std::uint64_t trials,
                                  std::uint64_t base_seed) {
    return combine(
        sampled_correlation_at(settings.a, settings.b, trials, base_seed),
        sampled_correlation_at(settings.a, settings.b_prime, trials, base_seed + 1),
        sampled_correlation_at(settings.a_prime, settings.b, trials, base_seed + 2),
        sampled_correlation_at(settings.a_prime, settings.b_prime, trials, base_seed + 3));
}

ChshMaximum maximize_chsh(double grid_step) {
    if (!(grid_step > 0.0 && grid_step <= kPi / 8.0)) {
        throw std::invalid_argument("grid_step must lie in (0, pi/8]");
    }
    const int n = std::max(16, static_cast<int>(std::lround(2.0 * kPi / grid_step)));
    const double step = 2.0 * kPi / n;

    // With a gauge-fixed at 0 the grid stage only needs correlations at
    // lattice differences, so fill those once from the pipeline.
    std::vector<double> e_at(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        e_at[static_cast<std::size_t>(k)] = correlation_at(k * step, 0.0);
    }
    auto e_idx = [&](int i) { return e_at[static_cast<std::size_t>(((i % n) + n) % n)]; };

    // For fixed a', S = [E(a,b) + E(a',b)] + [E(a,b') - E(a',b')] splits into
    // independent b and b' terms, so each a' costs O(n) instead of O(n^2).
    double best = -1.0;
    int best_ap = 0, best_b = 0, best_bp = 0;
    for (int ap = 0; ap < n; ++ap) {
        int b_hi = 0, b_lo = 0, bp_hi = 0, bp_lo = 0;
        double f_hi = -4.0, f_lo = 4.0, g_hi = -4.0, g_lo = 4.0;
        for (int k = 0; k < n; ++k) {
            const double f = e_idx(-k) + e_idx(ap - k);
            const double g = e_idx(-k) - e_idx(ap - k);
            if (f > f_hi) { f_hi = f; b_hi = k; }
            if (f < f_lo) { f_lo = f; b_lo = k; }
            if (g > g_hi) { g_hi = g; bp_hi = k; }
            if (g < g_lo) { g_lo = g; bp_lo = k; }
        }
        if (f_hi + g_hi > best) {
            best = f_hi + g_hi;
            best_ap = ap;
            best_b = b_hi;
            best_bp = bp_hi;
        }
        if (-(f_lo + g_lo) > best) {
            best = -(f_lo + g_lo);
            best_ap = ap;
            best_b = b_lo;
            best_bp = bp_lo;
        }
    }

    ChshSettings settings{0.0, best_ap * step, best_b * step, best_bp * step};
    double* const coords[] = {&settings.a_prime, &settings.b, &settings.b_prime};
    for (int pass = 0; pass < 2; ++pass) {
        for (double* coord : coords) {
            const double center = *coord;
            *coord = golden_max(
                [&](double x) {
                    *coord = x;
                    return std::abs(chsh_statistic(settings).s_value);
                },
                center - step, center + step);
        }
    }
    return {settings, chsh_statistic(settings)};
}

ViolationScan violation_scan(const std::vector<double>& theta_grid) {
    const std::function<double(double)> s_at = [](double theta) {
        return chsh_statistic(family_settings(theta)).s_value;
    };
    return scan_with(
        theta_grid, [&](std::size_t, double theta) { return s_at(theta); }, &s_at);
}

ViolationScan violation_scan_sampled(const std::vector<double>& theta_grid,
                                     std::uint64_t trials, std::uint64_t base_seed) {
    return scan_with(
        theta_grid,
        [&](std::size_t i, double theta) {
            return chsh_statistic_sampled(family_settings(theta), trials,
                                          base_seed + 4 * static_cast<std::uint64_t>(i))
                .s_value;
        },
        nullptr);
}

std::vector<double> linspace(double lo, double hi, int steps) {
    if (steps < 2) throw std::invalid_argument("linspace needs at least two steps");
    std::vector<double> values(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        values[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (steps - 1);
    }
    return values;
}

}  // namespace biphoton
