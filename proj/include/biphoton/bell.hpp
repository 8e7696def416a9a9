// Copyright 2026 The biphoton authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "biphoton/detection.hpp"

namespace biphoton {

/// Phase-shifter settings for the four-correlation CHSH combination:
/// a, a_prime at station S and b, b_prime at station A, radians.
struct ChshSettings {
    double a = 0.0;
    double a_prime = 0.0;
    double b = 0.0;
    double b_prime = 0.0;
};

/// The settings that reach the quantum maximum 2*sqrt(2).
ChshSettings canonical_settings();

/// Slack around the classical bound |S| = 2 when flagging violations, so
/// settings that sit exactly on the bound are not flipped by rounding.
inline constexpr double kClassicalBoundTol = 1e-12;

/// |S| beyond the classical bound by more than kClassicalBoundTol.
bool beyond_classical_bound(double s_value);

struct ChshResult {
    double e_ab = 0.0;
    double e_ab_prime = 0.0;
    double e_a_prime_b = 0.0;
    double e_a_prime_b_prime = 0.0;
    /// S = E(a,b) + E(a,b') + E(a',b) - E(a',b').
    double s_value = 0.0;
    /// |S| > 2, beyond any local hidden-variable model
    /// (beyond_classical_bound of s_value).
    bool violated = false;
};

/// Degree of correlation at one pair of shifter settings, through the full
/// unitary pipeline; equals cos(phi_s - phi_a).
double correlation_at(double phi_s, double phi_a);

/// Monte-Carlo estimate of the same correlation.
double sampled_correlation_at(double phi_s, double phi_a, std::uint64_t trials,
                              std::uint64_t seed);

ChshResult chsh_statistic(const ChshSettings& settings);

/// As chsh_statistic, with each correlation estimated from `trials` samples;
/// the four estimates use seeds base_seed .. base_seed + 3.
ChshResult chsh_statistic_sampled(const ChshSettings& settings, std::uint64_t trials,
                                  std::uint64_t base_seed);

struct ChshMaximum {
    ChshSettings settings;
    ChshResult result;
};

/**
 * Largest |S| over settings, with a gauge-fixed at 0. Coarse grid with the
 * given step over the remaining three phases (correlations looked up from a
 * per-difference table filled by the pipeline), then golden-section
 * refinement of each coordinate. grid_step must lie in (0, pi/8].
 */
ChshMaximum maximize_chsh(double grid_step);

struct ViolationPoint {
    double theta = 0.0;
    double s_value = 0.0;
    bool violated = false;
};

struct ViolationInterval {
    double lo = 0.0;
    double hi = 0.0;
};

struct ViolationScan {
    std::vector<ViolationPoint> points;
    /// The maximal violating interval around theta = 0 covered by the grid,
    /// endpoints refined by bisection to better than 1e-3. Absent when no
    /// grid point violates next to the origin.
    std::optional<ViolationInterval> interval;
};

/**
 * S along the one-parameter family a = 0, a' = 2 theta, b = theta,
 * b' = -theta, which traces S(theta) = 3 cos(theta) - cos(3 theta).
 */
ViolationScan violation_scan(const std::vector<double>& theta_grid);

/// Sampled variant; the interval is read off the grid without refinement.
/// Scan point i draws from seeds base_seed + 4i .. base_seed + 4i + 3.
ViolationScan violation_scan_sampled(const std::vector<double>& theta_grid,
                                     std::uint64_t trials, std::uint64_t base_seed);

/// Evenly spaced values over [lo, hi], endpoints included; steps >= 2.
std::vector<double> linspace(double lo, double hi, int steps);

}  // namespace biphoton
