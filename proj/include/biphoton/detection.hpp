// Copyright 2026 The biphoton authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "biphoton/optics.hpp"

namespace biphoton {

/// Marginals may deviate from 1/2 by at most this much before the
/// no-signaling audit reports a failure.
inline constexpr double kNoSignalingTol = 1e-12;

/// The four coincidence probabilities p_jk = P(Sj & Ak). Fields are public
/// for plain reads; build through checked() or born_joint() so the
/// normalization invariant holds.
struct JointDistribution {
    double p11 = 1.0, p12 = 0.0, p21 = 0.0, p22 = 0.0;

    /// Validates each p in [0, 1] and sum 1 within 1e-12.
    static JointDistribution checked(double p11, double p12, double p21, double p22);
};

/// Born-rule coincidence probabilities of a pair state.
JointDistribution born_joint(const BipartiteState& psi);

/// Calibrated coincidence probabilities of the apparatus.
JointDistribution joint_probabilities(const Apparatus& apparatus);

/// Coincidence probabilities with the raw conventions (offset included).
JointDistribution joint_probabilities_raw(const Apparatus& apparatus);

double p_same(const JointDistribution& d);  // p11 + p22
double p_diff(const JointDistribution& d);  // p12 + p21

/// C = P(same) - P(diff), in [-1, 1].
double degree_of_correlation(const JointDistribution& d);

struct MarginalDistribution {
    double p_s1 = 0.0, p_s2 = 0.0, p_a1 = 0.0, p_a2 = 0.0;
};

/// Row and column sums of the joint distribution.
MarginalDistribution marginals(const JointDistribution& d);

/// Largest |marginal - 1/2| over the four single-station marginals.
double max_marginal_deviation(const JointDistribution& d);

/// Calibrated detector probabilities (P(D1), P(D2)) of the single-photon
/// interferometer.
std::pair<double, double> single_photon_probs(const MachZehnder& mz);

/// Coincidence counts from n simulated trials.
struct TrialCounts {
    std::uint64_t n11 = 0, n12 = 0, n21 = 0, n22 = 0;
    std::uint64_t seed = 0;
    std::uint64_t total = 0;
};

/**
 * n categorical draws over (p11, p12, p21, p22), in that fixed order, by
 * cumulative-probability inversion of xoshiro256** uniforms. Identical
 * (d, n, seed) give identical counts on every platform.
 */
TrialCounts sample_trials(const JointDistribution& d, std::uint64_t n, std::uint64_t seed);

struct CorrelationEstimate {
    double c_hat = 0.0;
    double std_err = 0.0;  // sqrt((1 - c_hat^2) / total)
    std::uint64_t total = 0;
};

CorrelationEstimate estimate_correlation(const TrialCounts& counts);

struct SweepPoint {
    double delta = 0.0;  // phi_s - phi_a
    JointDistribution joint;
    double c_analytic = 0.0;
    TrialCounts counts;
    CorrelationEstimate estimate;
};

/**
 * Evenly spaced delta values over [delta_min, delta_max], endpoints
 * included. Analytic values come from the unitary pipeline; sampled values
 * use seed base_seed + index, so points can be computed in any order with
 * identical results.
 */
std::vector<SweepPoint> correlation_sweep(double delta_min, double delta_max, int steps,
                                          std::uint64_t trials = 100000,
                                          std::uint64_t base_seed = 42);

struct NoSignalingReport {
    std::size_t points = 0;
    /// Worst |marginal - 1/2| and the setting where it occurs.
    double max_deviation = 0.0;
    double worst_phi_s = 0.0, worst_phi_a = 0.0;
    /// Worst elementwise |rho - I/2| over both reduced states.
    double max_rho_deviation = 0.0;
    double worst_rho_phi_s = 0.0, worst_rho_phi_a = 0.0;
    /// Both deviations within kNoSignalingTol.
    bool passed = false;
};

/**
 * Checks that neither station's local statistics depend on the remote
 * phase: on every setting the four marginals and both reduced density
 * operators must equal the maximally mixed values. A failure is reported,
 * not thrown.
 */
NoSignalingReport no_signaling_audit(const std::vector<std::pair<double, double>>& settings);

/// n x n grid over [lo, hi) x [lo, hi), phi_s-major order.
std::vector<std::pair<double, double>> phase_grid(int n, double lo, double hi);

struct Table1Row {
    double phase = 0.0;
    double p_d1 = 0.0, p_d2 = 0.0;      // single-photon interferometer
    double p_same = 0.0, p_diff = 0.0;  // entangled pair, delta = phase
    /// Non-empty on the rows where commonly quoted values disagree with the
    /// interference formulas.
    std::string note;
};

/// The five-row comparison of single-photon and pair statistics at
/// phase 0, pi/4, pi/2, 3pi/4, pi, computed from the pipeline.
std::vector<Table1Row> table1();

}  // namespace biphoton
