// Copyright 2026 The biphoton authors.
// Licensed under the Apache License, Version 2.0.

#include "biphoton/detection.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "biphoton/rng.hpp"

namespace biphoton {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kProbTol = 1e-12;

}  // namespace

JointDistribution JointDistribution::checked(double p11, double p12, double p21,
                                             double p22) {
    const JointDistribution d{p11, p12, p21, p22};
    for (double p : {p11, p12, p21, p22}) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("joint probabilities must lie in [0, 1]");
        }
    }
    if (std::abs(p11 + p12 + p21 + p22 - 1.0) > kProbTol) {
        throw std::invalid_argument("joint probabilities must sum to 1");
    }
    return d;
}

JointDistribution born_joint(const BipartiteState& psi) {
    const Mat2& a = psi.amps();
    // Dividing by the computed total strips the last-ulp drift the unitary
    // products leave on the squared moduli.
    const double total =
        std::norm(a(0, 0)) + std::norm(a(0, 1)) + std::norm(a(1, 0)) + std::norm(a(1, 1));
    return JointDistribution::checked(std::norm(a(0, 0)) / total, std::norm(a(0, 1)) / total,
                                      std::norm(a(1, 0)) / total,
                                      std::norm(a(1, 1)) / total);
}

JointDistribution joint_probabilities(const Apparatus& apparatus) {
    return born_joint(evolve(apparatus));
}

JointDistribution joint_probabilities_raw(const Apparatus& apparatus) {
    return born_joint(evolve_raw(apparatus));
}

double p_same(const JointDistribution& d) { return d.p11 + d.p22; }

double p_diff(const JointDistribution& d) { return d.p12 + d.p21; }

double degree_of_correlation(const JointDistribution& d) { return p_same(d) - p_diff(d); }

MarginalDistribution marginals(const JointDistribution& d) {
    return {d.p11 + d.p12, d.p21 + d.p22, d.p11 + d.p21, d.p12 + d.p22};
}

double max_marginal_deviation(const JointDistribution& d) {
    const MarginalDistribution m = marginals(d);
    double dev = 0.0;
    for (double p : {m.p_s1, m.p_s2, m.p_a1, m.p_a2}) dev = std::max(dev, std::abs(p - 0.5));
    return dev;
}

std::pair<double, double> single_photon_probs(const MachZehnder& mz) {
    const auto p = mz_output(mz).probabilities();
    return {p[0], p[1]};
}

TrialCounts sample_trials(const JointDistribution& d, std::uint64_t n, std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("at least one trial required");
    const double c1 = d.p11;
    const double c2 = c1 + d.p12;
    const double c3 = c2 + d.p21;
    TrialCounts counts{0, 0, 0, 0, seed, n};
    Xoshiro256 rng(seed);
    for (std::uint64_t i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        if (u < c1)
            ++counts.n11;
        else if (u < c2)
            ++counts.n12;
        else if (u < c3)
            ++counts.n21;
        else
            ++counts.n22;
    }
    return counts;
}

CorrelationEstimate estimate_correlation(const TrialCounts& counts) {
    if (counts.total == 0) throw std::invalid_argument("no trials to estimate from");
    const double total = static_cast<double>(counts.total);
    const double agree = static_cast<double>(counts.n11) + static_cast<double>(counts.n22);
    const double differ = static_cast<double>(counts.n12) + static_cast<double>(counts.n21);
    const double c_hat = (agree - differ) / total;
    const double std_err = std::sqrt(std::max(0.0, 1.0 - c_hat * c_hat) / total);
    return {c_hat, std_err, counts.total};
}

std::vector<SweepPoint> correlation_sweep(double delta_min, double delta_max, int steps,
                                          std::uint64_t trials, std::uint64_t base_seed) {
    if (steps < 2) throw std::invalid_argument("a sweep needs at least two steps");
    std::vector<SweepPoint> sweep;
    sweep.reserve(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        SweepPoint point;
        point.delta = delta_min + (delta_max - delta_min) * i / (steps - 1);
        point.joint = joint_probabilities(build_rto(point.delta, 0.0));
        point.c_analytic = degree_of_correlation(point.joint);
        point.counts =
            sample_trials(point.joint, trials, base_seed + static_cast<std::uint64_t>(i));
        point.estimate = estimate_correlation(point.counts);
        sweep.push_back(point);
    }
    return sweep;
}

NoSignalingReport no_signaling_audit(
    const std::vector<std::pair<double, double>>& settings) {
    if (settings.empty()) throw std::invalid_argument("audit needs at least one setting");
    NoSignalingReport report;
    report.points = settings.size();
    const Mat2 half_identity = Mat2::diag(Complex{0.5}, Complex{0.5});
    for (const auto& [phi_s, phi_a] : settings) {
        const Apparatus apparatus = build_rto(phi_s, phi_a);
        const double dev = max_marginal_deviation(joint_probabilities(apparatus));
        if (dev > report.max_deviation) {
            report.max_deviation = dev;
            report.worst_phi_s = phi_s;
            report.worst_phi_a = phi_a;
        }
        const BipartiteState post = evolve(apparatus);
        for (Subsystem side : {Subsystem::S, Subsystem::A}) {
            const double rho_dev =
                max_abs_diff(partial_trace(post, side).matrix(), half_identity);
            if (rho_dev > report.max_rho_deviation) {
                report.max_rho_deviation = rho_dev;
                report.worst_rho_phi_s = phi_s;
                report.worst_rho_phi_a = phi_a;
            }
        }
    }
    report.passed = report.max_deviation <= kNoSignalingTol &&
                    report.max_rho_deviation <= kNoSignalingTol;
    return report;
}

std::vector<std::pair<double, double>> phase_grid(int n, double lo, double hi) {
    if (n < 1) throw std::invalid_argument("grid needs at least one point per axis");
    std::vector<std::pair<double, double>> grid;
    grid.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    const double step = (hi - lo) / n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) grid.emplace_back(lo + step * i, lo + step * j);
    return grid;
}

std::vector<Table1Row> table1() {
    const std::array<double, 5> phases{0.0, 0.25 * kPi, 0.5 * kPi, 0.75 * kPi, kPi};
    std::vector<Table1Row> rows;
    rows.reserve(phases.size());
    for (double phase : phases) {
        Table1Row row;
        row.phase = phase;
        std::tie(row.p_d1, row.p_d2) = single_photon_probs(build_mz(phase));
        const JointDistribution joint = joint_probabilities(build_rto(phase, 0.0));
        row.p_same = p_same(joint);
        row.p_diff = p_diff(joint);
        rows.push_back(row);
    }
    // The quarter-phase rows are often tabulated as 71/29 and 29/71, which
    // reads cos(phase) as a probability; the interference formula
    // (1/2)[1 + cos(phase)] gives 85.36/14.64 and 14.64/85.36.
    rows[1].note =
        "often tabulated as 71/29 by reading cos(phase) as the probability; "
        "(1/2)[1 + cos(phase)] gives 85.36/14.64";
    rows[3].note =
        "often tabulated as 29/71 by reading cos(phase) as the probability; "
        "(1/2)[1 + cos(phase)] gives 14.64/85.36";
    return rows;
}

}  // namespace biphoton
