// Copyright 2026 The biphoton authors.
// Licensed under the Apache License, Version 2.0.

#include "biphoton/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace biphoton {

namespace {

double checked_norm_sq(double sum_sq) {
    if (!std::isfinite(sum_sq)) {
        throw std::invalid_argument("state amplitudes must be finite");
    }
    if (std::abs(sum_sq - 1.0) > kRenormWindow) {
        throw std::invalid_argument("state is not normalized: sum |amp|^2 = " +
                                    std::to_string(sum_sq));
    }
    return sum_sq;
}

}  // namespace

PureState::PureState(std::vector<Complex> amplitudes, std::vector<std::string> labels)
    : amplitudes_(std::move(amplitudes)), labels_(std::move(labels)) {
    if (amplitudes_.empty()) {
        throw std::invalid_argument("state needs at least one mode");
    }
    if (labels_.size() != amplitudes_.size()) {
        throw std::invalid_argument("one label per amplitude required");
    }
    std::unordered_set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size()) {
        throw std::invalid_argument("basis labels must be distinct");
    }
    double sum_sq = 0.0;
    for (const auto& c : amplitudes_) {
        if (!is_finite(c)) throw std::invalid_argument("state amplitudes must be finite");
        sum_sq += std::norm(c);
    }
    const double scale = 1.0 / std::sqrt(checked_norm_sq(sum_sq));
    for (auto& c : amplitudes_) c *= scale;
}

std::vector<double> PureState::probabilities() const {
    std::vector<double> p(amplitudes_.size());
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) p[i] = std::norm(amplitudes_[i]);
    return p;
}

PureState make_superposition(Complex c1, Complex c2) {
    return PureState({c1, c2}, {"s1", "s2"});
}

BipartiteState::BipartiteState(Mat2 amplitudes) : amps_(amplitudes) {
    double sum_sq = 0.0;
    for (const auto& c : amps_.e) {
        if (!is_finite(c)) throw std::invalid_argument("state amplitudes must be finite");
        sum_sq += std::norm(c);
    }
    const double scale = 1.0 / std::sqrt(checked_norm_sq(sum_sq));
    for (auto& c : amps_.e) c *= scale;
}

BipartiteState make_measurement_state(Complex c1, Complex c2) {
    return BipartiteState(Mat2::diag(c1, c2));
}

BipartiteState tensor_product(const PureState& s, const PureState& a) {
    if (s.dim() != 2 || a.dim() != 2) {
        throw std::invalid_argument("tensor_product expects two 2-mode states");
    }
    Mat2 amps;
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) amps(j, k) = s.amplitude(j) * a.amplitude(k);
    return BipartiteState(amps);
}

BipartiteState apply_local_unitaries(const BipartiteState& psi, const Mat2& u_s,
                                     const Mat2& u_a) {
    if (unitarity_defect(u_s) > kUnitaryTol || unitarity_defect(u_a) > kUnitaryTol) {
        throw std::invalid_argument("local operations must be unitary");
    }
    return BipartiteState(u_s * psi.amps() * transpose(u_a));
}

DensityOperator::DensityOperator(Mat2 matrix) : matrix_(matrix) {
    if (max_abs_diff(matrix_, adjoint(matrix_)) > kDensityTol) {
        throw std::invalid_argument("density operator must be Hermitian");
    }
    if (std::abs(trace(matrix_) - Complex{1.0}) > kDensityTol) {
        throw std::invalid_argument("density operator must have unit trace");
    }
    if (eigenvalues()[1] < -kDensityTol) {
        throw std::invalid_argument("density operator must be positive semidefinite");
    }
}

std::array<double, 2> DensityOperator::eigenvalues() const {
    const double a = matrix_(0, 0).real();
    const double d = matrix_(1, 1).real();
    const double half_gap = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(matrix_(0, 1)));
    const double mid = 0.5 * (a + d);
    return {mid + half_gap, mid - half_gap};
}

DensityOperator partial_trace(const BipartiteState& psi, Subsystem keep) {
    const Mat2& a = psi.amps();
    // rho_S = A A†; rho_A = (A† A) transposed back to ket ordering.
    const Mat2 rho = (keep == Subsystem::S) ? a * adjoint(a) : transpose(adjoint(a) * a);
    return DensityOperator(rho);
}

double purity(const DensityOperator& rho) {
    return trace(rho.matrix() * rho.matrix()).real();
}

SchmidtDecomposition schmidt(const BipartiteState& psi) {
    const Mat2& a = psi.amps();
    // Singular values from the eigenvalues of A·A†: the trace/determinant
    // closed form, with the small eigenvalue recovered as det/lambda_max to
    // dodge cancellation.
    const double t = norm_sq(a);
    const double d = std::norm(det(a));
    const double half_t = 0.5 * t;
    const double lambda_max = half_t + std::sqrt(std::max(0.0, half_t * half_t - d));
    const double lambda_min = lambda_max > 0.0 ? d / lambda_max : 0.0;

    SchmidtDecomposition out;
    out.coefficients = {std::sqrt(std::max(0.0, lambda_max)),
                        std::sqrt(std::max(0.0, lambda_min))};
    out.rank = 0;
    for (double c : out.coefficients)
        if (c > kSchmidtRankTol) ++out.rank;
    return out;
}

bool is_entangled(const BipartiteState& psi) { return schmidt(psi).rank == 2; }

}  // namespace biphoton
