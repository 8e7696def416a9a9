// Copyright 2026 The biphoton authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <array>
#include <string>
#include <vector>

#include "biphoton/linalg.hpp"

namespace biphoton {

/// States are kept normalized to within kNormTol after construction.
inline constexpr double kNormTol = 1e-12;
/// Inputs whose squared norm is within kRenormWindow of 1 are silently
/// renormalized; anything worse is rejected as a probable caller bug.
inline constexpr double kRenormWindow = 1e-9;
/// Matrices applied as local unitaries must satisfy U†U = I elementwise
/// to within this tolerance.
inline constexpr double kUnitaryTol = 1e-10;
/// Schmidt coefficients above this count toward the Schmidt rank.
inline constexpr double kSchmidtRankTol = 1e-10;
/// Hermiticity / trace / positivity slack for density operators.
inline constexpr double kDensityTol = 1e-12;

/**
 * Normalized state vector over a small set of labeled modes
 * (paths or detectors). Immutable after construction.
 */
class PureState {
public:
    /// Throws std::invalid_argument on non-finite amplitudes, a squared
    /// norm further than kRenormWindow from 1, or bad labels.
    PureState(std::vector<Complex> amplitudes, std::vector<std::string> labels);

    int dim() const { return static_cast<int>(amplitudes_.size()); }
    Complex amplitude(int i) const { return amplitudes_[static_cast<std::size_t>(i)]; }
    const std::string& label(int i) const { return labels_[static_cast<std::size_t>(i)]; }
    const std::vector<Complex>& amplitudes() const { return amplitudes_; }
    const std::vector<std::string>& labels() const { return labels_; }

    /// Born-rule probability of each mode; sums to 1 within kNormTol.
    std::vector<double> probabilities() const;

private:
    std::vector<Complex> amplitudes_;
    std::vector<std::string> labels_;
};

/// c1|s1> + c2|s2> over mode labels ("s1", "s2").
PureState make_superposition(Complex c1, Complex c2);

/**
 * Pure state of the photon pair. Entry amp(j, k) is the amplitude of
 * |s_j>|a_k| in the fixed path basis, 0 = solid / detector 1,
 * 1 = dashed / detector 2. Kept normalized like PureState.
 */
class BipartiteState {
public:
    explicit BipartiteState(Mat2 amplitudes);

    const Mat2& amps() const { return amps_; }
    Complex amp(int j, int k) const { return amps_(j, k); }

private:
    Mat2 amps_;
};

/// c1|s1>|a1> + c2|s2>|a2>: the correlated state an ideal which-path
/// coupling produces from c1|s1> + c2|s2>.
BipartiteState make_measurement_state(Complex c1, Complex c2);

/// Product state s (x) a of two 2-mode pure states; always Schmidt rank 1.
BipartiteState tensor_product(const PureState& s, const PureState& a);

/// (U_S (x) U_A)|psi>, i.e. amps' = U_S * amps * U_A^T. Both matrices must
/// be unitary to within kUnitaryTol; the norm is preserved.
BipartiteState apply_local_unitaries(const BipartiteState& psi, const Mat2& u_s, const Mat2& u_a);

enum class Subsystem { S, A };

/**
 * 2x2 density operator: Hermitian, unit trace, eigenvalues >= -kDensityTol.
 * Construction validates all three.
 */
class DensityOperator {
public:
    explicit DensityOperator(Mat2 matrix);

    int dim() const { return 2; }
    const Mat2& matrix() const { return matrix_; }
    Complex entry(int r, int c) const { return matrix_(r, c); }

    /// Eigenvalues in descending order (real, since the operator is Hermitian).
    std::array<double, 2> eigenvalues() const;

private:
    Mat2 matrix_;
};

/// Reduced density operator of the kept subsystem.
DensityOperator partial_trace(const BipartiteState& psi, Subsystem keep);

/// trace(rho^2): 1 for a pure state, 1/2 for the maximally mixed 2x2 state.
double purity(const DensityOperator& rho);

struct SchmidtDecomposition {
    /// Non-negative, sorted descending; squares sum to 1.
    std::array<double, 2> coefficients{};
    /// Count of coefficients above kSchmidtRankTol; 1 or 2 for any
    /// normalized bipartite state.
    int rank = 0;
};

/// Singular values of the amplitude matrix, computed from the closed-form
/// eigenvalues of A·A†.
SchmidtDecomposition schmidt(const BipartiteState& psi);

/// True iff the state is not a product of single-photon states
/// (Schmidt rank 2).
bool is_entangled(const BipartiteState& psi);

}  // namespace biphoton
