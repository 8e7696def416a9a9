// Copyright 2026 The biphoton authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <vector>

#include "biphoton/quantum.hpp"

namespace biphoton {

/// Which of the two interferometer arms an element sits on. Solid is mode 0,
/// dashed is mode 1, matching the state-vector index convention.
enum class Arm { Solid, Dashed };

struct OpticalElement {
    enum class Kind { BeamSplitter, PhaseShifter, Mirror };

    Kind kind = Kind::Mirror;
    double phase = 0.0;      // PhaseShifter only, radians
    Arm arm = Arm::Solid;    // PhaseShifter only

    static OpticalElement beam_splitter() { return {Kind::BeamSplitter, 0.0, Arm::Solid}; }
    static OpticalElement phase_shifter(double phase, Arm arm) {
        return {Kind::PhaseShifter, phase, arm};
    }
    static OpticalElement mirror() { return {Kind::Mirror, 0.0, Arm::Solid}; }
};

/// Ordered optical elements acting on one photon's two path modes; the first
/// element is applied first.
struct StationCircuit {
    std::vector<OpticalElement> elements;
};

/// Symmetric 50/50 convention: (1/sqrt2) [[1, i], [i, 1]]. All phase choices
/// this convention bakes in end up in the calibrated setup offset.
Mat2 beam_splitter_unitary();

/// diag(e^{i phase}, 1) on the solid arm, diag(1, e^{i phase}) on the dashed.
Mat2 phase_shifter_unitary(double phase, Arm arm);

/// Mirrors are a common phase on both arms, i.e. the identity here.
Mat2 element_unitary(const OpticalElement& element);

/// Composition of the circuit in application order (right-to-left product).
Mat2 station_unitary(const StationCircuit& circuit);

/// Copy of the circuit with its first phase shifter set to `phase`.
/// Throws std::invalid_argument if the circuit has no phase shifter.
StationCircuit with_shifter_phase(StationCircuit circuit, double phase);

/// Copy of the circuit with `delta` added to its first phase shifter.
StationCircuit with_phase_offset(StationCircuit circuit, double delta);

/**
 * Source plus the two station circuits of the two-photon interferometer.
 * offset_w in (-pi, pi] is the fixed setup phase of the raw conventions,
 * found once by calibrate_offset; the calibrated views shift the phase
 * origin by it so that equal shifter settings give perfect correlation.
 */
struct Apparatus {
    BipartiteState source;
    StationCircuit station_s;
    StationCircuit station_a;
    double offset_w = 0.0;
};

/**
 * Measures the setup offset w of an apparatus whose joint statistics follow
 * the two-term interference form p_same = (1/2)[1 + cos(delta + w)].
 * Probes the raw pipeline at shifter settings (0, 0) and (pi/2, 0) and
 * inverts the form; throws std::invalid_argument when the probed
 * distributions do not fit it (broken circuit description).
 */
double calibrate_offset(const Apparatus& apparatus);

/**
 * The two-photon setup: maximally correlated pair source, a phase shifter
 * and a beam splitter per station. The S shifter sits on the solid arm and
 * the A shifter on the dashed arm, which makes the joint statistics depend
 * on phi_s - phi_a; offset_w is populated by calibration.
 */
Apparatus build_rto(double phi_s, double phi_a);

/// Post-optics pair state with the raw conventions, offset included.
BipartiteState evolve_raw(const Apparatus& apparatus);

/// Post-optics pair state in the calibrated view (phase origin shifted by
/// offset_w, so detector statistics match the w = 0 closed forms).
BipartiteState evolve(const Apparatus& apparatus);

/**
 * Single-photon interferometer: beam splitter, phase shifter on the solid
 * arm, beam splitter. The photon enters on the solid path; offset_w plays
 * the same role as in Apparatus and is set so P(D1) = 1 at zero phase.
 */
struct MachZehnder {
    PureState input;
    StationCircuit circuit;
    double offset_w = 0.0;
};

MachZehnder build_mz(double phase);

/// Detector-basis output state ("D1", "D2") with raw conventions.
PureState mz_output_raw(const MachZehnder& mz);

/// Calibrated detector-basis output state.
PureState mz_output(const MachZehnder& mz);

}  // namespace biphoton
