// Copyright 2026 The biphoton authors.
// Licensed under the Apache License, Version 2.0.

#include "biphoton/optics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace biphoton {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// Shape tolerance for the calibration probes; much looser than the state
// tolerances since it guards against miswired circuits, not rounding.
constexpr double kFormTol = 1e-9;

Complex phase_factor(double phase) { return {std::cos(phase), std::sin(phase)}; }

BipartiteState maximally_correlated_source() {
    return make_measurement_state(Complex{kInvSqrt2}, Complex{kInvSqrt2});
}

struct ProbePoint {
    double p11, p12, p21, p22;
};

ProbePoint raw_probe(const Apparatus& apparatus, double s_phase, double a_phase) {
    Apparatus probe = apparatus;
    probe.station_s = with_shifter_phase(apparatus.station_s, s_phase);
    probe.station_a = with_shifter_phase(apparatus.station_a, a_phase);
    const BipartiteState out = evolve_raw(probe);
    const Mat2& amps = out.amps();
    return {std::norm(amps(0, 0)), std::norm(amps(0, 1)), std::norm(amps(1, 0)),
            std::norm(amps(1, 1))};
}

void require_fringe_symmetry(const ProbePoint& p) {
    if (std::abs(p.p11 - p.p22) > kFormTol || std::abs(p.p12 - p.p21) > kFormTol) {
        throw std::invalid_argument(
            "apparatus statistics lack the p11=p22, p12=p21 interference form");
    }
}

// Inverts y(delta) = cos(delta + w) from probes at delta = 0 and pi/2,
// returning w in (-pi, pi]. Rejects probe pairs inconsistent with a
// unit-amplitude cosine.
double offset_from_probes(double y_at_0, double y_at_quarter) {
    const double cos_w = y_at_0;
    const double sin_w = -y_at_quarter;
    if (std::abs(cos_w * cos_w + sin_w * sin_w - 1.0) > kFormTol) {
        throw std::invalid_argument(
            "apparatus statistics do not follow a unit-amplitude cosine fringe");
    }
    double w = std::atan2(sin_w, cos_w);
    if (w == -kPi) w = kPi;
    return w;
}

}  // namespace

Mat2 beam_splitter_unitary() {
    const Complex t{kInvSqrt2, 0.0};
    const Complex r{0.0, kInvSqrt2};
    return Mat2{{t, r, r, t}};
}

Mat2 phase_shifter_unitary(double phase, Arm arm) {
    if (!std::isfinite(phase)) throw std::invalid_argument("shifter phase must be finite");
    const Complex f = phase_factor(phase);
    return arm == Arm::Solid ? Mat2::diag(f, Complex{1.0}) : Mat2::diag(Complex{1.0}, f);
}

Mat2 element_unitary(const OpticalElement& element) {
    switch (element.kind) {
        case OpticalElement::Kind::BeamSplitter:
            return beam_splitter_unitary();
        case OpticalElement::Kind::PhaseShifter:
            return phase_shifter_unitary(element.phase, element.arm);
        case OpticalElement::Kind::Mirror:
            return Mat2::identity();
    }
    throw std::logic_error("unknown optical element");
}

Mat2 station_unitary(const StationCircuit& circuit) {
    Mat2 u = Mat2::identity();
    for (const auto& element : circuit.elements) u = element_unitary(element) * u;
    return u;
}

StationCircuit with_shifter_phase(StationCircuit circuit, double phase) {
    for (auto& element : circuit.elements) {
        if (element.kind == OpticalElement::Kind::PhaseShifter) {
            element.phase = phase;
            return circuit;
        }
    }
    throw std::invalid_argument("circuit has no phase shifter");
}

StationCircuit with_phase_offset(StationCircuit circuit, double delta) {
    for (auto& element : circuit.elements) {
        if (element.kind == OpticalElement::Kind::PhaseShifter) {
            element.phase += delta;
            return circuit;
        }
    }
    throw std::invalid_argument("circuit has no phase shifter");
}

double calibrate_offset(const Apparatus& apparatus) {
    const ProbePoint at_zero = raw_probe(apparatus, 0.0, 0.0);
    const ProbePoint at_quarter = raw_probe(apparatus, 0.5 * kPi, 0.0);
    require_fringe_symmetry(at_zero);
    require_fringe_symmetry(at_quarter);
    // p11 = (1/4)[1 + cos(delta + w)]  =>  y(delta) = 4 p11 - 1.
    return offset_from_probes(4.0 * at_zero.p11 - 1.0, 4.0 * at_quarter.p11 - 1.0);
}

Apparatus build_rto(double phi_s, double phi_a) {
    Apparatus apparatus{
        maximally_correlated_source(),
        {{OpticalElement::phase_shifter(phi_s, Arm::Solid), OpticalElement::beam_splitter()}},
        {{OpticalElement::phase_shifter(phi_a, Arm::Dashed), OpticalElement::beam_splitter()}},
        0.0};
    apparatus.offset_w = calibrate_offset(apparatus);
    return apparatus;
}

BipartiteState evolve_raw(const Apparatus& apparatus) {
    return apply_local_unitaries(apparatus.source, station_unitary(apparatus.station_s),
                                 station_unitary(apparatus.station_a));
}

BipartiteState evolve(const Apparatus& apparatus) {
    if (apparatus.offset_w == 0.0) return evolve_raw(apparatus);
    // Moving the A shifter by +w shifts the fringe argument delta = phi_s -
    // phi_a by -w, cancelling the setup offset without touching the
    // convention matrices.
    Apparatus shifted = apparatus;
    shifted.station_a = with_phase_offset(apparatus.station_a, apparatus.offset_w);
    return evolve_raw(shifted);
}

MachZehnder build_mz(double phase) {
    MachZehnder mz{
        PureState({Complex{1.0}, Complex{0.0}}, {"p1", "p2"}),
        {{OpticalElement::beam_splitter(),
          OpticalElement::phase_shifter(phase, Arm::Solid),
          OpticalElement::beam_splitter()}},
        0.0};

    // P(D1) = (1/2)[1 + cos(phase + w)]: same two-probe inversion as the
    // two-station calibration.
    auto p_d1 = [&](double probe_phase) {
        const MachZehnder probe{mz.input, with_shifter_phase(mz.circuit, probe_phase), 0.0};
        return mz_output_raw(probe).probabilities()[0];
    };
    mz.offset_w = offset_from_probes(2.0 * p_d1(0.0) - 1.0, 2.0 * p_d1(0.5 * kPi) - 1.0);
    return mz;
}

namespace {

PureState detector_state(const MachZehnder& mz, const StationCircuit& circuit) {
    const Mat2 u = station_unitary(circuit);
    const Vec2 in{{mz.input.amplitude(0), mz.input.amplitude(1)}};
    const Vec2 out = u * in;
    return PureState({out[0], out[1]}, {"D1", "D2"});
}

}  // namespace

PureState mz_output_raw(const MachZehnder& mz) { return detector_state(mz, mz.circuit); }

PureState mz_output(const MachZehnder& mz) {
    if (mz.offset_w == 0.0) return mz_output_raw(mz);
    // The MZ shifter phase enters the fringe argument with a plus sign, so
    // the origin moves by -w here.
    return detector_state(mz, with_phase_offset(mz.circuit, -mz.offset_w));
}

}  // namespace biphoton
