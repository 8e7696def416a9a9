// Copyright 2026 The biphoton authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "biphoton/bell.hpp"

namespace biphoton::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitIo = 4;

enum class Command { RtoSweep, MzSweep, Sample, Chsh, Table1, Marginals };
enum class Format { Csv, Json };
enum class ChshMode { Single, Canonical, Maximize };

/// A fully resolved command invocation. Identical configs produce
/// byte-identical output.
struct RunConfig {
    Command command = Command::RtoSweep;
    Format format = Format::Csv;
    std::string output;  // empty writes to the standard output stream

    // Sweep / grid bounds, radians. Sweeps include both endpoints;
    // the marginals grid is half-open per axis.
    double min_phase = 0.0;
    double max_phase = 0.0;
    int steps = 25;

    std::uint64_t trials = 100000;
    std::uint64_t seed = 42;

    // sample
    double phi_s = 0.0;
    double phi_a = 0.0;

    // chsh
    ChshMode chsh_mode = ChshMode::Single;
    ChshSettings settings;
    double grid_step = 0.0;
    bool sampled = false;
};

/// Fixed 12-significant-digit rendering used for every floating-point
/// value the CLI emits ("%.12g", negative zero normalized).
std::string format_double(double value);

/// Executes the command, writing the one output artifact to `out` and any
/// diagnostics to `diag`. Returns kExitOk, kExitValidation or kExitIo.
int run(const RunConfig& config, std::ostream& out, std::ostream& diag);

/// As run(), but honoring config.output (file or standard output).
int run_to_output(const RunConfig& config, std::ostream& diag);

}  // namespace biphoton::cli
