// Copyright 2026 The biphoton authors.
// Licensed under the Apache License, Version 2.0.
//
// Command-line front end. All physics and serialization live in the
// library; this file only turns argv into a RunConfig.

#include <cerrno>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "biphoton/cli.hpp"

namespace {

using biphoton::cli::ChshMode;
using biphoton::cli::Command;
using biphoton::cli::Format;
using biphoton::cli::RunConfig;

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct SubcommandBindings {
    CLI::App* app = nullptr;
    std::string format = "csv";
    bool degrees = false;
    CLI::Option* seed_option = nullptr;
    std::vector<std::pair<CLI::Option*, double*>> phase_options;
};

void add_common(SubcommandBindings& b, RunConfig& cfg) {
    b.app->add_option("--format", b.format, "Output format: csv or json")
        ->option_text("csv|json");
    b.app->add_option("--output", cfg.output, "Write to this file instead of stdout");
    b.app->add_flag("--degrees", b.degrees, "Interpret phase arguments as degrees");
}

void add_phase(SubcommandBindings& b, const char* name, double& target, const char* help) {
    b.phase_options.emplace_back(b.app->add_option(name, target, help), &target);
}

CLI::Option* add_seed(SubcommandBindings& b, RunConfig& cfg) {
    b.seed_option = b.app->add_option("--seed", cfg.seed, "Generator seed (default 42)");
    return b.seed_option;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "biphoton: single-photon and entangled-pair interferometry statistics,\n"
        "computed from unitary evolution and emitted as deterministic CSV/JSON"};
    app.require_subcommand(1);

    SubcommandBindings active;

    // rto-sweep
    RunConfig rto_cfg;
    rto_cfg.command = Command::RtoSweep;
    rto_cfg.min_phase = 0.0;
    rto_cfg.max_phase = kTwoPi;
    rto_cfg.steps = 25;
    SubcommandBindings rto;
    rto.app = app.add_subcommand(
        "rto-sweep", "Pair correlation vs delta = phi_s - phi_a, analytic and sampled");
    add_phase(rto, "--min", rto_cfg.min_phase, "Smallest delta (default 0)");
    add_phase(rto, "--max", rto_cfg.max_phase, "Largest delta (default 2*pi)");
    rto.app->add_option("--steps", rto_cfg.steps, "Sweep points, endpoints included");
    rto.app->add_option("--trials", rto_cfg.trials, "Monte-Carlo trials per point");
    add_seed(rto, rto_cfg);
    add_common(rto, rto_cfg);

    // mz-sweep
    RunConfig mz_cfg;
    mz_cfg.command = Command::MzSweep;
    mz_cfg.min_phase = 0.0;
    mz_cfg.max_phase = kTwoPi;
    mz_cfg.steps = 25;
    SubcommandBindings mz;
    mz.app = app.add_subcommand("mz-sweep",
                                "Single-photon detector probabilities vs shifter phase");
    add_phase(mz, "--min", mz_cfg.min_phase, "Smallest phase (default 0)");
    add_phase(mz, "--max", mz_cfg.max_phase, "Largest phase (default 2*pi)");
    mz.app->add_option("--steps", mz_cfg.steps, "Sweep points, endpoints included");
    add_common(mz, mz_cfg);

    // sample
    RunConfig sample_cfg;
    sample_cfg.command = Command::Sample;
    SubcommandBindings sample;
    sample.app = app.add_subcommand(
        "sample", "Simulated coincidence counts at one pair of shifter settings");
    add_phase(sample, "--phi-s", sample_cfg.phi_s, "Station S shifter phase");
    add_phase(sample, "--phi-a", sample_cfg.phi_a, "Station A shifter phase");
    sample.app->add_option("--trials", sample_cfg.trials, "Number of pair emissions");
    add_seed(sample, sample_cfg);
    add_common(sample, sample_cfg);

    // chsh
    RunConfig chsh_cfg;
    chsh_cfg.command = Command::Chsh;
    chsh_cfg.settings = biphoton::canonical_settings();
    chsh_cfg.min_phase = -0.5 * kPi;
    chsh_cfg.max_phase = 0.5 * kPi;
    chsh_cfg.steps = 181;
    chsh_cfg.grid_step = kPi / 64.0;
    SubcommandBindings chsh;
    chsh.app = app.add_subcommand(
        "chsh", "CHSH statistic: one setting, the canonical theta scan, or a maximization");
    add_phase(chsh, "--a", chsh_cfg.settings.a, "Station S setting a");
    add_phase(chsh, "--a-prime", chsh_cfg.settings.a_prime, "Station S setting a'");
    add_phase(chsh, "--b", chsh_cfg.settings.b, "Station A setting b");
    add_phase(chsh, "--b-prime", chsh_cfg.settings.b_prime, "Station A setting b'");
    auto* canonical = chsh.app->add_flag(
        "--canonical", "Scan the family a=0, a'=2*theta, b=theta, b'=-theta");
    auto* maximize =
        chsh.app->add_flag("--maximize", "Grid-plus-refinement search for the largest |S|");
    canonical->excludes(maximize);
    maximize->excludes(canonical);
    add_phase(chsh, "--theta-min", chsh_cfg.min_phase, "Scan start (default -pi/2)");
    add_phase(chsh, "--theta-max", chsh_cfg.max_phase, "Scan end (default pi/2)");
    chsh.app->add_option("--theta-steps", chsh_cfg.steps, "Scan points (default 181)");
    add_phase(chsh, "--grid-step", chsh_cfg.grid_step,
              "Maximization grid step in (0, pi/8] (default pi/64)");
    auto* sampled = chsh.app->add_flag("--sampled", chsh_cfg.sampled,
                                       "Estimate correlations by Monte-Carlo sampling");
    sampled->excludes(maximize);
    chsh.app->add_option("--trials", chsh_cfg.trials, "Trials per correlation when sampled");
    add_seed(chsh, chsh_cfg);
    add_common(chsh, chsh_cfg);

    // table1
    RunConfig table_cfg;
    table_cfg.command = Command::Table1;
    SubcommandBindings table;
    table.app = app.add_subcommand(
        "table1", "Single-photon vs entangled-pair statistics at five phases");
    add_common(table, table_cfg);

    // marginals
    RunConfig marg_cfg;
    marg_cfg.command = Command::Marginals;
    marg_cfg.min_phase = 0.0;
    marg_cfg.max_phase = kTwoPi;
    marg_cfg.steps = 21;
    SubcommandBindings marg;
    marg.app = app.add_subcommand(
        "marginals", "No-signaling audit of local statistics over a phase grid");
    marg.app->add_option("--steps", marg_cfg.steps, "Grid points per axis (default 21)");
    add_phase(marg, "--min", marg_cfg.min_phase, "Grid start (default 0)");
    add_phase(marg, "--max", marg_cfg.max_phase, "Grid end, exclusive (default 2*pi)");
    add_common(marg, marg_cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return biphoton::cli::kExitUsage;
    }

    RunConfig* selected = nullptr;
    if (app.got_subcommand(rto.app)) {
        selected = &rto_cfg;
        active = rto;
    } else if (app.got_subcommand(mz.app)) {
        selected = &mz_cfg;
        active = mz;
    } else if (app.got_subcommand(sample.app)) {
        selected = &sample_cfg;
        active = sample;
    } else if (app.got_subcommand(chsh.app)) {
        selected = &chsh_cfg;
        active = chsh;
        if (canonical->count() > 0) chsh_cfg.chsh_mode = ChshMode::Canonical;
        if (maximize->count() > 0) chsh_cfg.chsh_mode = ChshMode::Maximize;
    } else if (app.got_subcommand(table.app)) {
        selected = &table_cfg;
        active = table;
    } else {
        selected = &marg_cfg;
        active = marg;
    }

    if (active.degrees) {
        constexpr double kRadPerDeg = kPi / 180.0;
        for (auto& [option, value] : active.phase_options) {
            if (option->count() > 0) *value *= kRadPerDeg;
        }
    }

    if (active.format == "csv") {
        selected->format = Format::Csv;
    } else if (active.format == "json") {
        selected->format = Format::Json;
    } else {
        std::cerr << "error: --format must be csv or json\n";
        return biphoton::cli::kExitValidation;
    }

    // --seed beats BIPHOTON_SEED beats the default of 42.
    if (active.seed_option != nullptr && active.seed_option->count() == 0) {
        if (const char* env = std::getenv("BIPHOTON_SEED")) {
            char* end = nullptr;
            errno = 0;
            const unsigned long long parsed = std::strtoull(env, &end, 10);
            if (errno != 0 || end == env || *end != '\0') {
                std::cerr << "error: BIPHOTON_SEED is not a valid 64-bit seed\n";
                return biphoton::cli::kExitValidation;
            }
            selected->seed = parsed;
        }
    }

    return biphoton::cli::run_to_output(*selected, std::cerr);
}
