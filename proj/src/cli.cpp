// Copyright 2026 The biphoton authors.
// Licensed under the Apache License, Version 2.0.

#include "biphoton/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace biphoton::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;
constexpr int kSchemaVersion = 1;

// JSON numbers are rounded to the same 12 significant digits as the CSV
// text, so both formats stay byte-stable and equally precise.
double round12(double value) { return std::strtod(format_double(value).c_str(), nullptr); }

std::string bool_text(bool b) { return b ? "true" : "false"; }

struct Validation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

void require(bool ok, const char* message) {
    if (!ok) throw Validation(message);
}

void require_finite(double value, const char* name) {
    if (!std::isfinite(value)) throw Validation(std::string(name) + " must be finite");
}

class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void csv_header(std::initializer_list<const char*> columns) {
        bool first = true;
        for (const char* c : columns) {
            if (!first) out_ << ',';
            out_ << c;
            first = false;
        }
        out_ << '\n';
    }

    void csv_row(std::initializer_list<std::string> cells) {
        bool first = true;
        for (const auto& c : cells) {
            if (!first) out_ << ',';
            out_ << c;
            first = false;
        }
        out_ << '\n';
    }

    void json(const Json& document) { out_ << document.dump(2) << '\n'; }

private:
    std::ostream& out_;
};

Json json_envelope(const char* command, Json config) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["config"] = std::move(config);
    return j;
}

int run_rto_sweep(const RunConfig& cfg, Writer& w) {
    require(cfg.steps >= 2, "--steps must be at least 2");
    require(cfg.trials >= 1, "--trials must be at least 1");
    require_finite(cfg.min_phase, "--min");
    require_finite(cfg.max_phase, "--max");
    const auto sweep =
        correlation_sweep(cfg.min_phase, cfg.max_phase, cfg.steps, cfg.trials, cfg.seed);

    if (cfg.format == Format::Csv) {
        w.csv_header({"delta_phase", "c_analytic", "c_sampled", "std_err", "p11", "p12",
                      "p21", "p22"});
        for (const auto& p : sweep) {
            w.csv_row({format_double(p.delta), format_double(p.c_analytic),
                       format_double(p.estimate.c_hat), format_double(p.estimate.std_err),
                       format_double(p.joint.p11), format_double(p.joint.p12),
                       format_double(p.joint.p21), format_double(p.joint.p22)});
        }
        return kExitOk;
    }
    Json j = json_envelope("rto-sweep", {{"delta_min", round12(cfg.min_phase)},
                                         {"delta_max", round12(cfg.max_phase)},
                                         {"steps", cfg.steps},
                                         {"trials", cfg.trials},
                                         {"seed", cfg.seed}});
    Json data = Json::array();
    for (const auto& p : sweep) {
        data.push_back({{"delta_phase", round12(p.delta)},
                        {"c_analytic", round12(p.c_analytic)},
                        {"c_sampled", round12(p.estimate.c_hat)},
                        {"std_err", round12(p.estimate.std_err)},
                        {"p11", round12(p.joint.p11)},
                        {"p12", round12(p.joint.p12)},
                        {"p21", round12(p.joint.p21)},
                        {"p22", round12(p.joint.p22)}});
    }
    j["data"] = std::move(data);
    w.json(j);
    return kExitOk;
}

int run_mz_sweep(const RunConfig& cfg, Writer& w) {
    require(cfg.steps >= 2, "--steps must be at least 2");
    require_finite(cfg.min_phase, "--min");
    require_finite(cfg.max_phase, "--max");
    const auto phases = linspace(cfg.min_phase, cfg.max_phase, cfg.steps);

    if (cfg.format == Format::Csv) {
        w.csv_header({"phase", "p_d1", "p_d2"});
        for (double phase : phases) {
            const auto [p1, p2] = single_photon_probs(build_mz(phase));
            w.csv_row({format_double(phase), format_double(p1), format_double(p2)});
        }
        return kExitOk;
    }
    Json j = json_envelope("mz-sweep", {{"phase_min", round12(cfg.min_phase)},
                                        {"phase_max", round12(cfg.max_phase)},
                                        {"steps", cfg.steps}});
    Json data = Json::array();
    for (double phase : phases) {
        const auto [p1, p2] = single_photon_probs(build_mz(phase));
        data.push_back({{"phase", round12(phase)},
                        {"p_d1", round12(p1)},
                        {"p_d2", round12(p2)}});
    }
    j["data"] = std::move(data);
    w.json(j);
    return kExitOk;
}

int run_sample(const RunConfig& cfg, Writer& w) {
    require(cfg.trials >= 1, "--trials must be at least 1");
    require_finite(cfg.phi_s, "--phi-s");
    require_finite(cfg.phi_a, "--phi-a");
    const JointDistribution joint = joint_probabilities(build_rto(cfg.phi_s, cfg.phi_a));
    const TrialCounts counts = sample_trials(joint, cfg.trials, cfg.seed);
    const CorrelationEstimate estimate = estimate_correlation(counts);

    if (cfg.format == Format::Csv) {
        w.csv_header({"phi_s", "phi_a", "trials", "seed", "n11", "n12", "n21", "n22",
                      "c_hat", "std_err"});
        w.csv_row({format_double(cfg.phi_s), format_double(cfg.phi_a),
                   std::to_string(cfg.trials), std::to_string(cfg.seed),
                   std::to_string(counts.n11), std::to_string(counts.n12),
                   std::to_string(counts.n21), std::to_string(counts.n22),
                   format_double(estimate.c_hat), format_double(estimate.std_err)});
        return kExitOk;
    }
    Json j = json_envelope("sample", {{"phi_s", round12(cfg.phi_s)},
                                      {"phi_a", round12(cfg.phi_a)},
                                      {"trials", cfg.trials},
                                      {"seed", cfg.seed}});
    j["data"] = Json::array({Json{{"n11", counts.n11},
                                  {"n12", counts.n12},
                                  {"n21", counts.n21},
                                  {"n22", counts.n22},
                                  {"c_hat", round12(estimate.c_hat)},
                                  {"std_err", round12(estimate.std_err)}}});
    w.json(j);
    return kExitOk;
}

Json chsh_result_json(const ChshSettings& s, const ChshResult& r) {
    return Json{{"a", round12(s.a)},
                {"a_prime", round12(s.a_prime)},
                {"b", round12(s.b)},
                {"b_prime", round12(s.b_prime)},
                {"e_ab", round12(r.e_ab)},
                {"e_ab_prime", round12(r.e_ab_prime)},
                {"e_a_prime_b", round12(r.e_a_prime_b)},
                {"e_a_prime_b_prime", round12(r.e_a_prime_b_prime)},
                {"s_value", round12(r.s_value)},
                {"violated", r.violated}};
}

void chsh_result_csv(Writer& w, const ChshSettings& s, const ChshResult& r) {
    w.csv_header({"a", "a_prime", "b", "b_prime", "e_ab", "e_ab_prime", "e_a_prime_b",
                  "e_a_prime_b_prime", "s_value", "violated"});
    w.csv_row({format_double(s.a), format_double(s.a_prime), format_double(s.b),
               format_double(s.b_prime), format_double(r.e_ab), format_double(r.e_ab_prime),
               format_double(r.e_a_prime_b), format_double(r.e_a_prime_b_prime),
               format_double(r.s_value), bool_text(r.violated)});
}

int run_chsh(const RunConfig& cfg, Writer& w) {
    for (double phase : {cfg.settings.a, cfg.settings.a_prime, cfg.settings.b,
                         cfg.settings.b_prime}) {
        require_finite(phase, "chsh setting");
    }
    if (cfg.sampled) require(cfg.trials >= 1, "--trials must be at least 1");

    switch (cfg.chsh_mode) {
        case ChshMode::Single: {
            const ChshResult r = cfg.sampled
                                     ? chsh_statistic_sampled(cfg.settings, cfg.trials, cfg.seed)
                                     : chsh_statistic(cfg.settings);
            if (cfg.format == Format::Csv) {
                chsh_result_csv(w, cfg.settings, r);
                return kExitOk;
            }
            Json config{{"mode", "single"}, {"sampled", cfg.sampled}};
            if (cfg.sampled) {
                config["trials"] = cfg.trials;
                config["seed"] = cfg.seed;
            }
            Json j = json_envelope("chsh", config);
            j["data"] = Json::array({chsh_result_json(cfg.settings, r)});
            w.json(j);
            return kExitOk;
        }
        case ChshMode::Canonical: {
            require(cfg.steps >= 2, "--theta-steps must be at least 2");
            require_finite(cfg.min_phase, "--theta-min");
            require_finite(cfg.max_phase, "--theta-max");
            const auto grid = linspace(cfg.min_phase, cfg.max_phase, cfg.steps);
            const ViolationScan scan =
                cfg.sampled ? violation_scan_sampled(grid, cfg.trials, cfg.seed)
                            : violation_scan(grid);
            if (cfg.format == Format::Csv) {
                w.csv_header({"theta", "s_value", "violated"});
                for (const auto& p : scan.points) {
                    w.csv_row({format_double(p.theta), format_double(p.s_value),
                               bool_text(p.violated)});
                }
                return kExitOk;
            }
            Json config{{"mode", "canonical"},
                        {"theta_min", round12(cfg.min_phase)},
                        {"theta_max", round12(cfg.max_phase)},
                        {"theta_steps", cfg.steps},
                        {"sampled", cfg.sampled}};
            if (cfg.sampled) {
                config["trials"] = cfg.trials;
                config["seed"] = cfg.seed;
            }
            Json j = json_envelope("chsh", config);
            if (scan.interval) {
                j["interval"] = {{"theta_lo", round12(scan.interval->lo)},
                                 {"theta_hi", round12(scan.interval->hi)}};
            } else {
                j["interval"] = nullptr;
            }
            Json data = Json::array();
            for (const auto& p : scan.points) {
                data.push_back({{"theta", round12(p.theta)},
                                {"s_value", round12(p.s_value)},
                                {"violated", p.violated}});
            }
            j["data"] = std::move(data);
            w.json(j);
            return kExitOk;
        }
        case ChshMode::Maximize: {
            require(cfg.grid_step > 0.0 && cfg.grid_step <= kPi / 8.0,
                    "--grid-step must lie in (0, pi/8]");
            require(!cfg.sampled, "--sampled is not available with --maximize");
            const ChshMaximum m = maximize_chsh(cfg.grid_step);
            if (cfg.format == Format::Csv) {
                chsh_result_csv(w, m.settings, m.result);
                return kExitOk;
            }
            Json j = json_envelope(
                "chsh", {{"mode", "maximize"}, {"grid_step", round12(cfg.grid_step)}});
            j["data"] = Json::array({chsh_result_json(m.settings, m.result)});
            w.json(j);
            return kExitOk;
        }
    }
    throw std::logic_error("unknown chsh mode");
}

int run_table1(const RunConfig& cfg, Writer& w) {
    const auto rows = table1();
    if (cfg.format == Format::Csv) {
        w.csv_header({"phi", "p_d1", "p_d2", "p_same", "p_diff", "note"});
        for (const auto& r : rows) {
            w.csv_row({format_double(r.phase), format_double(r.p_d1), format_double(r.p_d2),
                       format_double(r.p_same), format_double(r.p_diff), r.note});
        }
        return kExitOk;
    }
    Json j = json_envelope("table1", Json::object());
    Json data = Json::array();
    for (const auto& r : rows) {
        Json row{{"phi", round12(r.phase)},
                 {"p_d1", round12(r.p_d1)},
                 {"p_d2", round12(r.p_d2)},
                 {"p_same", round12(r.p_same)},
                 {"p_diff", round12(r.p_diff)}};
        if (!r.note.empty()) row["discrepancy_note"] = r.note;
        data.push_back(std::move(row));
    }
    j["data"] = std::move(data);
    w.json(j);
    return kExitOk;
}

int run_marginals(const RunConfig& cfg, Writer& w) {
    require(cfg.steps >= 1, "--steps must be at least 1");
    require_finite(cfg.min_phase, "--min");
    require_finite(cfg.max_phase, "--max");
    const auto grid = phase_grid(cfg.steps, cfg.min_phase, cfg.max_phase);
    const NoSignalingReport report = no_signaling_audit(grid);

    if (cfg.format == Format::Csv) {
        w.csv_header({"phi_s", "phi_a", "p_s1", "p_a1", "max_deviation"});
        for (const auto& [phi_s, phi_a] : grid) {
            const JointDistribution joint = joint_probabilities(build_rto(phi_s, phi_a));
            const MarginalDistribution m = marginals(joint);
            w.csv_row({format_double(phi_s), format_double(phi_a), format_double(m.p_s1),
                       format_double(m.p_a1), format_double(max_marginal_deviation(joint))});
        }
        return kExitOk;
    }
    Json j = json_envelope("marginals", {{"steps", cfg.steps},
                                         {"phase_min", round12(cfg.min_phase)},
                                         {"phase_max", round12(cfg.max_phase)}});
    j["audit"] = {{"points", report.points},
                  {"max_deviation", round12(report.max_deviation)},
                  {"worst_phi_s", round12(report.worst_phi_s)},
                  {"worst_phi_a", round12(report.worst_phi_a)},
                  {"max_rho_deviation", round12(report.max_rho_deviation)},
                  {"passed", report.passed}};
    Json data = Json::array();
    for (const auto& [phi_s, phi_a] : grid) {
        const JointDistribution joint = joint_probabilities(build_rto(phi_s, phi_a));
        const MarginalDistribution m = marginals(joint);
        data.push_back({{"phi_s", round12(phi_s)},
                        {"phi_a", round12(phi_a)},
                        {"p_s1", round12(m.p_s1)},
                        {"p_a1", round12(m.p_a1)},
                        {"max_deviation", round12(max_marginal_deviation(joint))}});
    }
    j["data"] = std::move(data);
    w.json(j);
    return kExitOk;
}

}  // namespace

std::string format_double(double value) {
    if (value == 0.0) value = 0.0;  // drop the sign of negative zero
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.12g", value);
    return buffer;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& diag) {
    Writer writer(out);
    try {
        switch (config.command) {
            case Command::RtoSweep:
                return run_rto_sweep(config, writer);
            case Command::MzSweep:
                return run_mz_sweep(config, writer);
            case Command::Sample:
                return run_sample(config, writer);
            case Command::Chsh:
                return run_chsh(config, writer);
            case Command::Table1:
                return run_table1(config, writer);
            case Command::Marginals:
                return run_marginals(config, writer);
        }
        throw std::logic_error("unknown command");
    } catch (const std::invalid_argument& e) {
        diag << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}

int run_to_output(const RunConfig& config, std::ostream& diag) {
    if (config.output.empty()) {
        const int code = run(config, std::cout, diag);
        std::cout.flush();
        if (!std::cout) {
            diag << "error: failed writing to standard output\n";
            return kExitIo;
        }
        return code;
    }
    std::ofstream file(config.output, std::ios::binary);
    if (!file) {
        diag << "error: cannot open '" << config.output << "' for writing\n";
        return kExitIo;
    }
    const int code = run(config, file, diag);
    file.flush();
    if (!file) {
        diag << "error: failed writing to '" << config.output << "'\n";
        return kExitIo;
    }
    return code;
}

}  // namespace biphoton::cli
