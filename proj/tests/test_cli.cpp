// Copyright 2026 The biphoton authors.
// Licensed under the Apache License, Version 2.0.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "biphoton/cli.hpp"

using namespace biphoton;
using namespace biphoton::cli;

namespace {

constexpr double kPi = std::numbers::pi;

std::string run_to_string(const RunConfig& config, int expect_code = kExitOk) {
    std::ostringstream out, diag;
    const int code = run(config, out, diag);
    CHECK(code == expect_code);
    return out.str();
}

struct ExecResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const char* path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

ExecResult exec_cli(const std::string& args) {
    const std::string cmd = std::string(BIPHOTON_CLI_PATH) + " " + args +
                            " > cli_stdout.tmp 2> cli_stderr.tmp";
    const int rc = std::system(cmd.c_str());
    ExecResult result;
    result.code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    result.out = slurp("cli_stdout.tmp");
    result.err = slurp("cli_stderr.tmp");
    std::remove("cli_stdout.tmp");
    std::remove("cli_stderr.tmp");
    return result;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

RunConfig rto_config(std::uint64_t seed, int steps = 9, std::uint64_t trials = 5000) {
    RunConfig cfg;
    cfg.command = Command::RtoSweep;
    cfg.min_phase = 0.0;
    cfg.max_phase = 2.0 * kPi;
    cfg.steps = steps;
    cfg.trials = trials;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("rto-sweep csv schema and analytic column") {
    const auto lines = lines_of(run_to_string(rto_config(42)));
    REQUIRE(lines.size() == 10);
    CHECK(lines[0] == "delta_phase,c_analytic,c_sampled,std_err,p11,p12,p21,p22");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split_csv(lines[i]);
        REQUIRE(cells.size() == 8);
        const double delta = std::strtod(cells[0].c_str(), nullptr);
        const double c_analytic = std::strtod(cells[1].c_str(), nullptr);
        CHECK(std::abs(c_analytic - std::cos(delta)) <= 1e-11);
    }
}

TEST_CASE("identical configs produce identical bytes; seeds move only c_sampled") {
    const std::string first = run_to_string(rto_config(42));
    const std::string second = run_to_string(rto_config(42));
    CHECK(first == second);

    const auto base = lines_of(first);
    const auto reseeded = lines_of(run_to_string(rto_config(43)));
    REQUIRE(base.size() == reseeded.size());
    bool sampled_changed = false;
    for (std::size_t i = 1; i < base.size(); ++i) {
        const auto a = split_csv(base[i]);
        const auto b = split_csv(reseeded[i]);
        CHECK(a[0] == b[0]);  // delta_phase
        CHECK(a[1] == b[1]);  // c_analytic
        CHECK(a[4] == b[4]);  // p11
        if (a[2] != b[2]) sampled_changed = true;
    }
    CHECK(sampled_changed);
}

TEST_CASE("the binary is a thin shell over run()") {
    const std::string direct = run_to_string(rto_config(7));
    const ExecResult via_binary =
        exec_cli("rto-sweep --steps 9 --trials 5000 --seed 7 --format csv");
    CHECK(via_binary.code == 0);
    CHECK(via_binary.out == direct);
}

TEST_CASE("sample matches library composition cell for cell") {
    const JointDistribution joint = joint_probabilities(build_rto(0.9, 0.2));
    const TrialCounts counts = sample_trials(joint, 12000, 5);
    const CorrelationEstimate est = estimate_correlation(counts);

    RunConfig cfg;
    cfg.command = Command::Sample;
    cfg.phi_s = 0.9;
    cfg.phi_a = 0.2;
    cfg.trials = 12000;
    cfg.seed = 5;
    const auto lines = lines_of(run_to_string(cfg));
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "phi_s,phi_a,trials,seed,n11,n12,n21,n22,c_hat,std_err");
    const auto cells = split_csv(lines[1]);
    REQUIRE(cells.size() == 10);
    CHECK(cells[4] == std::to_string(counts.n11));
    CHECK(cells[5] == std::to_string(counts.n12));
    CHECK(cells[6] == std::to_string(counts.n21));
    CHECK(cells[7] == std::to_string(counts.n22));
    CHECK(cells[8] == format_double(est.c_hat));
    CHECK(cells[9] == format_double(est.std_err));
}

TEST_CASE("mz-sweep follows the fringe") {
    RunConfig cfg;
    cfg.command = Command::MzSweep;
    cfg.min_phase = 0.0;
    cfg.max_phase = 2.0 * kPi;
    cfg.steps = 13;
    const auto lines = lines_of(run_to_string(cfg));
    REQUIRE(lines.size() == 14);
    CHECK(lines[0] == "phase,p_d1,p_d2");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split_csv(lines[i]);
        const double phase = std::strtod(cells[0].c_str(), nullptr);
        const double p_d1 = std::strtod(cells[1].c_str(), nullptr);
        CHECK(std::abs(p_d1 - 0.5 * (1.0 + std::cos(phase))) <= 1e-11);
    }
}

TEST_CASE("chsh single point csv") {
    RunConfig cfg;
    cfg.command = Command::Chsh;
    cfg.settings = canonical_settings();
    const auto lines = lines_of(run_to_string(cfg));
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] ==
          "a,a_prime,b,b_prime,e_ab,e_ab_prime,e_a_prime_b,e_a_prime_b_prime,s_value,"
          "violated");
    const auto cells = split_csv(lines[1]);
    REQUIRE(cells.size() == 10);
    CHECK(std::abs(std::strtod(cells[8].c_str(), nullptr) - 2.0 * std::numbers::sqrt2) <=
          1e-11);
    CHECK(cells[9] == "true");
}

TEST_CASE("chsh canonical scan csv and json") {
    RunConfig cfg;
    cfg.command = Command::Chsh;
    cfg.chsh_mode = ChshMode::Canonical;
    cfg.min_phase = -0.5 * kPi;
    cfg.max_phase = 0.5 * kPi;
    cfg.steps = 181;

    const auto lines = lines_of(run_to_string(cfg));
    REQUIRE(lines.size() == 182);
    CHECK(lines[0] == "theta,s_value,violated");
    double max_s = -10.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        max_s = std::max(max_s, std::strtod(split_csv(lines[i])[1].c_str(), nullptr));
    }
    CHECK(std::abs(max_s - 2.8284271247461903) <= 1e-3);

    cfg.format = Format::Json;
    const auto doc = nlohmann::json::parse(run_to_string(cfg));
    CHECK(doc.at("schema_version") == 1);
    CHECK(doc.at("command") == "chsh");
    REQUIRE(doc.at("interval").is_object());
    const double lo = doc.at("interval").at("theta_lo").get<double>();
    const double hi = doc.at("interval").at("theta_hi").get<double>();
    CHECK(hi > 0.0);
    CHECK(std::abs(lo + hi) <= 2e-3);
    CHECK(doc.at("data").size() == 181);
}

TEST_CASE("chsh sampled mode stays near the analytic value") {
    RunConfig cfg;
    cfg.command = Command::Chsh;
    cfg.settings = canonical_settings();
    cfg.sampled = true;
    cfg.trials = 100000;
    cfg.seed = 42;
    const auto lines = lines_of(run_to_string(cfg));
    REQUIRE(lines.size() == 2);
    const auto cells = split_csv(lines[1]);
    CHECK(std::abs(std::strtod(cells[8].c_str(), nullptr) - 2.8284271247461903) < 0.05);
    CHECK(cells[9] == "true");

    const ExecResult binary =
        exec_cli("chsh --sampled --trials 100000 --seed 42 --format csv");
    CHECK(binary.code == 0);
    CHECK(binary.out == run_to_string(cfg));
}

TEST_CASE("table1 json carries the discrepancy notes") {
    RunConfig cfg;
    cfg.command = Command::Table1;
    cfg.format = Format::Json;
    const auto doc = nlohmann::json::parse(run_to_string(cfg));
    const auto& data = doc.at("data");
    REQUIRE(data.size() == 5);
    CHECK(!data[0].contains("discrepancy_note"));
    CHECK(data[1].contains("discrepancy_note"));
    CHECK(!data[2].contains("discrepancy_note"));
    CHECK(data[3].contains("discrepancy_note"));
    CHECK(!data[4].contains("discrepancy_note"));
    CHECK(data[1].at("p_same").get<double>() == doctest::Approx(0.853553390593));
}

TEST_CASE("marginals stay flat across the grid") {
    RunConfig cfg;
    cfg.command = Command::Marginals;
    cfg.min_phase = 0.0;
    cfg.max_phase = 2.0 * kPi;
    cfg.steps = 5;
    const auto lines = lines_of(run_to_string(cfg));
    REQUIRE(lines.size() == 26);
    CHECK(lines[0] == "phi_s,phi_a,p_s1,p_a1,max_deviation");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split_csv(lines[i]);
        CHECK(std::strtod(cells[2].c_str(), nullptr) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(std::strtod(cells[4].c_str(), nullptr) <= 1e-12);
    }

    cfg.format = Format::Json;
    const auto doc = nlohmann::json::parse(run_to_string(cfg));
    CHECK(doc.at("audit").at("passed").get<bool>());
    CHECK(doc.at("audit").at("max_deviation").get<double>() <= 1e-12);
}

TEST_CASE("validation failures return exit code 3") {
    RunConfig bad_steps = rto_config(42);
    bad_steps.steps = 1;
    std::ostringstream out, diag;
    CHECK(run(bad_steps, out, diag) == kExitValidation);
    CHECK(diag.str().find("error:") == 0);

    RunConfig bad_trials = rto_config(42);
    bad_trials.trials = 0;
    std::ostringstream out2, diag2;
    CHECK(run(bad_trials, out2, diag2) == kExitValidation);

    RunConfig bad_grid;
    bad_grid.command = Command::Chsh;
    bad_grid.chsh_mode = ChshMode::Maximize;
    bad_grid.grid_step = 1.0;  // above pi/8
    std::ostringstream out3, diag3;
    CHECK(run(bad_grid, out3, diag3) == kExitValidation);
}

TEST_CASE("run_to_output reports unwritable paths as I/O errors") {
    RunConfig cfg = rto_config(42, 3, 10);
    cfg.output = "/nonexistent-dir/out.csv";
    std::ostringstream diag;
    CHECK(run_to_output(cfg, diag) == kExitIo);
    CHECK(diag.str().find("error:") == 0);
}

TEST_CASE("binary exit codes") {
    CHECK(exec_cli("").code == kExitUsage);
    CHECK(exec_cli("no-such-command").code == kExitUsage);
    CHECK(exec_cli("rto-sweep --no-such-flag").code == kExitUsage);
    CHECK(exec_cli("chsh --canonical --maximize").code == kExitUsage);
    CHECK(exec_cli("rto-sweep --trials 0 --steps 3").code == kExitValidation);
    CHECK(exec_cli("rto-sweep --steps 1").code == kExitValidation);
    CHECK(exec_cli("rto-sweep --steps 3 --trials 10 --format yaml").code == kExitValidation);
    CHECK(exec_cli("table1 --output /nonexistent-dir/t.csv").code == kExitIo);
    CHECK(exec_cli("--help").code == 0);
    CHECK(exec_cli("chsh --maximize --sampled").code == kExitUsage);
}

TEST_CASE("BIPHOTON_SEED is the fallback seed") {
    const ExecResult explicit_seed = exec_cli("sample --phi-s 1 --trials 2000 --seed 123");
    REQUIRE(explicit_seed.code == 0);

    setenv("BIPHOTON_SEED", "123", 1);
    const ExecResult via_env = exec_cli("sample --phi-s 1 --trials 2000");
    unsetenv("BIPHOTON_SEED");
    REQUIRE(via_env.code == 0);
    CHECK(via_env.out == explicit_seed.out);

    setenv("BIPHOTON_SEED", "not-a-number", 1);
    const ExecResult bad_env = exec_cli("sample --phi-s 1 --trials 2000");
    unsetenv("BIPHOTON_SEED");
    CHECK(bad_env.code == kExitValidation);

    // An explicit flag beats the environment.
    setenv("BIPHOTON_SEED", "999", 1);
    const ExecResult flag_wins = exec_cli("sample --phi-s 1 --trials 2000 --seed 123");
    unsetenv("BIPHOTON_SEED");
    CHECK(flag_wins.out == explicit_seed.out);
}

TEST_CASE("--degrees converts phase flags") {
    const ExecResult deg = exec_cli("mz-sweep --min 0 --max 180 --steps 3 --degrees");
    REQUIRE(deg.code == 0);
    const auto lines = lines_of(deg.out);
    REQUIRE(lines.size() == 4);
    const auto mid = split_csv(lines[2]);
    CHECK(std::strtod(mid[0].c_str(), nullptr) == doctest::Approx(0.5 * kPi).epsilon(1e-11));
    CHECK(std::strtod(mid[1].c_str(), nullptr) == doctest::Approx(0.5).epsilon(1e-9));
    const auto last = split_csv(lines[3]);
    CHECK(std::strtod(last[1].c_str(), nullptr) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("--output writes the same bytes as stdout") {
    const std::string direct = run_to_string(rto_config(11, 5, 100));
    RunConfig cfg = rto_config(11, 5, 100);
    cfg.output = "cli_file_out.tmp";
    std::ostringstream diag;
    REQUIRE(run_to_output(cfg, diag) == kExitOk);
    CHECK(slurp("cli_file_out.tmp") == direct);
    std::remove("cli_file_out.tmp");
}

TEST_CASE("json envelope echoes the config") {
    RunConfig cfg = rto_config(42, 3, 50);
    cfg.format = Format::Json;
    const auto doc = nlohmann::json::parse(run_to_string(cfg));
    CHECK(doc.at("schema_version") == 1);
    CHECK(doc.at("command") == "rto-sweep");
    CHECK(doc.at("config").at("steps") == 3);
    CHECK(doc.at("config").at("trials") == 50);
    CHECK(doc.at("config").at("seed") == 42);
    CHECK(doc.at("data").size() == 3);
}
