// svm: batch front end for the stochastic variational lab.
//
//   svm simulate <config.json> [--out DIR] [--seed N] [--snapshot-stride K] [--threads T]
//   svm validate <config.json> | --all [--out DIR] [--seed N] [--threads T] [--dt-scale S]
//   svm dump-schema [--report]
//
// Exit codes: 0 every check passed, 1 a check failed or a stage raised, 2 bad configuration.

#include "svm/acceptance.hpp"
#include "svm/errors.hpp"
#include "svm/io.hpp"
#include "svm/pipeline.hpp"
#include "svm/report.hpp"
#include "svm/scenario.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <iostream>

namespace {

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_config = 2;

std::filesystem::path output_dir(const std::string& flag, const std::string& scenario) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("SVM_OUTPUT_DIR"); env && *env) return std::filesystem::path(env) / scenario;
    return std::filesystem::path("svm_output") / scenario;
}

void print_checks(const svm::RunReport& report) {
    for (const auto& c : report.checks)
        fmt::print("[{}] {}: {} {} {}{}\n", c.passed ? "PASS" : "FAIL", c.name, svm::format_double(c.measured),
                   c.comparison == svm::Comparison::less_equal ? "<=" : ">=", c.tolerance,
                   c.detail.empty() ? "" : "  (" + c.detail + ")");
    fmt::print("{}: {} of {} checks passed\n", report.scenario,
               std::count_if(report.checks.begin(), report.checks.end(), [](const auto& c) { return c.passed; }),
               report.checks.size());
}

void print_timings(const svm::RunReport& report) {
    for (const auto& t : report.timings) fmt::print(stderr, "  {:<18} {:8.3f} s\n", t.stage, t.seconds);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic variational method lab: sample, solve and validate"};
    app.require_subcommand(1);

    std::string config_path, out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> stride;
    unsigned threads = 1;
    double dt_scale = 1.0;
    bool all = false;
    bool report_schema = false;

    auto* simulate = app.add_subcommand("simulate", "Run a scenario and write fields, ensemble, density and report");
    simulate->add_option("config", config_path, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    simulate->add_option("--out", out, "Output directory (default $SVM_OUTPUT_DIR/<name> or svm_output/<name>)");
    simulate->add_option("--seed", seed, "Override the ensemble seed");
    simulate->add_option("--snapshot-stride", stride, "Override time.snapshot_stride")->check(CLI::PositiveNumber);
    simulate->add_option("--threads", threads, "Worker threads for ensemble sampling")->check(CLI::Range(1u, 1024u));

    auto* validate = app.add_subcommand("validate", "Run a scenario's checks, or the acceptance suite with --all");
    validate->add_option("config", config_path, "Scenario JSON file");
    validate->add_flag("--all", all, "Run the acceptance suite");
    validate->add_option("--out", out, "Write outputs (scenario) or report.json (suite) here");
    validate->add_option("--seed", seed, "Override the seed");
    validate->add_option("--snapshot-stride", stride, "Override time.snapshot_stride")->check(CLI::PositiveNumber);
    validate->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 1024u));
    validate->add_option("--dt-scale", dt_scale, "Suite only: multiply every time step (2 = twice as coarse)")
        ->check(CLI::PositiveNumber);

    auto* schema = app.add_subcommand("dump-schema", "Print the scenario JSON schema");
    schema->add_flag("--report", report_schema, "Print the report schema instead");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_pass : exit_config;
    }

    try {
        if (*schema) {
            std::cout << (report_schema ? svm::report_schema() : svm::scenario_schema()).dump(2) << '\n';
            return exit_pass;
        }
        if (*validate && all) {
            if (!config_path.empty()) throw svm::ConfigError("validate", "give either a config file or --all");
            svm::acceptance::Options opts{threads, dt_scale, seed.value_or(7)};
            std::vector<svm::acceptance::Criterion> details;
            for (const auto& spec : svm::acceptance::criteria()) {
                details.push_back(svm::acceptance::run_criterion(spec, opts));
                std::cout << svm::acceptance::summary_line(details.back()) << std::endl;
            }
            svm::RunReport report;
            report.scenario = "acceptance";
            report.seed = opts.seed;
            for (const auto& c : details)
                for (auto k : c.checks) {
                    k.name = fmt::format("C{:02d}.{}", c.id, k.name);
                    report.checks.push_back(std::move(k));
                }
            if (!out.empty()) svm::io::write_text(std::filesystem::path(out) / "report.json", to_json(report).dump(2) + "\n");
            return report.all_passed() ? exit_pass : exit_fail;
        }
        if (config_path.empty()) throw svm::ConfigError("validate", "a config file or --all is required");
        const svm::ScenarioConfig config = svm::load_scenario(config_path);
        svm::RunOptions opts{threads, seed, stride, *simulate || !out.empty()};
        const auto dir = output_dir(out, config.name);
        const svm::RunReport report = svm::run_scenario(config, dir, opts);
        print_checks(report);
        print_timings(report);
        if (opts.write_outputs) fmt::print(stderr, "outputs written to {}\n", dir.string());
        return report.all_passed() ? exit_pass : exit_fail;
    } catch (const svm::ConfigError& e) {
        fmt::print(stderr, "config error: {}\n", e.what());
        return exit_config;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return exit_fail;
    }
}
