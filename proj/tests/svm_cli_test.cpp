#include "svm/acceptance.hpp"
#include "svm/errors.hpp"
#include "svm/io.hpp"
#include "svm/pipeline.hpp"
#include "svm/report.hpp"
#include "svm/scenario.hpp"
#include "svm/sde.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace svm;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path source_dir = SVM_SOURCE_DIR;
const std::string cli = SVM_CLI_PATH;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("svm_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

json small_config() {
    return json::parse(R"({
        "name": "small",
        "grid": {"min": -8, "max": 8, "n_cells": 200},
        "time": {"t_end": 0.5, "n_steps": 100, "snapshot_stride": 10},
        "ensemble": {"n_paths": 2000, "seed": 3}
    })");
}

std::string config_error_path(const json& doc) {
    try {
        (void)parse_scenario(doc);
    } catch (const ConfigError& e) {
        return e.field_path();
    }
    return "<no error>";
}

int run_cli(const std::string& args, const std::string& env = {}) {
    const std::string cmd = env + (env.empty() ? "" : " ") + "'" + cli + "' " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunOptions options(unsigned threads, std::optional<std::uint64_t> seed = std::nullopt,
                   std::optional<std::size_t> stride = std::nullopt, bool write = true) {
    return RunOptions{threads, seed, stride, write};
}

std::string fmt_id(std::size_t id) { return (id < 10 ? "C0" : "C") + std::to_string(id); }

fs::path write_config(const fs::path& dir, const json& doc) {
    fs::create_directories(dir);
    const fs::path p = dir / "config.json";
    std::ofstream(p) << doc.dump(2);
    return p;
}

}  // namespace

TEST(ScenarioParsing, MinimalDocumentTakesDefaults) {
    const ScenarioConfig c = parse_scenario(json{{"name", "x"}});
    EXPECT_EQ(c.name, "x");
    EXPECT_EQ(c.potential.kind, PotentialConfig::Kind::free);
    EXPECT_DOUBLE_EQ(c.nu(), 0.5);
    EXPECT_FALSE(c.checks.has_value());
}

TEST(ScenarioParsing, NuOverride) {
    json doc = small_config();
    doc["nu_override"] = 0.25;
    EXPECT_DOUBLE_EQ(parse_scenario(doc).nu(), 0.25);
}

TEST(ScenarioParsing, ErrorsNameTheField) {
    auto with = [](const json::json_pointer& ptr, json value) {
        json doc = small_config();
        doc[ptr] = std::move(value);
        return doc;
    };
    EXPECT_EQ(config_error_path(with("/ensemble/n_paths"_json_pointer, 0)), "ensemble.n_paths");
    EXPECT_EQ(config_error_path(with("/ensemble/n_paths"_json_pointer, -5)), "ensemble.n_paths");
    EXPECT_EQ(config_error_path(with("/ensemble/n_paths"_json_pointer, "many")), "ensemble.n_paths");
    EXPECT_EQ(config_error_path(with("/time/t_end"_json_pointer, -1.0)), "time.t_end");
    EXPECT_EQ(config_error_path(with("/time/snapshot_stride"_json_pointer, 7)), "time.snapshot_stride");
    EXPECT_EQ(config_error_path(with("/grid/max"_json_pointer, -9.0)), "grid.max");
    EXPECT_EQ(config_error_path(with("/grid/colour"_json_pointer, "red")), "grid.colour");
    EXPECT_EQ(config_error_path(with("/potential"_json_pointer, json{{"kind", "cubic"}})), "potential.kind");
    EXPECT_EQ(config_error_path(with("/potential"_json_pointer, json{{"kind", "polynomial"}, {"coefficients", {1.0, "x"}}})),
              "potential.coefficients[1]");
    EXPECT_EQ(config_error_path(with("/initial_state"_json_pointer, json{{"kind", "plane_wave"}})), "initial_state.kind");
    EXPECT_EQ(config_error_path(with("/checks"_json_pointer, json::array({"density_l1", "sparkle"}))), "checks[1]");
    EXPECT_EQ(config_error_path(with("/checks"_json_pointer, json::array({"density_l1", "density_l1"}))), "checks[1]");
    EXPECT_EQ(config_error_path(with("/schema_version"_json_pointer, "99")), "schema_version");
    EXPECT_EQ(config_error_path(with("/nu_override"_json_pointer, 0.0)), "nu_override");
    EXPECT_EQ(config_error_path(with("/bogus"_json_pointer, 1)), "bogus");
    EXPECT_EQ(config_error_path(json::object()), "name");
}

TEST(ScenarioParsing, LoadReportsMissingAndMalformedFiles) {
    const fs::path dir = scratch("load");
    EXPECT_THROW((void)load_scenario((dir / "none.json").string()), ConfigError);
    std::ofstream(dir / "bad.json") << "{ \"name\": ";
    try {
        (void)load_scenario((dir / "bad.json").string());
        FAIL() << "expected a ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("malformed JSON"), std::string::npos);
    }
}

TEST(ScenarioParsing, JsonRoundTrip) {
    for (const ScenarioConfig& c : bundled_scenarios()) {
        const json doc = to_json(c);
        EXPECT_EQ(to_json(parse_scenario(doc)), doc) << c.name;
    }
    json doc = small_config();
    doc["checks"] = json::array();
    const ScenarioConfig c = parse_scenario(doc);
    ASSERT_TRUE(c.checks.has_value());
    EXPECT_TRUE(c.checks->empty());
    EXPECT_EQ(to_json(parse_scenario(to_json(c))), to_json(c));
}

TEST(BundledScenarios, FilesMatchTheBuiltInDefinitions) {
    const auto bundled = bundled_scenarios();
    ASSERT_EQ(bundled.size(), 5u);
    for (const ScenarioConfig& c : bundled) {
        const fs::path p = source_dir / "scenarios" / (c.name + ".json");
        ASSERT_TRUE(fs::exists(p)) << p;
        EXPECT_EQ(json::parse(slurp(p)), to_json(c)) << c.name;
        EXPECT_EQ(load_scenario(p.string()).name, c.name);
    }
}

TEST(BundledScenarios, DefaultChecksAreKnown) {
    const auto& known = known_checks();
    for (const ScenarioConfig& c : bundled_scenarios())
        for (const auto& name : default_checks(c))
            EXPECT_NE(std::find(known.begin(), known.end(), name), known.end()) << c.name << " " << name;
}

TEST(Schemas, DocsMatchTheGeneratedSchemas) {
    EXPECT_EQ(json::parse(slurp(source_dir / "docs" / "config_schema.json")), scenario_schema());
    EXPECT_EQ(json::parse(slurp(source_dir / "docs" / "report_schema.json")), report_schema());
}

TEST(Schemas, ScenarioSchemaListsEveryCheck) {
    const json s = scenario_schema();
    EXPECT_EQ(s["$schema"], "http://json-schema.org/draft-07/schema#");
    EXPECT_EQ(s["properties"]["checks"]["items"]["enum"], json(known_checks()));
}

TEST(Report, DocumentLayout) {
    RunReport r;
    r.scenario = "demo";
    r.seed = 42;
    r.checks.push_back(make_check("a", 0.5, 1.0));
    r.checks.push_back(make_check("b", 0.5, 1.0, Comparison::greater_equal, "why"));
    r.timings.push_back({"stage", 1.25});
    const json j = to_json(r);
    EXPECT_EQ(j["scenario"], "demo");
    EXPECT_EQ(j["seed"], 42);
    EXPECT_EQ(j["all_passed"], false);
    EXPECT_EQ(j["checks"].size(), 2u);
    EXPECT_EQ(j["checks"][0]["passed"], true);
    EXPECT_EQ(j["checks"][1]["comparison"], ">=");
    EXPECT_EQ(j["checks"][1]["passed"], false);
    EXPECT_FALSE(j.contains("timings"));
    EXPECT_EQ(timings_json(r)["seconds"]["stage"], 1.25);
    EXPECT_EQ(j["report_schema_version"], report_schema_version);
    EXPECT_EQ(j["artifact_version"], artifact_version());
}

TEST(Report, ChecksCompareInclusively) {
    EXPECT_TRUE(make_check("x", 1.0, 1.0).passed);
    EXPECT_TRUE(make_check("x", 1.0, 1.0, Comparison::greater_equal).passed);
    EXPECT_FALSE(make_check("x", std::nan(""), 1.0).passed);
}

TEST(Report, FormatDoubleRoundTrips) {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) EXPECT_EQ(std::stod(format_double(x)), x);
    EXPECT_EQ(format_double(std::nan("")), "nan");
    EXPECT_EQ(format_double(INFINITY), "inf");
    EXPECT_EQ(format_double(-INFINITY), "-inf");
}

TEST(Io, FieldCsvRoundTrip) {
    const fs::path dir = scratch("csv");
    const Grid1D g{-1.0, 1.0, 4, false};
    FieldSeries a, b;
    for (int j = 0; j < 3; ++j) {
        const double t = 0.1 * j;
        a.snapshots.push_back(GridField::from_function(g, [t](double x) { return x / 3.0 + t; }, t));
        b.snapshots.push_back(GridField(g, {1.0, 2.0, 3.0, 4.0, 5.0}, {1, 0, 1, 1, 1}, t));
    }
    io::write_field_csv(dir / "f.csv", {{"a", a}, {"b", b}});
    const std::string text = slurp(dir / "f.csv");
    EXPECT_EQ(text.substr(0, text.find('\n')), "t,x,a,b");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 3 * 5);
    const auto back = io::read_field_csv(dir / "f.csv", g);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0].first, "a");
    for (int j = 0; j < 3; ++j) {
        EXPECT_EQ(*back[0].second[j].time(), *a[j].time());
        for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(back[0].second[j][i], a[j][i]);
        EXPECT_FALSE(back[1].second[j].valid(1));
        EXPECT_EQ(back[1].second[j][3], 4.0);
    }
}

TEST(Io, MismatchedColumnsAreRejected) {
    const fs::path dir = scratch("csv_bad");
    FieldSeries a, b;
    a.snapshots.push_back(GridField(Grid1D{0.0, 1.0, 2, false}, {1.0, 2.0, 3.0}, 0.0));
    b.snapshots.push_back(GridField(Grid1D{0.0, 2.0, 2, false}, {1.0, 2.0, 3.0}, 0.0));
    EXPECT_THROW(io::write_field_csv(dir / "f.csv", {{"a", a}, {"b", b}}), InvalidArgument);
}

TEST(Io, EnsembleCsvHonoursThePathLimit) {
    const fs::path dir = scratch("ens");
    const auto e = integrate_forward(DriftSpec::zero(), 0.5, point_sampler({0.0}), TimeGrid(0.0, 1.0, 4), 10, 1);
    io::write_ensemble_csv(dir / "e.csv", e, 3);
    const std::string text = slurp(dir / "e.csv");
    EXPECT_EQ(text.substr(0, text.find('\n')), "path,point,t,x0");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 3 * 5);
}

TEST(Pipeline, OutputsDoNotDependOnThreads) {
    const ScenarioConfig c = parse_scenario(small_config());
    const fs::path d1 = scratch("threads1"), d2 = scratch("threads2");
    const RunReport r1 = run_scenario(c, d1, options(1));
    const RunReport r2 = run_scenario(c, d2, options(3));
    ASSERT_EQ(r1.checks.size(), r2.checks.size());
    for (const char* f : {"fields.csv", "ensemble.csv", "density.csv", "report.json"}) {
        ASSERT_TRUE(fs::exists(d1 / f)) << f;
        EXPECT_EQ(slurp(d1 / f), slurp(d2 / f)) << f;
    }
}

TEST(Pipeline, SeedChangesTheEnsemble) {
    const ScenarioConfig c = parse_scenario(small_config());
    const fs::path d1 = scratch("seed1"), d2 = scratch("seed2");
    (void)run_scenario(c, d1, options(1));
    (void)run_scenario(c, d2, options(1, 99));
    EXPECT_NE(slurp(d1 / "ensemble.csv"), slurp(d2 / "ensemble.csv"));
    EXPECT_EQ(json::parse(slurp(d2 / "report.json"))["seed"], 99);
}

TEST(Pipeline, EmptyCheckListRunsNoChecks) {
    json doc = small_config();
    doc["checks"] = json::array();
    const RunReport r = run_scenario(parse_scenario(doc), scratch("empty"), options(1, std::nullopt, std::nullopt, false));
    EXPECT_TRUE(r.checks.empty());
    EXPECT_TRUE(r.all_passed());
}

TEST(Pipeline, ExplicitChecksRunInTheGivenOrder) {
    json doc = small_config();
    doc["checks"] = json::array({"energy_conservation", "el_canonical_identity"});
    const fs::path dir = scratch("explicit");
    const RunReport r = run_scenario(parse_scenario(doc), dir, options(1, std::nullopt, std::nullopt, false));
    ASSERT_EQ(r.checks.size(), 2u);
    EXPECT_EQ(r.checks[0].name, "energy_conservation");
    EXPECT_EQ(r.checks[1].name, "el_canonical_identity");
    EXPECT_TRUE(r.all_passed());
    EXPECT_FALSE(fs::exists(dir / "report.json"));
}

TEST(Pipeline, SnapshotStrideOverride) {
    const fs::path dir = scratch("stride");
    (void)run_scenario(parse_scenario(small_config()), dir, options(1, std::nullopt, 50));
    const auto cols = io::read_field_csv(dir / "fields.csv", Grid1D{-8.0, 8.0, 200, false});
    ASSERT_FALSE(cols.empty());
    EXPECT_EQ(cols[0].second.size(), 3u);
}

TEST(Cli, DumpSchemaPrintsTheScenarioSchema) {
    const fs::path dir = scratch("cli_schema");
    const int rc = std::system(("'" + cli + "' dump-schema > '" + (dir / "s.json").string() + "'").c_str());
    ASSERT_EQ(WEXITSTATUS(rc), 0);
    EXPECT_EQ(json::parse(slurp(dir / "s.json")), scenario_schema());
    ASSERT_EQ(WEXITSTATUS(std::system(("'" + cli + "' dump-schema --report > '" + (dir / "r.json").string() + "'").c_str())), 0);
    EXPECT_EQ(json::parse(slurp(dir / "r.json")), report_schema());
}

TEST(Cli, ExitCodes) {
    const fs::path dir = scratch("cli_codes");
    json pass = small_config();
    pass["checks"] = json::array({"el_canonical_identity"});
    const fs::path pass_cfg = write_config(dir / "pass", pass);
    EXPECT_EQ(run_cli("validate '" + pass_cfg.string() + "'"), 0);

    json fail = small_config();
    fail["checks"] = json::array({"el_residual"});  // far too coarse for the 1e-3 bound
    const fs::path fail_cfg = write_config(dir / "fail", fail);
    EXPECT_EQ(run_cli("validate '" + fail_cfg.string() + "'"), 1);

    json bad = small_config();
    bad["ensemble"]["n_paths"] = 0;
    EXPECT_EQ(run_cli("simulate '" + write_config(dir / "bad", bad).string() + "'"), 2);
    EXPECT_EQ(run_cli("validate"), 2);
    EXPECT_EQ(run_cli("frobnicate"), 2);
    EXPECT_EQ(run_cli("simulate '" + pass_cfg.string() + "' --threads 0"), 2);
}

TEST(Cli, SimulateWritesIntoTheOutputDirectory) {
    const fs::path dir = scratch("cli_out");
    json doc = small_config();
    doc["checks"] = json::array();
    const fs::path cfg = write_config(dir, doc);
    EXPECT_EQ(run_cli("simulate '" + cfg.string() + "'", "SVM_OUTPUT_DIR='" + (dir / "env").string() + "'"), 0);
    for (const char* f : {"fields.csv", "ensemble.csv", "density.csv", "report.json"})
        EXPECT_TRUE(fs::exists(dir / "env" / "small" / f)) << f;
    EXPECT_EQ(run_cli("simulate '" + cfg.string() + "' --out '" + (dir / "flag").string() + "'"), 0);
    EXPECT_TRUE(fs::exists(dir / "flag" / "report.json"));
}

TEST(Report, NonFiniteMeasurementsAreStrings) {
    RunReport r;
    r.checks.push_back(make_check("x", std::nan(""), 1.0));
    EXPECT_EQ(to_json(r)["checks"][0]["measured"], "nan");
}

TEST(AcceptanceRunner, CoarserStepsAreMeasuredNotAssumed) {
    // Order checks are re-measured at the coarser step; the fixed-tolerance
    // values move with it.
    for (std::size_t id : {3u, 6u}) {
        const auto& spec = acceptance::criteria()[id - 1];
        const auto fine = acceptance::run_criterion(spec, {1, 1.0});
        const auto coarse = acceptance::run_criterion(spec, {1, 2.0});
        ASSERT_EQ(fine.checks.size(), coarse.checks.size()) << id;
        bool any_order = false;
        for (std::size_t k = 0; k < fine.checks.size(); ++k) {
            EXPECT_EQ(fine.checks[k].name, coarse.checks[k].name);
            EXPECT_TRUE(std::isfinite(coarse.checks[k].measured)) << coarse.checks[k].name;
            if (coarse.checks[k].name.find("order") != std::string::npos) {
                any_order = true;
                EXPECT_NE(fine.checks[k].measured, coarse.checks[k].measured) << coarse.checks[k].name;
            }
        }
        EXPECT_TRUE(any_order) << id;
        EXPECT_NE(acceptance::summary_line(coarse).find(fmt_id(id)), std::string::npos);
    }
}

TEST(AcceptanceRunner, RejectsNonPositiveScale) {
    EXPECT_THROW((void)acceptance::run_criterion(acceptance::criteria()[0], {1, 0.0}), InvalidArgument);
}
