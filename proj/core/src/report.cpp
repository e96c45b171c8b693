#include "svm/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#ifndef SVM_VERSION
#define SVM_VERSION "0.0.0"
#endif

namespace svm {

CheckResult make_check(std::string name, double measured, double tolerance, Comparison comparison,
                       std::string detail) {
    CheckResult c{std::move(name), measured, tolerance, comparison, false, std::move(detail)};
    // NaN never passes.
    c.passed = comparison == Comparison::less_equal ? measured <= tolerance : measured >= tolerance;
    return c;
}

bool RunReport::all_passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const char* artifact_version() noexcept { return SVM_VERSION; }

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return fmt::format("{:.17g}", x);
}

nlohmann::json to_json(const RunReport& report) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : report.checks) {
        nlohmann::json j;
        j["name"] = c.name;
        // JSON has no NaN; non-finite values are written as strings.
        if (std::isfinite(c.measured))
            j["measured"] = c.measured;
        else
            j["measured"] = format_double(c.measured);
        j["tolerance"] = c.tolerance;
        j["comparison"] = c.comparison == Comparison::less_equal ? "<=" : ">=";
        j["passed"] = c.passed;
        if (!c.detail.empty()) j["detail"] = c.detail;
        checks.push_back(std::move(j));
    }
    return {{"report_schema_version", report_schema_version},
            {"artifact_version", artifact_version()},
            {"scenario", report.scenario},
            {"seed", report.seed},
            {"all_passed", report.all_passed()},
            {"checks", std::move(checks)}};
}

nlohmann::json timings_json(const RunReport& report) {
    nlohmann::json t = nlohmann::json::object();
    for (const auto& s : report.timings) t[s.stage] = s.seconds;
    return {{"scenario", report.scenario}, {"seconds", std::move(t)}};
}

nlohmann::json report_schema() {
    const nlohmann::json check = {
        {"type", "object"},
        {"additionalProperties", false},
        {"required", {"name", "measured", "tolerance", "comparison", "passed"}},
        {"properties",
         {{"name", {{"type", "string"}}},
          {"measured",
           {{"oneOf", {{{"type", "number"}}, {{"enum", {"nan", "inf", "-inf"}}}}}}},
          {"tolerance", {{"type", "number"}}},
          {"comparison", {{"enum", {"<=", ">="}}}},
          {"passed", {{"type", "boolean"}}},
          {"detail", {{"type", "string"}}}}}};
    return {{"$schema", "http://json-schema.org/draft-07/schema#"},
            {"title", "svm run report"},
            {"type", "object"},
            {"additionalProperties", false},
            {"required", {"report_schema_version", "artifact_version", "scenario", "seed", "all_passed", "checks"}},
            {"properties",
             {{"report_schema_version", {{"const", report_schema_version}}},
              {"artifact_version", {{"type", "string"}}},
              {"scenario", {{"type", "string"}}},
              {"seed", {{"type", "integer"}, {"minimum", 0}}},
              {"all_passed", {{"type", "boolean"}}},
              {"checks", {{"type", "array"}, {"items", check}}}}}};
}

}  // namespace svm
