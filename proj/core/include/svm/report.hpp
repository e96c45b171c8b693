#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace svm {

enum class Comparison { less_equal, greater_equal };

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    Comparison comparison = Comparison::less_equal;
    bool passed = false;
    std::string detail;
};

[[nodiscard]] CheckResult make_check(std::string name, double measured, double tolerance,
                                     Comparison comparison = Comparison::less_equal, std::string detail = {});

struct Timing {
    std::string stage;
    double seconds = 0.0;
};

struct RunReport {
    std::string scenario;
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;
    /// Wall-clock timings; kept out of report.json so reports stay reproducible.
    std::vector<Timing> timings;

    [[nodiscard]] bool all_passed() const noexcept;
};

inline constexpr const char* report_schema_version = "1";
[[nodiscard]] const char* artifact_version() noexcept;

/// Deterministic report document (no timings).
[[nodiscard]] nlohmann::json to_json(const RunReport& report);
[[nodiscard]] nlohmann::json timings_json(const RunReport& report);
/// JSON Schema (draft-07) of the document written by to_json(RunReport).
[[nodiscard]] nlohmann::json report_schema();

/// Round-trip-exact text for a double ("%.17g", "nan", "inf").
[[nodiscard]] std::string format_double(double x);

}  // namespace svm
