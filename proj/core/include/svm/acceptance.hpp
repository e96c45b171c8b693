#pragma once

#include "svm/report.hpp"

#include <functional>
#include <string>
#include <vector>

namespace svm::acceptance {

struct Options {
    unsigned threads = 1;
    /// Multiplies every time step of the suite (2 = coarser); orders are re-measured.
    double dt_scale = 1.0;
    std::uint64_t seed = 7;
};

struct Criterion {
    int id = 0;
    std::string name;
    std::vector<CheckResult> checks;
    double seconds = 0.0;

    [[nodiscard]] bool passed() const noexcept;
};

struct CriterionSpec {
    int id;
    std::string name;
    std::function<std::vector<CheckResult>(const Options&)> run;
};

/// The ten criteria in order.
[[nodiscard]] const std::vector<CriterionSpec>& criteria();

[[nodiscard]] Criterion run_criterion(const CriterionSpec& spec, const Options& options);

/// Runs every criterion and flattens the checks into one report.
[[nodiscard]] RunReport validate_all(const Options& options, std::vector<Criterion>* details = nullptr);

/// "[PASS] C01 density equivalence: ..." style line.
[[nodiscard]] std::string summary_line(const Criterion& criterion);

}  // namespace svm::acceptance
