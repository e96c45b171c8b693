#pragma once

#include "svm/report.hpp"
#include "svm/scenario.hpp"

#include <filesystem>
#include <optional>

namespace svm {

struct RunOptions {
    unsigned threads = 1;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> snapshot_stride;
    /// When false nothing is written (validation only).
    bool write_outputs = true;
};

/// Schrodinger evolution -> Madelung fields -> drifts -> sampled Nelson
/// ensemble and density solvers -> checks. Writes fields.csv, ensemble.csv,
/// density.csv and report.json into `output_dir`; deterministic given the seed.
[[nodiscard]] RunReport run_scenario(const ScenarioConfig& config, const std::filesystem::path& output_dir,
                                     const RunOptions& options = {});

}  // namespace svm
