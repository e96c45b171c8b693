#pragma once

#include "svm/grid.hpp"
#include "svm/potential.hpp"
#include "svm/wavefunction.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace svm {

struct PotentialConfig {
    enum class Kind { free, harmonic, double_well, polynomial };
    Kind kind = Kind::free;
    double omega = 1.0;
    double a = 1.0;
    double b = 1.0;
    std::vector<double> coefficients;
};

struct InitialStateConfig {
    enum class Kind { gaussian, plane_wave, ground_state_relaxation };
    Kind kind = Kind::gaussian;
    double center = 0.0;
    double width = 1.0;
    double momentum = 0.0;
    /// Relaxation controls (imaginary-time step and count).
    double relax_tau = 0.01;
    std::size_t relax_steps = 2000;
};

struct ScenarioConfig {
    std::string name;
    PotentialConfig potential;
    double hbar = 1.0;
    double mass = 1.0;
    std::optional<double> nu_override;
    InitialStateConfig initial_state;
    Grid1D grid{-10.0, 10.0, 400, false};
    double t_end = 1.0;
    std::size_t n_steps = 1000;
    std::size_t snapshot_stride = 10;
    std::size_t n_paths = 10000;
    std::uint64_t seed = 20240101;
    std::optional<double> bin_width;
    /// Maximum number of trajectories written to ensemble.csv.
    std::size_t dump_paths = 200;
    /// Absent: the scenario's default checks. Present (possibly empty): exactly these.
    std::optional<std::vector<std::string>> checks;

    /// nu_override, or hbar / (2 m).
    [[nodiscard]] double nu() const noexcept { return nu_override.value_or(hbar / (2.0 * mass)); }
};

inline constexpr const char* config_schema_version = "1";

/// Parses and validates; throws ConfigError naming the JSON path of the fault.
[[nodiscard]] ScenarioConfig parse_scenario(const nlohmann::json& doc);
[[nodiscard]] ScenarioConfig load_scenario(const std::string& path);
[[nodiscard]] nlohmann::json to_json(const ScenarioConfig& config);

/// JSON Schema (draft-07) of the scenario document.
[[nodiscard]] nlohmann::json scenario_schema();

[[nodiscard]] PotentialSpec make_potential(const ScenarioConfig& config);
[[nodiscard]] WaveFunction make_initial_state(const ScenarioConfig& config);

/// Every check name the pipeline understands.
[[nodiscard]] const std::vector<std::string>& known_checks();
/// Checks run when the config does not list any.
[[nodiscard]] std::vector<std::string> default_checks(const ScenarioConfig& config);

/// The scenarios shipped in scenarios/*.json, in order.
[[nodiscard]] std::vector<ScenarioConfig> bundled_scenarios();

}  // namespace svm
