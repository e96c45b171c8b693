#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace svm {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A trajectory left the finite numbers. No clamping is attempted.
class IntegrationDiverged : public Error {
public:
    IntegrationDiverged(std::size_t step, std::size_t path)
        : Error("integration diverged at step " + std::to_string(step) + " (path " +
                std::to_string(path) + ")"),
          step_(step), path_(path) {}

    [[nodiscard]] std::size_t step() const noexcept { return step_; }
    [[nodiscard]] std::size_t path() const noexcept { return path_; }

private:
    std::size_t step_;
    std::size_t path_;
};

class InsufficientSamples : public Error {
public:
    using Error::Error;
};

class DomainCoverageError : public Error {
public:
    using Error::Error;
};

/// The wavefunction vanishes inside the domain; drifts diverge there.
class NodeDetected : public Error {
public:
    explicit NodeDetected(std::vector<double> crossings)
        : Error(describe(crossings)), crossings_(std::move(crossings)) {}

    [[nodiscard]] const std::vector<double>& zero_crossings() const noexcept { return crossings_; }

private:
    static std::string describe(const std::vector<double>& xs) {
        std::string msg = "wavefunction node detected at x =";
        for (double x : xs) msg += " " + std::to_string(x);
        return msg;
    }
    std::vector<double> crossings_;
};

/// Explicit stepping violated its stability bound.
class StabilityError : public Error {
public:
    StabilityError(const std::string& what, double suggested_dt)
        : Error(what + " (suggested dt <= " + std::to_string(suggested_dt) + ")"),
          suggested_dt_(suggested_dt) {}

    [[nodiscard]] double suggested_dt() const noexcept { return suggested_dt_; }

private:
    double suggested_dt_;
};

/// Requested the dissipative (alpha1 != 0) branch, which is not implemented.
class UnsupportedBranch : public Error {
public:
    using Error::Error;
};

/// Scenario configuration rejected; `field_path()` names the offending entry.
class ConfigError : public Error {
public:
    ConfigError(std::string field_path, const std::string& what)
        : Error(field_path + ": " + what), field_path_(std::move(field_path)) {}

    [[nodiscard]] const std::string& field_path() const noexcept { return field_path_; }

private:
    std::string field_path_;
};

/// A library error raised inside a pipeline stage, tagged with the module that failed.
class StageError : public Error {
public:
    StageError(std::string module, const std::string& what)
        : Error("[" + module + "] " + what), module_(std::move(module)) {}

    [[nodiscard]] const std::string& module() const noexcept { return module_; }

private:
    std::string module_;
};

}  // namespace svm
