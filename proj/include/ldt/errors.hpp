#pragma once

#include <stdexcept>
#include <string>

namespace ldt {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration value or malformed config document.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

/// The physical-twin integration produced non-finite state.
class SimulationDiverged : public Error {
public:
    explicit SimulationDiverged(const std::string& what, int experiment_index = -1)
        : Error(what), experiment_index(experiment_index) {}
    int experiment_index;
};

/// Least-squares identification could not produce a usable model.
class IdentificationError : public Error {
public:
    explicit IdentificationError(const std::string& what) : Error(what) {}
};

/// Gaussian-process fit failed (degenerate data or no admissible hyperparameters).
class GpFitError : public Error {
public:
    explicit GpFitError(const std::string& what) : Error(what) {}
};

/// A closed-loop model rollout produced non-finite output.
class RolloutDiverged : public Error {
public:
    explicit RolloutDiverged(const std::string& what) : Error(what) {}
};

} // namespace ldt
