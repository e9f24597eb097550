#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lagbench {

/// Invalid configuration, specification or identifier. Maps to CLI exit code 1.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Failure that depends on data or runtime state. Maps to CLI exit code 2.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InstabilityError : public DataError {
public:
    InstabilityError(std::size_t variable, std::ptrdiff_t step, double value)
        : DataError("simulation diverged: variable X" + std::to_string(variable) + " at step " +
                    std::to_string(step) + " reached " + std::to_string(value)),
          variable_(variable),
          step_(step) {}

    std::size_t variable() const noexcept { return variable_; }
    std::ptrdiff_t step() const noexcept { return step_; }

private:
    std::size_t variable_;
    std::ptrdiff_t step_;
};

class InsufficientDataError : public DataError {
public:
    using DataError::DataError;
};

class DegeneracyError : public DataError {
public:
    using DataError::DataError;
};

class EvaluationError : public DataError {
public:
    using DataError::DataError;
};

class OracleCapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

}  // namespace lagbench
