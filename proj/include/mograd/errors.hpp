#pragma once

#include <stdexcept>
#include <string>

namespace mograd {

/// Objective evaluation produced a non-finite value or gradient.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(int objective_index, const std::string& what)
        : std::runtime_error("objective " + std::to_string(objective_index) + ": " + what),
          objective_index_(objective_index) {}

    explicit EvaluationError(const std::string& what)
        : std::runtime_error(what), objective_index_(-1) {}

    /// Index of the offending objective, -1 when not tied to one.
    int objective_index() const { return objective_index_; }

private:
    int objective_index_;
};

/// Structurally invalid problem or subproblem (m = 0, mismatched dimensions, ...).
class InvalidProblemError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Backtracking shrank the step below the underflow cap.
class StepSizeUnderflowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Requested operation is not supported for the given inputs
/// (missing Pareto description, thinned run data, oversized oracle grid).
class UnsupportedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed experiment configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mograd
