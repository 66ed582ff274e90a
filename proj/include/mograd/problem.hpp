#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mograd/errors.hpp"

namespace mograd {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// One smooth scalar objective: value and gradient callables over R^n.
/// `value_and_gradient` is an optional fused evaluator; when present it is
/// preferred by evaluate_all so shared work (softmax terms etc.) is done once.
struct Objective {
    std::function<double(const Vector&)> value;
    std::function<Vector(const Vector&)> gradient;
    std::function<std::pair<double, Vector>(const Vector&)> value_and_gradient;
};

/// Analytic description of the Pareto set, available for suite problems only.
struct ParetoSetInfo {
    std::function<bool(const Vector&)> contains;
    std::function<double(const Vector&)> distance;
    std::string description;
};

/// A multiobjective problem: m smooth objectives over R^n.
/// Immutable after construction; evaluation is safe to call concurrently.
struct MOProblem {
    int n = 0;
    int m = 0;
    std::vector<Objective> objectives;
    std::optional<double> lipschitz_hint;       // common gradient Lipschitz bound
    std::optional<ParetoSetInfo> known_pareto;  // set only for suite problems

    void validate() const;
};

struct Evaluation {
    Vector values;                 // f_i(x), length m
    std::vector<Vector> gradients; // grad f_i(x), each length n
};

/// Evaluates all objectives and gradients at x in a single pass.
/// Throws EvaluationError (naming the objective index) on non-finite output.
Evaluation evaluate_all(const MOProblem& p, const Vector& x);

/// Values only; used by the run loop for the stopping test and traces.
Vector evaluate_values(const MOProblem& p, const Vector& x);

/// Central-difference gradient of objective i, test oracle for analytic gradients.
Vector finite_difference_gradient(const MOProblem& p, int i, const Vector& x, double h);

}  // namespace mograd
