#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mograd/problem.hpp"
#include "mograd/simplex_solver.hpp"

namespace mograd {

enum class Method { SD, Inertial, AccG, AccGNoQ, NesterovRef };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct BacktrackingConfig {
    double s0 = 1.0;     // initial step size
    double sigma = 0.5;  // shrink factor in (0,1)
};

struct SolverConfig {
    Method method = Method::SD;
    double step_size = 1e-2;  // s
    double alpha = 1.0;       // Inertial friction; Nesterov damping (>= 3) for NesterovRef
    double h = 0.1;           // Inertial discretization step
    int max_iters = 1000;     // k_max
    double tol = 0.0;         // stopping threshold on ||f(x^k) - f(x^{k-1})||_inf
    std::optional<BacktrackingConfig> backtracking;
    bool track_kkt = false;   // record the KKT residual at every iterate (extra evaluations)

    void validate() const;
};

/// State of one run between steps. The paper's initialization x^0 = x^1 is
/// expressed as x_prev == x_curr at k = 1.
struct IterateState {
    Vector x_prev;
    Vector x_curr;
    int k = 1;
    double step_size = 0.0;  // s_k carry; non-increasing under backtracking
    Vector last_theta;       // subproblem weights of the last step (empty if none)
    int last_index = -1;     // objective chosen by AccGNoQ (-1 if none)
};

enum class TerminationReason { max_iters, tol_met, eval_failure };

std::string termination_name(TerminationReason r);

/// Full history of one (problem, solver, start) run.
/// `values`, `step_norms` and `step_sizes` are dense over k = 1..k_final;
/// iterates are stored densely for n <= 64, otherwise thinned to
/// k in {1, 2, every 10th, k_final}.
struct RunRecord {
    std::vector<Vector> iterates;
    std::vector<int> iterate_ks;
    std::vector<Vector> values;
    std::vector<double> step_norms;     // ||x^k - x^{k-1}||, 0 at k = 1
    std::vector<double> step_sizes;     // step size carried at k
    std::vector<double> kkt_residuals;  // empty unless track_kkt
    TerminationReason reason = TerminationReason::max_iters;
    int k_final = 0;

    /// Stored iterate for a given k, or nullptr when thinned away.
    const Vector* iterate_at(int k) const;
};

/// One step of multiobjective steepest descent (constant step baseline):
/// x+ = x^k - s * min_norm_element(grad f(x^k)).
IterateState sd_step(const MOProblem& p, const IterateState& st, const SolverConfig& cfg);

/// One step of the inertial method:
/// x+ = x^k + (x^k - x^{k-1})/(1+ah) - h^2/(1+ah) * sum_i theta_i grad f_i(x^k),
/// theta solving min || h^2 sum theta_i grad f_i(x^k) - (x^k - x^{k-1}) ||^2 over the simplex.
IterateState inertial_step(const MOProblem& p, const IterateState& st, const SolverConfig& cfg);

/// One step of the accelerated method:
/// y^k = x^k + (k-1)/(k+2) (x^k - x^{k-1});
/// theta solves min || s sum theta_i grad f_i(y^k) - (k-1)/(k+2)(x^k - x^{k-1}) ||^2;
/// x+ = y^k - s sum_i theta_i grad f_i(y^k).
IterateState accg_step(const MOProblem& p, const IterateState& st, const SolverConfig& cfg);

/// Accelerated step without the quadratic subproblem:
/// j = argmax_i <grad f_i(y^k), x^k - x^{k-1}> (lowest index on ties);
/// x+ = y^k - s grad f_j(y^k).
IterateState accg_noq_step(const MOProblem& p, const IterateState& st, const SolverConfig& cfg);

/// Backtracking for a step x+ = w - s d: returns sigma^l * s_prev for the
/// smallest l >= 0 with
///   f_i(w - t d) <= f_i(w) - t <grad f_i(w), d> + (t/2) ||d||^2,  t = sigma^l s_prev,
/// simultaneously for all objectives. Throws StepSizeUnderflowError past l = 60.
double backtracking_search(const MOProblem& p, const Vector& w, const Vector& d,
                           double s_prev, double sigma);

/// Runs the configured method from x0 with the stopping criterion
/// ||f(x^k) - f(x^{k-1})||_inf < tol, checked after each step.
RunRecord run(const MOProblem& p, const Vector& x0, const SolverConfig& cfg);

/// Single-objective Nesterov scheme, the m = 1 reference trajectory:
/// y^k = x^k + (k-1)/(k+alpha-1)(x^k - x^{k-1}); x+ = y^k - s grad f(y^k).
RunRecord nesterov_reference(const MOProblem& single_objective, const Vector& x0,
                             double s, double alpha, int k_max);

}  // namespace mograd
