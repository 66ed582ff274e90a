#pragma once

#include <vector>

#include "mograd/problem.hpp"
#include "mograd/solvers.hpp"

namespace mograd {

/// Criticality measure ||proj_{C(x)}(0)|| with C(x) the convex hull of the
/// objective gradients; zero exactly at Pareto critical points.
double kkt_residual(const MOProblem& p, const Vector& x);

/// sigma_k(z) = min_i f_i(x^k) - f_i(z), evaluated from value vectors.
double sigma_k(const Vector& values_k, const Vector& values_z);

/// Finite reference set for merit estimates: points z with cached values f(z).
struct ReferenceSet {
    std::vector<Vector> points;
    std::vector<Vector> values;
};

ReferenceSet make_reference_set(const MOProblem& p, const std::vector<Vector>& points);

/// Finite-sample lower bound of the merit function u0(x):
/// max_{z in Z} min_i f_i(x) - f_i(z). Monotone in Z.
double u0_estimate(const MOProblem& p, const Vector& x, const std::vector<Vector>& Z);

/// Per-iteration merit data over a recorded run.
struct MeritEstimate {
    ReferenceSet reference;
    Matrix sigma_values;         // (k_final x |Z|): sigma_k(z) per iterate and reference
    std::vector<double> u0_hat;  // rowwise max of sigma_values
};

MeritEstimate merit_trace(const RunRecord& run, const ReferenceSet& refs);

/// Discrete energies E_{i,k} = f_i(x^k) + ||x^k - x^{k-1}||^2 * denom, where
/// denom is 1/(2h^2) for the inertial method and 1/(2s) for the accelerated one.
enum class EnergyKind { inertial_h2, accelerated_s };

struct EnergyTrace {
    EnergyKind kind = EnergyKind::accelerated_s;
    std::vector<Vector> energies;  // E_{.,k}, k = 1..k_final
    std::vector<Vector> deltas;    // E_{.,k+1} - E_{.,k}
};

EnergyTrace energy_trace(const RunRecord& run, EnergyKind kind, double h_or_s);

/// Certificate check for the O(k^-2) rate of the accelerated method:
/// for every k >= 1 and z in the reference set,
///   sigma_k(z) <= 2 (||x^1 - z||^2 + ||x^2 - z||^2) / (s (k+1)^2),
/// and the aggregate bound u0_hat(x^k) (k+1)^2 <= 4 R_hat / s with
/// R_hat = max_{j in {1,2}, z} ||x^j - z||^2. The aggregate form treats the
/// weak Pareto front as staying within bounded distance of the starts; this
/// holds for the bundled suite problems and is assumed, not checked.
struct RateBoundReport {
    bool sigma_pass = false;
    double sigma_worst_margin = 0.0;  // min over (k, z) of bound - sigma_k(z)
    int sigma_worst_k = -1;
    int sigma_worst_z = -1;
    bool u0_pass = false;
    double u0_worst_margin = 0.0;  // min over k of 4 R_hat / s - u0_hat_k (k+1)^2
    int u0_worst_k = -1;
    double r_hat = 0.0;
    Matrix margins;  // (k_final x |Z|) per-pair sigma margins

    bool pass() const { return sigma_pass && u0_pass; }
};

RateBoundReport check_rate_bound(const RunRecord& run, const ReferenceSet& refs, double s,
                                 double slack = 1e-9);

/// Distance of x to the problem's analytic Pareto set.
/// Throws UnsupportedError when the problem carries no description.
double pareto_distance(const MOProblem& p, const Vector& x);

}  // namespace mograd
