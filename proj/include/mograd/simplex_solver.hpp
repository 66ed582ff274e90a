#pragma once

#include <vector>

#include "mograd/problem.hpp"

namespace mograd {

/// Convex-combination coefficients theta in the unit simplex.
struct SimplexWeights {
    Vector theta;

    /// theta >= 0 componentwise and sums to 1 within tol.
    bool valid(double tol = 1e-12) const;
};

/// Least-squares over the unit simplex:
///   min_theta || sum_i theta_i * columns[i] - target ||^2.
/// `columns` stores the m candidate vectors as matrix columns (n x m).
struct HullProblem {
    Matrix columns;
    Vector target;
};

struct HullSolution {
    SimplexWeights weights;
    Vector residual;   // sum_i theta_i c_i - target
    double objective;  // ||residual||^2
};

/// Exact solver for the simplex-constrained least-squares problem.
///
/// For m <= 8 every active face is enumerated and the equality-constrained
/// least-squares problem on it solved through its KKT system; the best
/// feasible point wins (among near-ties, the one with fewest active
/// constraints, then lowest face mask). Larger m falls back to projected
/// gradient with simplex projection. `tol` is the KKT certificate tolerance.
HullSolution solve_hull_least_squares(const HullProblem& hp, double tol = 1e-10);

struct MinNormResult {
    SimplexWeights weights;
    Vector direction;  // sum_i theta_i gradients[i]
};

/// Minimum-norm element of the convex hull of the gradients,
/// i.e. the (negated) multiobjective steepest-descent direction.
MinNormResult min_norm_element(const std::vector<Vector>& gradients, double tol = 1e-10);

struct LinearMaxResult {
    int index;     // 0-based maximizing objective, ties broken by lowest index
    double value;  // <gradients[index], v>
};

/// Vertex solution of max_i <gradients[i], v> over the simplex.
LinearMaxResult linear_maximizer(const std::vector<Vector>& gradients, const Vector& v);

/// Grid-enumeration oracle for the hull least-squares objective (test-only
/// reference; m <= 4). Coarse barycentric grid at `resolution` followed by a
/// shrinking local pattern search. Independent of the exact solver path.
double brute_force_simplex_oracle(const HullProblem& hp, double resolution);

/// Worst KKT violation max_i (<r, p> - <r, c_i>) for a candidate theta,
/// where r = C theta - t and p = C theta. Nonpositive at the optimum.
double hull_kkt_violation(const HullProblem& hp, const SimplexWeights& w);

/// Euclidean projection onto the unit simplex (sort-and-threshold).
Vector project_to_simplex(const Vector& v);

}  // namespace mograd
