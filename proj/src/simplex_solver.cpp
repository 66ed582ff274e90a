#include "mograd/simplex_solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mograd {

bool SimplexWeights::valid(double tol) const {
    if (theta.size() == 0) return false;
    if ((theta.array() < 0.0).any()) return false;
    return std::abs(theta.sum() - 1.0) <= tol;
}

Vector project_to_simplex(const Vector& v) {
    const int m = static_cast<int>(v.size());
    std::vector<double> u(v.data(), v.data() + m);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0;
    double tau = 0.0;
    for (int j = 0; j < m; ++j) {
        css += u[j];
        double t = (css - 1.0) / (j + 1);
        if (u[j] > t) tau = t;
    }
    Vector out = (v.array() - tau).max(0.0);
    double s = out.sum();
    if (s > 0.0) out /= s;
    return out;
}

double hull_kkt_violation(const HullProblem& hp, const SimplexWeights& w) {
    Vector p = hp.columns * w.theta;
    Vector r = p - hp.target;
    const double pr = p.dot(r);
    double viol = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < hp.columns.cols(); ++i) {
        viol = std::max(viol, pr - hp.columns.col(i).dot(r));
    }
    return viol;
}

namespace {

double objective_of(const Matrix& C, const Vector& t, const Vector& theta) {
    return (C * theta - t).squaredNorm();
}

// Equality-constrained least squares on one face: minimize theta' G theta - 2 b' theta
// subject to sum(theta) = 1. The constraint is eliminated through the last face
// coordinate, leaving reduced normal equations built from Gram entries:
//   (D'D)_{ac} = G_ac - G_af - G_fc + G_ff,  rhs_a = b_a - b_f - G_af + G_ff.
// The complete orthogonal decomposition keeps singular faces (affinely
// dependent columns) well defined by returning the minimum-norm solution.
bool solve_face(const Matrix& G, const Vector& b, const std::vector<int>& face, Vector& theta_out) {
    const int f = static_cast<int>(face.size());
    theta_out.resize(f);
    if (f == 1) {
        theta_out[0] = 1.0;
        return true;
    }
    const int last = face[f - 1];
    Matrix R(f - 1, f - 1);
    Vector rhs(f - 1);
    for (int a = 0; a < f - 1; ++a) {
        for (int c = 0; c < f - 1; ++c)
            R(a, c) = G(face[a], face[c]) - G(face[a], last) - G(last, face[c]) + G(last, last);
        rhs[a] = b[face[a]] - b[last] - G(face[a], last) + G(last, last);
    }
    Vector nu;
    if (f == 2) {
        if (R(0, 0) == 0.0) return false;
        nu = rhs / R(0, 0);
    } else {
        Eigen::CompleteOrthogonalDecomposition<Matrix> cod(R);
        nu = cod.solve(rhs);
    }
    if (!nu.allFinite()) return false;
    theta_out.head(f - 1) = nu;
    theta_out[f - 1] = 1.0 - nu.sum();
    return true;
}

Vector clamp_and_normalize(const Vector& theta) {
    Vector out = theta.cwiseMax(0.0);
    const double s = out.sum();
    if (s <= 0.0) return Vector::Constant(theta.size(), 1.0 / theta.size());
    return out / s;
}

// Projected gradient on the simplex, used as fallback for large m or when the
// face enumeration certificate unexpectedly fails.
Vector projected_gradient_solve(const Matrix& C, const Vector& t, int max_iters = 20000) {
    const int m = static_cast<int>(C.cols());
    Matrix G = C.transpose() * C;
    Vector b = C.transpose() * t;
    double lip = 2.0 * G.trace();
    Vector theta = Vector::Constant(m, 1.0 / m);
    if (lip <= 0.0) return theta;
    const double step = 1.0 / lip;
    for (int it = 0; it < max_iters; ++it) {
        Vector grad = 2.0 * (G * theta - b);
        Vector next = project_to_simplex(theta - step * grad);
        double delta = (next - theta).lpNorm<Eigen::Infinity>();
        theta = next;
        if (delta < 1e-16) break;
    }
    // Polish on the detected support for an exact face solution.
    std::vector<int> support;
    for (int i = 0; i < m; ++i)
        if (theta[i] > 1e-9) support.push_back(i);
    if (!support.empty() && static_cast<int>(support.size()) < 64) {
        Vector face_theta;
        if (solve_face(G, b, support, face_theta) && (face_theta.array() >= -1e-11).all()) {
            Vector full = Vector::Zero(m);
            for (size_t a = 0; a < support.size(); ++a) full[support[a]] = face_theta[a];
            full = clamp_and_normalize(full);
            if (objective_of(C, t, full) <= objective_of(C, t, theta)) theta = full;
        }
    }
    return theta;
}

}  // namespace

HullSolution solve_hull_least_squares(const HullProblem& hp, double tol) {
    const int m = static_cast<int>(hp.columns.cols());
    if (m < 1) throw InvalidProblemError("hull problem needs at least one column");
    if (hp.columns.rows() != hp.target.size())
        throw InvalidProblemError("hull columns and target dimension mismatch");
    if (!hp.columns.allFinite() || !hp.target.allFinite())
        throw EvaluationError("non-finite hull problem input");
    if (tol <= 0.0) throw InvalidProblemError("tolerance must be positive");

    HullSolution sol;
    if (m == 1) {
        sol.weights.theta = Vector::Ones(1);
        sol.residual = hp.columns.col(0) - hp.target;
        sol.objective = sol.residual.squaredNorm();
        return sol;
    }

    // Degenerate hull: all columns identical, any theta is optimal.
    bool all_equal = true;
    for (int i = 1; i < m && all_equal; ++i)
        all_equal = (hp.columns.col(i) == hp.columns.col(0));
    if (all_equal) {
        sol.weights.theta = Vector::Constant(m, 1.0 / m);
        sol.residual = hp.columns.col(0) - hp.target;
        sol.objective = sol.residual.squaredNorm();
        return sol;
    }

    Vector best;
    double best_obj = std::numeric_limits<double>::infinity();
    int best_support = -1;

    if (m <= 8) {
        Matrix G = hp.columns.transpose() * hp.columns;
        Vector b = hp.columns.transpose() * hp.target;
        // Objective differences live on the squared scale of the data, so the
        // tie window must too, or tiny-scale problems would tie everything.
        const double tie = 1e-12 * (hp.target.squaredNorm() + hp.columns.squaredNorm());
        std::vector<int> face;
        Vector face_theta;
        for (unsigned mask = 1; mask < (1u << m); ++mask) {
            face.clear();
            for (int i = 0; i < m; ++i)
                if (mask & (1u << i)) face.push_back(i);
            if (!solve_face(G, b, face, face_theta)) continue;
            if ((face_theta.array() < -1e-11).any()) continue;
            Vector full = Vector::Zero(m);
            for (size_t a = 0; a < face.size(); ++a) full[face[a]] = face_theta[a];
            full = clamp_and_normalize(full);
            const double obj = objective_of(hp.columns, hp.target, full);
            const int support = static_cast<int>((full.array() > 0.0).count());
            if (obj < best_obj - tie || (obj <= best_obj + tie && support > best_support)) {
                best = full;
                best_obj = obj;
                best_support = support;
            }
        }
    }

    SimplexWeights w;
    if (best_support < 0) {
        w.theta = projected_gradient_solve(hp.columns, hp.target);
    } else {
        w.theta = best;
        const double scale = std::max(1.0, std::sqrt(best_obj) * hp.columns.colwise().norm().maxCoeff());
        if (hull_kkt_violation(hp, w) > tol * scale) {
            Vector pg = projected_gradient_solve(hp.columns, hp.target);
            if (objective_of(hp.columns, hp.target, pg) < best_obj) w.theta = pg;
        }
    }

    sol.weights = w;
    sol.residual = hp.columns * w.theta - hp.target;
    sol.objective = sol.residual.squaredNorm();
    return sol;
}

MinNormResult min_norm_element(const std::vector<Vector>& gradients, double tol) {
    const int m = static_cast<int>(gradients.size());
    if (m < 1) throw InvalidProblemError("min_norm_element needs at least one gradient");
    const int n = static_cast<int>(gradients[0].size());
    HullProblem hp;
    hp.columns.resize(n, m);
    for (int i = 0; i < m; ++i) {
        if (gradients[i].size() != n)
            throw InvalidProblemError("gradients have inconsistent dimensions");
        hp.columns.col(i) = gradients[i];
    }
    hp.target = Vector::Zero(n);
    HullSolution sol = solve_hull_least_squares(hp, tol);
    MinNormResult out;
    out.weights = sol.weights;
    out.direction = sol.residual;  // target is zero, so residual == hull point
    return out;
}

LinearMaxResult linear_maximizer(const std::vector<Vector>& gradients, const Vector& v) {
    if (gradients.empty()) throw InvalidProblemError("linear_maximizer needs at least one gradient");
    if (!v.allFinite()) throw EvaluationError("non-finite direction vector");
    LinearMaxResult out{0, gradients[0].dot(v)};
    for (int i = 1; i < static_cast<int>(gradients.size()); ++i) {
        const double val = gradients[i].dot(v);
        if (val > out.value) {
            out.index = i;
            out.value = val;
        }
    }
    return out;
}

namespace {

// Objective in Gram form for fast grid scans: theta' G theta - 2 b' theta + c.
struct GramObjective {
    Matrix G;
    Vector b;
    double c;

    double eval(const Vector& theta) const { return theta.dot(G * theta) - 2.0 * b.dot(theta) + c; }
};

// Maps m-1 free coordinates to a full simplex point; the last weight absorbs
// the remainder. Returns infinity for infeasible combinations.
double eval_free(const GramObjective& g, const std::vector<double>& free_coords, Vector& scratch) {
    const int m = static_cast<int>(scratch.size());
    double sum = 0.0;
    for (int i = 0; i < m - 1; ++i) {
        if (free_coords[i] < -1e-15) return std::numeric_limits<double>::infinity();
        scratch[i] = free_coords[i];
        sum += free_coords[i];
    }
    if (sum > 1.0 + 1e-12) return std::numeric_limits<double>::infinity();
    scratch[m - 1] = std::max(0.0, 1.0 - sum);
    return g.eval(scratch);
}

}  // namespace

double brute_force_simplex_oracle(const HullProblem& hp, double resolution) {
    const int m = static_cast<int>(hp.columns.cols());
    if (m < 1) throw InvalidProblemError("oracle needs at least one column");
    if (m > 4) throw UnsupportedError("grid oracle only supports m <= 4");
    if (resolution <= 0.0 || resolution > 1.0)
        throw InvalidProblemError("oracle resolution must be in (0, 1]");

    if (m == 1) return (hp.columns.col(0) - hp.target).squaredNorm();

    GramObjective g{hp.columns.transpose() * hp.columns,
                    hp.columns.transpose() * hp.target,
                    hp.target.squaredNorm()};
    Vector scratch(m);

    // Coarse barycentric grid over the m-1 free coordinates.
    const int steps = static_cast<int>(std::floor(1.0 / resolution)) + 1;
    std::vector<double> best_free(m - 1, 0.0);
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> coords(m - 1, 0.0);

    auto consider = [&](const std::vector<double>& c) {
        const double val = eval_free(g, c, scratch);
        if (val < best) {
            best = val;
            best_free = c;
        }
    };

    if (m == 2) {
        for (int i = 0; i <= steps; ++i) {
            coords[0] = std::min(1.0, i * resolution);
            consider(coords);
        }
    } else if (m == 3) {
        for (int i = 0; i <= steps; ++i) {
            coords[0] = std::min(1.0, i * resolution);
            for (int j = 0; j <= steps; ++j) {
                coords[1] = std::min(1.0, j * resolution);
                if (coords[0] + coords[1] > 1.0 + resolution) break;
                consider(coords);
            }
        }
    } else {  // m == 4
        for (int i = 0; i <= steps; ++i) {
            coords[0] = std::min(1.0, i * resolution);
            for (int j = 0; j <= steps; ++j) {
                coords[1] = std::min(1.0, j * resolution);
                if (coords[0] + coords[1] > 1.0 + resolution) break;
                for (int l = 0; l <= steps; ++l) {
                    coords[2] = std::min(1.0, l * resolution);
                    if (coords[0] + coords[1] + coords[2] > 1.0 + resolution) break;
                    consider(coords);
                }
            }
        }
    }

    // Local pattern search: shrink a coordinate window around the incumbent.
    double w = resolution;
    const int half = 3;
    std::vector<double> probe(m - 1);
    int rounds = 0;
    while (w > 1e-8 && rounds++ < 400) {
        bool improved = false;
        std::vector<int> idx(m - 1, -half);
        while (true) {
            for (int d = 0; d < m - 1; ++d)
                probe[d] = std::clamp(best_free[d] + idx[d] * (w / half), 0.0, 1.0);
            const double val = eval_free(g, probe, scratch);
            if (val < best - 1e-18 * (1.0 + std::abs(best))) {
                best = val;
                best_free = probe;
                improved = true;
            }
            int d = 0;
            while (d < m - 1 && ++idx[d] > half) idx[d++] = -half;
            if (d == m - 1) break;
        }
        if (!improved) w *= 0.4;
    }

    // Report through the residual form for full accuracy.
    double sum = 0.0;
    for (int i = 0; i < m - 1; ++i) {
        scratch[i] = best_free[i];
        sum += best_free[i];
    }
    scratch[m - 1] = std::max(0.0, 1.0 - sum);
    return (hp.columns * scratch - hp.target).squaredNorm();
}

}  // namespace mograd
