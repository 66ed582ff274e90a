#include "mograd/problem.hpp"

#include <cmath>

namespace mograd {

void MOProblem::validate() const {
    if (n < 1) throw InvalidProblemError("problem dimension must be >= 1");
    if (m < 1) throw InvalidProblemError("problem needs at least one objective");
    if (static_cast<int>(objectives.size()) != m)
        throw InvalidProblemError("objective count does not match m");
}

namespace {

void check_finite_value(double v, int i) {
    if (!std::isfinite(v))
        throw EvaluationError(i, "non-finite value");
}

void check_finite_gradient(const Vector& g, int i, int n) {
    if (g.size() != n)
        throw EvaluationError(i, "gradient has wrong length");
    if (!g.allFinite())
        throw EvaluationError(i, "non-finite gradient");
}

}  // namespace

Evaluation evaluate_all(const MOProblem& p, const Vector& x) {
    if (x.size() != p.n) throw InvalidProblemError("point has wrong dimension");
    Evaluation ev;
    ev.values.resize(p.m);
    ev.gradients.reserve(p.m);
    for (int i = 0; i < p.m; ++i) {
        const Objective& obj = p.objectives[i];
        if (obj.value_and_gradient) {
            auto [v, g] = obj.value_and_gradient(x);
            check_finite_value(v, i);
            check_finite_gradient(g, i, p.n);
            ev.values[i] = v;
            ev.gradients.push_back(std::move(g));
        } else {
            double v = obj.value(x);
            check_finite_value(v, i);
            Vector g = obj.gradient(x);
            check_finite_gradient(g, i, p.n);
            ev.values[i] = v;
            ev.gradients.push_back(std::move(g));
        }
    }
    return ev;
}

Vector evaluate_values(const MOProblem& p, const Vector& x) {
    if (x.size() != p.n) throw InvalidProblemError("point has wrong dimension");
    Vector vals(p.m);
    for (int i = 0; i < p.m; ++i) {
        double v = p.objectives[i].value(x);
        check_finite_value(v, i);
        vals[i] = v;
    }
    return vals;
}

Vector finite_difference_gradient(const MOProblem& p, int i, const Vector& x, double h) {
    if (i < 0 || i >= p.m) throw InvalidProblemError("objective index out of range");
    if (h <= 0.0) throw InvalidProblemError("finite difference step must be positive");
    const auto& f = p.objectives[i].value;
    Vector g(p.n);
    Vector xp = x;
    for (int j = 0; j < p.n; ++j) {
        const double xj = x[j];
        xp[j] = xj + h;
        double fp = f(xp);
        xp[j] = xj - h;
        double fm = f(xp);
        xp[j] = xj;
        check_finite_value(fp, i);
        check_finite_value(fm, i);
        g[j] = (fp - fm) / (2.0 * h);
    }
    return g;
}

}  // namespace mograd
