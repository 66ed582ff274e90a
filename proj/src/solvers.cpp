#include "mograd/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mograd {

std::string method_name(Method m) {
    switch (m) {
        case Method::SD: return "SD";
        case Method::Inertial: return "Inertial";
        case Method::AccG: return "AccG";
        case Method::AccGNoQ: return "AccGNoQ";
        case Method::NesterovRef: return "NesterovRef";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    if (name == "SD") return Method::SD;
    if (name == "Inertial") return Method::Inertial;
    if (name == "AccG") return Method::AccG;
    if (name == "AccGNoQ") return Method::AccGNoQ;
    if (name == "NesterovRef") return Method::NesterovRef;
    throw InvalidProblemError("unknown method: " + name);
}

std::string termination_name(TerminationReason r) {
    switch (r) {
        case TerminationReason::max_iters: return "max_iters";
        case TerminationReason::tol_met: return "tol_met";
        case TerminationReason::eval_failure: return "eval_failure";
    }
    return "?";
}

void SolverConfig::validate() const {
    if (!(step_size > 0.0)) throw InvalidProblemError("step_size must be positive");
    if (max_iters < 1) throw InvalidProblemError("max_iters must be >= 1");
    if (!(tol >= 0.0)) throw InvalidProblemError("tol must be nonnegative");
    if (method == Method::Inertial) {
        if (!(alpha > 0.0)) throw InvalidProblemError("inertial method needs alpha > 0");
        if (!(h > 0.0)) throw InvalidProblemError("inertial method needs h > 0");
    }
    if (method == Method::NesterovRef && !(alpha >= 3.0))
        throw InvalidProblemError("NesterovRef needs alpha >= 3");
    if (backtracking) {
        if (!(backtracking->s0 > 0.0)) throw InvalidProblemError("backtracking s0 must be positive");
        if (!(backtracking->sigma > 0.0 && backtracking->sigma < 1.0))
            throw InvalidProblemError("backtracking sigma must lie in (0,1)");
    }
}

const Vector* RunRecord::iterate_at(int k) const {
    auto it = std::lower_bound(iterate_ks.begin(), iterate_ks.end(), k);
    if (it == iterate_ks.end() || *it != k) return nullptr;
    return &iterates[static_cast<size_t>(it - iterate_ks.begin())];
}

namespace {

constexpr int kBacktrackCap = 60;

// Momentum coefficient (k-1)/(k+alpha-1). AccG fixes alpha = 3, giving (k-1)/(k+2);
// the shared expression keeps the m = 1 reduction bitwise identical to the
// single-objective reference scheme.
inline double momentum_coefficient(int k, double alpha) {
    return static_cast<double>(k - 1) / (static_cast<double>(k) + alpha - 1.0);
}

double backtrack_impl(const MOProblem& p, const Vector& w, const Vector& vals_w,
                      const std::vector<Vector>& grads_w, const Vector& d, double s_prev,
                      double sigma) {
    if (!(sigma > 0.0 && sigma < 1.0)) throw InvalidProblemError("sigma must lie in (0,1)");
    if (!(s_prev > 0.0)) throw InvalidProblemError("previous step size must be positive");
    if (!d.allFinite()) throw EvaluationError("non-finite backtracking direction");
    const double dn2 = d.squaredNorm();
    std::vector<double> slope(p.m);
    for (int i = 0; i < p.m; ++i) slope[i] = grads_w[i].dot(d);

    double t = s_prev;
    for (int l = 0; l <= kBacktrackCap; ++l) {
        Vector cand = w - t * d;
        bool ok = true;
        for (int i = 0; i < p.m; ++i) {
            const double fv = p.objectives[i].value(cand);
            // Rounding guard: once the trial decrease falls below a few ulps of
            // f_i(w) the test is pure noise and must accept. A non-finite trial
            // value counts as a violated condition.
            const double guard = 1e-14 * (1.0 + std::abs(vals_w[i]));
            if (!std::isfinite(fv) || fv > vals_w[i] - t * slope[i] + 0.5 * t * dn2 + guard) {
                ok = false;
                break;
            }
        }
        if (ok) return t;
        t *= sigma;
    }
    throw StepSizeUnderflowError("backtracking exceeded " + std::to_string(kBacktrackCap) +
                                 " reductions");
}

inline double base_step(const IterateState& st, const SolverConfig& cfg) {
    return cfg.backtracking ? st.step_size : cfg.step_size;
}

Vector weighted_direction(const Vector& theta, const std::vector<Vector>& grads) {
    Vector dir = theta[0] * grads[0];
    for (int i = 1; i < static_cast<int>(grads.size()); ++i) dir.noalias() += theta[i] * grads[i];
    return dir;
}

}  // namespace

double backtracking_search(const MOProblem& p, const Vector& w, const Vector& d, double s_prev,
                           double sigma) {
    Evaluation ev = evaluate_all(p, w);
    return backtrack_impl(p, w, ev.values, ev.gradients, d, s_prev, sigma);
}

IterateState sd_step(const MOProblem& p, const IterateState& st, const SolverConfig& cfg) {
    Evaluation ev = evaluate_all(p, st.x_curr);
    MinNormResult mn = min_norm_element(ev.gradients);
    double s = base_step(st, cfg);
    if (cfg.backtracking)
        s = backtrack_impl(p, st.x_curr, ev.values, ev.gradients, mn.direction, s,
                           cfg.backtracking->sigma);
    IterateState next;
    next.x_prev = st.x_curr;
    next.x_curr = st.x_curr - s * mn.direction;
    next.k = st.k + 1;
    next.step_size = s;
    next.last_theta = mn.weights.theta;
    return next;
}

IterateState inertial_step(const MOProblem& p, const IterateState& st, const SolverConfig& cfg) {
    if (!(cfg.alpha > 0.0) || !(cfg.h > 0.0))
        throw InvalidProblemError("inertial method needs alpha > 0 and h > 0");
    Evaluation ev = evaluate_all(p, st.x_curr);
    const Vector mom = st.x_curr - st.x_prev;
    const double h2 = cfg.h * cfg.h;

    HullProblem hp;
    hp.columns.resize(p.n, p.m);
    for (int i = 0; i < p.m; ++i) hp.columns.col(i) = h2 * ev.gradients[i];
    hp.target = mom;
    HullSolution sol = solve_hull_least_squares(hp);

    const Vector gdir = weighted_direction(sol.weights.theta, ev.gradients);
    const double damp = 1.0 / (1.0 + cfg.alpha * cfg.h);

    IterateState next;
    next.x_prev = st.x_curr;
    next.k = st.k + 1;
    next.last_theta = sol.weights.theta;
    if (cfg.backtracking) {
        // Full displacement as the backtracked direction, w^k = x^k.
        Vector d = (h2 * damp) * gdir - damp * mom;
        double s = backtrack_impl(p, st.x_curr, ev.values, ev.gradients, d, base_step(st, cfg),
                                  cfg.backtracking->sigma);
        next.x_curr = st.x_curr - s * d;
        next.step_size = s;
    } else {
        next.x_curr = st.x_curr + damp * mom - (h2 * damp) * gdir;
        next.step_size = cfg.step_size;
    }
    return next;
}

IterateState accg_step(const MOProblem& p, const IterateState& st, const SolverConfig& cfg) {
    const double coef = momentum_coefficient(st.k, 3.0);
    const Vector mom = st.x_curr - st.x_prev;
    const Vector y = st.x_curr + coef * mom;
    Evaluation ev = evaluate_all(p, y);

    double s = base_step(st, cfg);
    HullProblem hp;
    hp.columns.resize(p.n, p.m);
    for (int i = 0; i < p.m; ++i) hp.columns.col(i) = s * ev.gradients[i];
    hp.target = coef * mom;
    HullSolution sol = solve_hull_least_squares(hp);

    const Vector dir = weighted_direction(sol.weights.theta, ev.gradients);
    if (cfg.backtracking)
        s = backtrack_impl(p, y, ev.values, ev.gradients, dir, s, cfg.backtracking->sigma);

    IterateState next;
    next.x_prev = st.x_curr;
    next.x_curr = y - s * dir;
    next.k = st.k + 1;
    next.step_size = s;
    next.last_theta = sol.weights.theta;
    return next;
}

IterateState accg_noq_step(const MOProblem& p, const IterateState& st, const SolverConfig& cfg) {
    const double coef = momentum_coefficient(st.k, 3.0);
    const Vector mom = st.x_curr - st.x_prev;
    const Vector y = st.x_curr + coef * mom;
    Evaluation ev = evaluate_all(p, y);

    LinearMaxResult lm = linear_maximizer(ev.gradients, mom);
    const Vector& dir = ev.gradients[lm.index];
    double s = base_step(st, cfg);
    if (cfg.backtracking)
        s = backtrack_impl(p, y, ev.values, ev.gradients, dir, s, cfg.backtracking->sigma);

    IterateState next;
    next.x_prev = st.x_curr;
    next.x_curr = y - s * dir;
    next.k = st.k + 1;
    next.step_size = s;
    next.last_index = lm.index;
    return next;
}

namespace {

IterateState nesterov_step(const MOProblem& p, const IterateState& st, const SolverConfig& cfg) {
    const double coef = momentum_coefficient(st.k, cfg.alpha);
    const Vector mom = st.x_curr - st.x_prev;
    const Vector y = st.x_curr + coef * mom;
    Evaluation ev = evaluate_all(p, y);

    const Vector& dir = ev.gradients[0];
    double s = base_step(st, cfg);
    if (cfg.backtracking)
        s = backtrack_impl(p, y, ev.values, ev.gradients, dir, s, cfg.backtracking->sigma);

    IterateState next;
    next.x_prev = st.x_curr;
    next.x_curr = y - s * dir;
    next.k = st.k + 1;
    next.step_size = s;
    return next;
}

IterateState dispatch_step(const MOProblem& p, const IterateState& st, const SolverConfig& cfg) {
    switch (cfg.method) {
        case Method::SD: return sd_step(p, st, cfg);
        case Method::Inertial: return inertial_step(p, st, cfg);
        case Method::AccG: return accg_step(p, st, cfg);
        case Method::AccGNoQ: return accg_noq_step(p, st, cfg);
        case Method::NesterovRef: return nesterov_step(p, st, cfg);
    }
    throw InvalidProblemError("unknown method");
}

double kkt_residual_of(const MOProblem& p, const Vector& x) {
    Evaluation ev = evaluate_all(p, x);
    return min_norm_element(ev.gradients).direction.norm();
}

class Recorder {
public:
    Recorder(RunRecord& rec, const SolverConfig& cfg, int n)
        : rec_(rec), cfg_(cfg), store_all_(n <= 64) {}

    void record(const MOProblem& p, int k, const Vector& x, const Vector& vals, double step_norm,
                double step_size) {
        if (store_all_ || k <= 2 || k % 10 == 0) {
            rec_.iterates.push_back(x);
            rec_.iterate_ks.push_back(k);
        }
        rec_.values.push_back(vals);
        rec_.step_norms.push_back(step_norm);
        rec_.step_sizes.push_back(step_size);
        if (cfg_.track_kkt) {
            // Values can be finite while gradients overflow; keep the record
            // consistent and let the next step surface the failure.
            double res = std::numeric_limits<double>::quiet_NaN();
            try {
                res = kkt_residual_of(p, x);
            } catch (const EvaluationError&) {
            }
            rec_.kkt_residuals.push_back(res);
        }
        last_k_ = k;
        last_x_ = x;
    }

    void finish() {
        // Keep the final iterate even on thinned runs.
        if (last_k_ >= 1 && (rec_.iterate_ks.empty() || rec_.iterate_ks.back() != last_k_)) {
            rec_.iterates.push_back(last_x_);
            rec_.iterate_ks.push_back(last_k_);
        }
        rec_.k_final = last_k_;
    }

private:
    RunRecord& rec_;
    const SolverConfig& cfg_;
    bool store_all_;
    int last_k_ = 0;
    Vector last_x_;
};

}  // namespace

RunRecord run(const MOProblem& p, const Vector& x0, const SolverConfig& cfg) {
    p.validate();
    cfg.validate();
    if (cfg.method == Method::NesterovRef && p.m != 1)
        throw InvalidProblemError("NesterovRef requires a single-objective problem");
    if (x0.size() != p.n) throw InvalidProblemError("start point has wrong dimension");
    if (!x0.allFinite()) throw InvalidProblemError("start point must be finite");

    RunRecord rec;
    Recorder recorder(rec, cfg, p.n);

    IterateState st;
    st.x_prev = x0;
    st.x_curr = x0;
    st.k = 1;
    st.step_size = cfg.backtracking ? cfg.backtracking->s0 : cfg.step_size;

    Vector vals_curr;
    try {
        vals_curr = evaluate_values(p, x0);
    } catch (const EvaluationError&) {
        rec.reason = TerminationReason::eval_failure;
        rec.k_final = 0;
        return rec;
    }
    recorder.record(p, 1, st.x_curr, vals_curr, 0.0, st.step_size);

    rec.reason = TerminationReason::max_iters;
    while (st.k < cfg.max_iters) {
        IterateState next;
        Vector vals_next;
        try {
            next = dispatch_step(p, st, cfg);
            vals_next = evaluate_values(p, next.x_curr);
        } catch (const EvaluationError&) {
            rec.reason = TerminationReason::eval_failure;
            break;
        } catch (const StepSizeUnderflowError&) {
            rec.reason = TerminationReason::eval_failure;
            break;
        }
        st = std::move(next);
        recorder.record(p, st.k, st.x_curr, vals_next, (st.x_curr - st.x_prev).norm(),
                        st.step_size);
        const double change = (vals_next - vals_curr).lpNorm<Eigen::Infinity>();
        vals_curr = std::move(vals_next);
        if (change < cfg.tol) {
            rec.reason = TerminationReason::tol_met;
            break;
        }
    }
    recorder.finish();
    return rec;
}

RunRecord nesterov_reference(const MOProblem& single_objective, const Vector& x0, double s,
                             double alpha, int k_max) {
    if (single_objective.m != 1)
        throw InvalidProblemError("nesterov_reference needs a single-objective problem");
    SolverConfig cfg;
    cfg.method = Method::NesterovRef;
    cfg.step_size = s;
    cfg.alpha = alpha;
    cfg.max_iters = k_max;
    cfg.tol = 0.0;
    return run(single_objective, x0, cfg);
}

}  // namespace mograd
