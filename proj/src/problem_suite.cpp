#include "mograd/problem_suite.hpp"

#include <cmath>
#include <memory>

namespace mograd {

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double SplitMix64::next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::uniform(double low, double high) {
    return low + next_double() * (high - low);
}

namespace {

// Max-shifted log-sum-exp of A x, with the softmax reused between value and
// gradient. Safe for the widest suite start boxes (entries up to |x|_inf = 15).
std::pair<double, Vector> logsumexp_eval(const Matrix& A, const Vector& x) {
    Vector t = A * x;
    const double shift = t.maxCoeff();
    Vector e = (t.array() - shift).exp();
    const double total = e.sum();
    const double value = shift + std::log(total);
    Vector grad = A.transpose() * (e / total);
    return {value, std::move(grad)};
}

}  // namespace

MOProblem make_logsumexp(const LogSumExpSpec& spec, LogSumExpData* data_out) {
    if (spec.n < 1 || spec.m < 1 || spec.p < 1)
        throw InvalidProblemError("logsumexp spec needs positive n, m, p");
    if (!(spec.box_low < spec.box_high))
        throw InvalidProblemError("logsumexp spec needs box_low < box_high");

    auto data = std::make_shared<LogSumExpData>();
    SplitMix64 rng(spec.seed);
    data->A.reserve(spec.m);
    data->b.reserve(spec.m);
    double max_frob2 = 0.0;
    for (int i = 0; i < spec.m; ++i) {
        Matrix A(spec.p, spec.n);
        for (int r = 0; r < spec.p; ++r)
            for (int c = 0; c < spec.n; ++c) A(r, c) = rng.uniform(spec.box_low, spec.box_high);
        Vector b(spec.p);
        for (int r = 0; r < spec.p; ++r) b[r] = rng.uniform(spec.box_low, spec.box_high);
        max_frob2 = std::max(max_frob2, A.squaredNorm());
        data->A.push_back(std::move(A));
        data->b.push_back(std::move(b));
    }

    MOProblem p;
    p.n = spec.n;
    p.m = spec.m;
    // Crude curvature bound; solvers take the step size explicitly, so this is advisory.
    p.lipschitz_hint = max_frob2 / 4.0;
    for (int i = 0; i < spec.m; ++i) {
        Objective obj;
        obj.value = [data, i](const Vector& x) { return logsumexp_eval(data->A[i], x).first; };
        obj.gradient = [data, i](const Vector& x) { return logsumexp_eval(data->A[i], x).second; };
        obj.value_and_gradient = [data, i](const Vector& x) {
            return logsumexp_eval(data->A[i], x);
        };
        p.objectives.push_back(std::move(obj));
    }
    if (data_out) *data_out = *data;
    return p;
}

namespace {

struct WittingEval {
    double value;
    Vector grad;
};

// f_sign(x) = 0.5 (sqrt(1+u^2) + sqrt(1+v^2) + sign*v) + lambda exp(-v^2),
// with u = x1 + x2, v = x1 - x2; sign = +1 for f1 and -1 for f2.
WittingEval witting_eval(double lambda, double sign, const Vector& x) {
    const double u = x[0] + x[1];
    const double v = x[0] - x[1];
    const double su = std::sqrt(1.0 + u * u);
    const double sv = std::sqrt(1.0 + v * v);
    const double ev = std::exp(-v * v);
    WittingEval out;
    out.value = 0.5 * (su + sv + sign * v) + lambda * ev;
    const double du = 0.5 * u / su;
    const double dv = 0.5 * (v / sv + sign) - 2.0 * lambda * v * ev;
    out.grad.resize(2);
    out.grad[0] = du + dv;
    out.grad[1] = du - dv;
    return out;
}

}  // namespace

MOProblem make_witting(const WittingSpec& spec) {
    if (!(spec.lambda >= 0.0)) throw InvalidProblemError("witting spec needs lambda >= 0");
    const double lambda = spec.lambda;
    MOProblem p;
    p.n = 2;
    p.m = 2;
    for (double sign : {1.0, -1.0}) {
        Objective obj;
        obj.value = [lambda, sign](const Vector& x) { return witting_eval(lambda, sign, x).value; };
        obj.gradient = [lambda, sign](const Vector& x) {
            return witting_eval(lambda, sign, x).grad;
        };
        obj.value_and_gradient = [lambda, sign](const Vector& x) {
            WittingEval ev = witting_eval(lambda, sign, x);
            return std::make_pair(ev.value, std::move(ev.grad));
        };
        p.objectives.push_back(std::move(obj));
    }
    ParetoSetInfo pareto;
    pareto.description = "{x in R^2 : x1 + x2 = 0}";
    pareto.contains = [](const Vector& x) { return std::abs(x[0] + x[1]) <= 1e-9; };
    pareto.distance = [](const Vector& x) { return std::abs(x[0] + x[1]) / std::sqrt(2.0); };
    p.known_pareto = std::move(pareto);
    return p;
}

MOProblem make_quadratic_biobjective(const Vector& a1, const Vector& a2) {
    if (a1.size() != a2.size()) throw InvalidProblemError("anchor points need equal dimensions");
    if (a1 == a2) throw InvalidProblemError("anchor points must differ");
    const int n = static_cast<int>(a1.size());
    MOProblem p;
    p.n = n;
    p.m = 2;
    p.lipschitz_hint = 1.0;
    for (const Vector& a : {a1, a2}) {
        Objective obj;
        obj.value = [a](const Vector& x) { return 0.5 * (x - a).squaredNorm(); };
        obj.gradient = [a](const Vector& x) { return Vector(x - a); };
        obj.value_and_gradient = [a](const Vector& x) {
            Vector d = x - a;
            return std::make_pair(0.5 * d.squaredNorm(), std::move(d));
        };
        p.objectives.push_back(std::move(obj));
    }
    ParetoSetInfo pareto;
    pareto.description = "segment [a1, a2]";
    const Vector seg = a2 - a1;
    const double seg2 = seg.squaredNorm();
    auto closest = [a1, seg, seg2](const Vector& x) {
        double t = (x - a1).dot(seg) / seg2;
        t = std::clamp(t, 0.0, 1.0);
        return Vector(a1 + t * seg);
    };
    pareto.distance = [closest](const Vector& x) { return (x - closest(x)).norm(); };
    pareto.contains = [closest](const Vector& x) { return (x - closest(x)).norm() <= 1e-9; };
    p.known_pareto = std::move(pareto);
    return p;
}

MOProblem wrap_single(int n, Objective objective, std::optional<double> lipschitz) {
    MOProblem p;
    p.n = n;
    p.m = 1;
    p.objectives.push_back(std::move(objective));
    p.lipschitz_hint = lipschitz;
    p.validate();
    return p;
}

}  // namespace mograd
