#include "mograd/diagnostics.hpp"

#include <cmath>
#include <limits>

namespace mograd {

double kkt_residual(const MOProblem& p, const Vector& x) {
    Evaluation ev = evaluate_all(p, x);
    return min_norm_element(ev.gradients).direction.norm();
}

double sigma_k(const Vector& values_k, const Vector& values_z) {
    if (values_k.size() != values_z.size())
        throw InvalidProblemError("sigma_k needs value vectors of equal length");
    return (values_k - values_z).minCoeff();
}

ReferenceSet make_reference_set(const MOProblem& p, const std::vector<Vector>& points) {
    if (points.empty()) throw InvalidProblemError("reference set must be nonempty");
    ReferenceSet refs;
    refs.points = points;
    refs.values.reserve(points.size());
    for (const auto& z : points) refs.values.push_back(evaluate_values(p, z));
    return refs;
}

double u0_estimate(const MOProblem& p, const Vector& x, const std::vector<Vector>& Z) {
    if (Z.empty()) throw InvalidProblemError("reference set must be nonempty");
    const Vector vals_x = evaluate_values(p, x);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& z : Z) best = std::max(best, sigma_k(vals_x, evaluate_values(p, z)));
    return best;
}

MeritEstimate merit_trace(const RunRecord& run, const ReferenceSet& refs) {
    const int K = static_cast<int>(run.values.size());
    const int Z = static_cast<int>(refs.points.size());
    MeritEstimate est;
    est.reference = refs;
    est.sigma_values.resize(K, Z);
    est.u0_hat.resize(K);
    for (int k = 0; k < K; ++k) {
        double best = -std::numeric_limits<double>::infinity();
        for (int z = 0; z < Z; ++z) {
            const double sv = sigma_k(run.values[k], refs.values[z]);
            est.sigma_values(k, z) = sv;
            best = std::max(best, sv);
        }
        est.u0_hat[k] = best;
    }
    return est;
}

EnergyTrace energy_trace(const RunRecord& run, EnergyKind kind, double h_or_s) {
    if (!(h_or_s > 0.0)) throw InvalidProblemError("energy denominator parameter must be positive");
    if (run.step_norms.size() != run.values.size())
        throw UnsupportedError("run is missing dense iterate difference norms");
    const double denom = (kind == EnergyKind::inertial_h2) ? 1.0 / (2.0 * h_or_s * h_or_s)
                                                           : 1.0 / (2.0 * h_or_s);
    EnergyTrace tr;
    tr.kind = kind;
    tr.energies.reserve(run.values.size());
    for (size_t k = 0; k < run.values.size(); ++k) {
        const double kin = denom * run.step_norms[k] * run.step_norms[k];
        tr.energies.push_back(run.values[k].array() + kin);
    }
    if (!tr.energies.empty()) {
        tr.deltas.reserve(tr.energies.size() - 1);
        for (size_t k = 0; k + 1 < tr.energies.size(); ++k)
            tr.deltas.push_back(tr.energies[k + 1] - tr.energies[k]);
    }
    return tr;
}

RateBoundReport check_rate_bound(const RunRecord& run, const ReferenceSet& refs, double s,
                                 double slack) {
    if (!(s > 0.0)) throw InvalidProblemError("step size must be positive");
    const Vector* x1 = run.iterate_at(1);
    const Vector* x2 = run.iterate_at(2);
    if (x1 == nullptr || x2 == nullptr)
        throw UnsupportedError("rate bound check needs the first two iterates stored");

    const int K = static_cast<int>(run.values.size());
    const int Z = static_cast<int>(refs.points.size());

    RateBoundReport rep;
    rep.margins.resize(K, Z);
    rep.sigma_worst_margin = std::numeric_limits<double>::infinity();
    rep.u0_worst_margin = std::numeric_limits<double>::infinity();

    std::vector<double> dist1(Z), dist2(Z);
    for (int z = 0; z < Z; ++z) {
        dist1[z] = (*x1 - refs.points[z]).squaredNorm();
        dist2[z] = (*x2 - refs.points[z]).squaredNorm();
        rep.r_hat = std::max(rep.r_hat, std::max(dist1[z], dist2[z]));
    }

    for (int k = 0; k < K; ++k) {
        const double kk = static_cast<double>(k + 2);  // iterate index is k+1, bound uses (k+1)+1
        double u0 = -std::numeric_limits<double>::infinity();
        for (int z = 0; z < Z; ++z) {
            const double sv = sigma_k(run.values[k], refs.values[z]);
            u0 = std::max(u0, sv);
            const double bound = 2.0 * (dist1[z] + dist2[z]) / (s * kk * kk);
            const double margin = bound - sv;
            rep.margins(k, z) = margin;
            if (margin < rep.sigma_worst_margin) {
                rep.sigma_worst_margin = margin;
                rep.sigma_worst_k = k + 1;
                rep.sigma_worst_z = z;
            }
        }
        const double u0_margin = 4.0 * rep.r_hat / s - u0 * kk * kk;
        if (u0_margin < rep.u0_worst_margin) {
            rep.u0_worst_margin = u0_margin;
            rep.u0_worst_k = k + 1;
        }
    }
    rep.sigma_pass = rep.sigma_worst_margin >= -slack;
    rep.u0_pass = rep.u0_worst_margin >= -slack;
    return rep;
}

double pareto_distance(const MOProblem& p, const Vector& x) {
    if (!p.known_pareto)
        throw UnsupportedError("problem carries no analytic Pareto set description");
    return p.known_pareto->distance(x);
}

}  // namespace mograd
