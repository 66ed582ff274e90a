#pragma once

#include <cstdint>
#include <vector>

#include "mograd/problem.hpp"

namespace mograd {

/// splitmix64: fixed 64-bit mixing generator used for all seeded sampling,
/// chosen over platform PRNGs so traces are bit-reproducible across builds.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next();

    /// Uniform double in [0, 1) from the top 53 bits.
    double next_double();

    /// Uniform double in [low, high).
    double uniform(double low, double high);

private:
    std::uint64_t state_;
};

/// Log-sum-exp suite problem: f_i(x) = ln(sum_j exp(<a_j^i, x>)) with the
/// rows a_j^i sampled uniformly from [box_low, box_high].
struct LogSumExpSpec {
    int n = 20;
    int m = 3;
    int p = 50;
    std::uint64_t seed = 0;
    double box_low = -1.0;
    double box_high = 1.0;
};

/// The b^i vectors are sampled alongside A^i and kept for inspection, but the
/// objectives do not depend on them.
struct LogSumExpData {
    std::vector<Matrix> A;  // m matrices, p x n
    std::vector<Vector> b;  // m vectors, length p
};

MOProblem make_logsumexp(const LogSumExpSpec& spec, LogSumExpData* data_out = nullptr);

/// Two-objective nonconvex problem with Pareto set {x : x1 + x2 = 0}.
struct WittingSpec {
    double lambda = 0.6;
};

MOProblem make_witting(const WittingSpec& spec);

/// Convex oracle problem f_i(x) = 0.5 ||x - a_i||^2 with Pareto set [a1, a2]
/// and common Lipschitz constant 1.
MOProblem make_quadratic_biobjective(const Vector& a1, const Vector& a2);

/// m = 1 wrapper for single-objective reduction tests.
MOProblem wrap_single(int n, Objective objective, std::optional<double> lipschitz = std::nullopt);

}  // namespace mograd
