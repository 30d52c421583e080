#pragma once

#include "homsense/assign.hpp"
#include "homsense/numerics.hpp"

#include <cstdint>

namespace homsense {

struct ProblemInstance {
    Index n = 0, m = 0, k = 0;
    Matrix A;
    Vector y;
    Vector x_star;
    AssignmentMap s_star;
    /// Noise actually added: y = (A x*)[s*] + noise.
    Vector noise;
    double sigma = 0.0;
    double shuffle_ratio = 0.0;
    std::uint64_t seed = 0;
};

/// Gaussian A and x*; k of m rows kept in order, then ceil(ratio k) of the
/// kept positions moved by a uniformly random derangement; Gaussian noise
/// of standard deviation sigma.
ProblemInstance gen_instance(Index n, Index m, Index k, double shuffle_ratio, double sigma, std::uint64_t seed);

/// Number of observed positions that gen_instance deranges.
Index shuffled_count(Index k, double shuffle_ratio);

/// ||x_hat - x*|| / ||x*||.
double relative_error(const Vector& x_hat, const Vector& x_star);

/// FNV-1a over the shape and entries of (A, y).
std::uint64_t instance_hash(const ProblemInstance& inst);

} // namespace homsense
