#pragma once

#include "homsense/solve_result.hpp"

#include <cstdint>

namespace homsense {

struct EnumConfig {
    std::uint64_t seed = 0;
    /// Tuples whose n x n row matrix has a larger condition number are skipped.
    double cond_max = 1e8;
    /// Run altmin_upper from the winning candidate before returning.
    bool refine = true;
    int refine_max_iters = 50;
    double refine_tol = 1e-9;
    /// Independent random sub-vectors; best of R by final cost.
    int restarts = 1;
    unsigned workers = 1;
};

/// Scores every ordered n-tuple of distinct rows of A: x_i solves the
/// n x n system against a random length-n sub-vector of y, and candidates
/// are ranked by the optimal assignment cost min_S ||y - S A x_i||^2.
SolveResult solve_enum(const Matrix& A, const Vector& y, const EnumConfig& cfg = {});

} // namespace homsense
