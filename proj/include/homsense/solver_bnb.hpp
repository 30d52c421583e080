#pragma once

#include "homsense/best_first.hpp"
#include "homsense/solve_result.hpp"

namespace homsense {

struct AltminResult {
    Vector x;
    AssignmentMap map;
    double residual = 0.0;
    int iterations = 0;
    /// Residual after every half-step (S-step, x-step, S-step, ...).
    std::vector<double> history;
};

/// Alternating minimization between the selection (exact, via
/// recover_selection) and x (least squares), started at x0. Stops when an
/// iteration decreases the residual by less than tol, or after max_iters.
AltminResult altmin_upper(const Matrix& A, const Vector& y, const Vector& x0, int max_iters, double tol);

/// Center 0, half-width 3 ||y|| / sigma_min^+(A) in every coordinate.
Box default_box(const Matrix& A, const Vector& y);

/// Globally minimizes ||y - S A x||_2 over x in the box and selections S
/// by best-first branch-and-bound over x only.
SolveResult solve_bnb(const Matrix& A, const Vector& y, const BnbConfig& cfg = {});

} // namespace homsense
