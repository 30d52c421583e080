#pragma once

#include "homsense/solve_result.hpp"

#include <optional>

namespace homsense {

/// Alternating least squares + sorting for shuffled regression (k = m).
/// Each S-step pairs sorted y with sorted A x; x0 defaults to lstsq(A, y).
/// The search is run from x0 and from -x0 (both sort orders) and the
/// lower residual is kept.
SolveResult altmin_sort(const Matrix& A, const Vector& y, std::optional<Vector> x0 = std::nullopt,
                        int max_iters = 100, double tol = 1e-9);

struct RobustL1Result {
    Vector x;
    /// Sparse correction, scaled so that the model is y = A x + sqrt(m) e.
    Vector e;
    double objective = 0.0;
    int iterations = 0;
    /// Objective after every half-step.
    std::vector<double> history;
};

/// min_{x,e} ||y - A x - sqrt(m) e||^2 + m lambda ||e||_1 (k = m) by exact
/// block-coordinate descent: e is a closed-form soft threshold, x a least
/// squares fit. Stops when an iteration lowers the objective by < decrease_tol.
RobustL1Result robust_l1(const Matrix& A, const Vector& y, double lambda, int max_iters = 100000,
                         double decrease_tol = 1e-10);

double robust_l1_objective(const Matrix& A, const Vector& y, const Vector& x, const Vector& e, double lambda);

/// Coordinate-wise soft threshold sign(v) max(|v| - level, 0).
Vector soft_threshold(const Vector& v, double level);

/// Alternation restricted to order-preserving selections: the S-step runs
/// the monotone DP on the raw (unsorted) y and A x. x0 defaults to 0.
SolveResult altmin_order_preserving(const Matrix& A, const Vector& y, std::optional<Vector> x0 = std::nullopt,
                                    int max_iters = 100, double tol = 1e-9);

} // namespace homsense
