#include "homsense/baselines.hpp"

#include "homsense/errors.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace homsense {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_shapes(const Matrix& A, const Vector& y, const char* op) {
    if (A.rows() < 1 || A.cols() < 1) throw DimensionError(std::string(op) + ": A is empty");
    if (y.size() < 1) throw DimensionError(std::string(op) + ": y is empty");
    require_finite(A, "A");
    require_finite(y, "y");
}

void require_full_permutation(const Matrix& A, const Vector& y, const char* op) {
    if (y.size() != A.rows()) {
        throw PreconditionError(std::string(op) + " requires k = m (got k = " + std::to_string(y.size()) +
                                ", m = " + std::to_string(A.rows()) + ")");
    }
}

// Generic alternation: `select` maps A x to an assignment.
template <class Select>
SolveResult alternate(const Matrix& A, const Vector& y, Vector x, int max_iters, double tol, Select&& select) {
    SolveResult out;
    out.x_hat = x;
    out.residual = std::numeric_limits<double>::infinity();
    double previous = std::numeric_limits<double>::infinity();
    for (int it = 0; it < std::max(max_iters, 1); ++it) {
        AlignResult sel = select(Vector(A * x));
        out.history.push_back(std::sqrt(sel.cost));
        const Matrix As = select_rows(A, sel.map.map);
        x = lstsq(As, y);
        const double r = (y - As * x).norm();
        out.history.push_back(r);
        out.nodes_expanded = static_cast<std::size_t>(it + 1);
        if (r <= out.residual) {
            out.x_hat = x;
            out.assignment = std::move(sel.map);
            out.residual = r;
        }
        // Below tol no later iteration can improve by tol.
        if (r < tol || !(previous - r >= tol)) break;
        previous = r;
    }
    return out;
}

} // namespace

SolveResult altmin_sort(const Matrix& A, const Vector& y, std::optional<Vector> x0, int max_iters, double tol) {
    const auto start = Clock::now();
    check_shapes(A, y, "altmin_sort");
    require_full_permutation(A, y, "altmin_sort");
    const Vector init = x0 ? *x0 : lstsq(A, y);
    if (init.size() != A.cols()) throw DimensionError("altmin_sort: x0 length differs from A's column count");

    SelectionScorer scorer(y);
    auto sort_step = [&](const Vector& z) { return scorer.solve(z); };
    SolveResult best = alternate(A, y, init, max_iters, tol, sort_step);
    if (init.squaredNorm() > 0.0) {
        SolveResult flipped = alternate(A, y, -init, max_iters, tol, sort_step);
        if (flipped.residual < best.residual) {
            flipped.nodes_expanded += best.nodes_expanded;
            best = std::move(flipped);
        }
    }
    best.terminated_by = Termination::exhausted;
    best.wall_time = seconds_since(start);
    return best;
}

Vector soft_threshold(const Vector& v, double level) {
    return v.array().sign() * (v.array().abs() - level).max(0.0);
}

double robust_l1_objective(const Matrix& A, const Vector& y, const Vector& x, const Vector& e, double lambda) {
    const double m = static_cast<double>(y.size());
    return (y - A * x - std::sqrt(m) * e).squaredNorm() + m * lambda * e.lpNorm<1>();
}

namespace {

// The alternation converges linearly, so its stopping rule leaves the
// optimality conditions satisfied only to about sqrt(decrease_tol). With the
// support S and signs of e fixed, the conditions are linear:
//   r_S = c sign(e_S),  A^T r = 0,  c = sqrt(m) lambda / 2,
// which gives x from the rows outside S and then e_S in closed form. The
// result is kept only if it is consistent (same signs, |r_i| <= c off S).
void polish_active_set(const Matrix& A, const Vector& y, double lambda, RobustL1Result& out) {
    const Index m = y.size();
    const double sqrt_m = std::sqrt(static_cast<double>(m));
    const double c = sqrt_m * lambda / 2.0;
    std::vector<Index> active, inactive;
    for (Index i = 0; i < m; ++i) (out.e(i) != 0.0 ? active : inactive).push_back(i);
    const Matrix A_in = select_rows(A, inactive);
    if (numerical_rank(A_in) < A.cols()) return;

    Vector sign_a(static_cast<Index>(active.size()));
    Vector rhs = A_in.transpose() * select_entries(y, inactive);
    for (std::size_t t = 0; t < active.size(); ++t) {
        sign_a(static_cast<Index>(t)) = out.e(active[t]) > 0.0 ? 1.0 : -1.0;
        rhs += c * sign_a(static_cast<Index>(t)) * A.row(active[t]).transpose();
    }
    const Vector x = (A_in.transpose() * A_in).ldlt().solve(rhs);
    Vector e = Vector::Zero(m);
    for (std::size_t t = 0; t < active.size(); ++t) {
        const Index i = active[t];
        e(i) = (y(i) - A.row(i).dot(x) - c * sign_a(static_cast<Index>(t))) / sqrt_m;
        if (e(i) * sign_a(static_cast<Index>(t)) <= 0.0) return;
    }
    const Vector r = y - A * x - sqrt_m * e;
    for (Index i : inactive) {
        if (std::abs(r(i)) > c * (1.0 + 1e-12)) return;
    }
    const double obj = robust_l1_objective(A, y, x, e, lambda);
    if (!(obj <= out.objective + 1e-12 * (1.0 + out.objective))) return;
    out.x = x;
    out.e = e;
    out.objective = obj;
    out.history.push_back(obj);
}

} // namespace

RobustL1Result robust_l1(const Matrix& A, const Vector& y, double lambda, int max_iters, double decrease_tol) {
    check_shapes(A, y, "robust_l1");
    require_full_permutation(A, y, "robust_l1");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw PreconditionError("robust_l1: lambda must be positive");
    const double sqrt_m = std::sqrt(static_cast<double>(y.size()));

    // Factor once; every x-step reuses it.
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(A);
    RobustL1Result out;
    out.x = cod.solve(y);
    out.e = Vector::Zero(y.size());
    double previous = robust_l1_objective(A, y, out.x, out.e, lambda);
    out.history.push_back(previous);
    for (int it = 0; it < max_iters; ++it) {
        // e-step: per coordinate (r_i - sqrt(m) e_i)^2 + m lambda |e_i| is
        // minimized by soft(r_i / sqrt(m), lambda / 2).
        out.e = soft_threshold((y - A * out.x) / sqrt_m, lambda / 2.0);
        out.history.push_back(robust_l1_objective(A, y, out.x, out.e, lambda));
        out.x = cod.solve(y - sqrt_m * out.e);
        const double obj = robust_l1_objective(A, y, out.x, out.e, lambda);
        out.history.push_back(obj);
        out.iterations = it + 1;
        if (!(previous - obj >= decrease_tol)) {
            previous = obj;
            break;
        }
        previous = obj;
    }
    out.objective = previous;
    polish_active_set(A, y, lambda, out);
    return out;
}

SolveResult altmin_order_preserving(const Matrix& A, const Vector& y, std::optional<Vector> x0, int max_iters,
                                    double tol) {
    const auto start = Clock::now();
    check_shapes(A, y, "altmin_order_preserving");
    if (y.size() > A.rows()) {
        throw PreconditionError("altmin_order_preserving: k = " + std::to_string(y.size()) + " exceeds m = " +
                                std::to_string(A.rows()));
    }
    const Vector init = x0 ? *x0 : Vector::Zero(A.cols());
    if (init.size() != A.cols()) throw DimensionError("altmin_order_preserving: x0 length differs from A's column count");
    SolveResult out = alternate(A, y, init, max_iters, tol, [&](const Vector& z) { return dp_align_unsorted(y, z); });
    out.terminated_by = Termination::exhausted;
    out.wall_time = seconds_since(start);
    return out;
}

} // namespace homsense
