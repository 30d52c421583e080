#include "homsense/solver_bnb.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace homsense {

std::string_view to_string(Termination t) {
    switch (t) {
    case Termination::exhausted: return "exhausted";
    case Termination::depth: return "depth";
    case Termination::budget: return "budget";
    case Termination::gap: return "gap";
    }
    return "unknown";
}

double assignment_residual(const Matrix& A, const Vector& y, const Vector& x, const AssignmentMap& map) {
    if (map.domain_size() != y.size()) throw DimensionError("assignment_residual: map length differs from y");
    return (y - select_rows(A, map.map) * x).norm();
}

void Box::validate() const {
    if (center.size() < 1) throw PreconditionError("box: empty box");
    if (center.size() != half_widths.size()) throw DimensionError("box: center and half-width lengths differ");
    require_finite(center, "box center");
    require_finite(half_widths, "box half-widths");
    if (!(half_widths.array() > 0.0).all()) throw PreconditionError("box: half-widths must be positive");
}

void BnbConfig::validate() const {
    if (max_depth < 0) throw PreconditionError("bnb: max_depth must be >= 0");
    if (altmin_max_iters < 0) throw PreconditionError("bnb: altmin_max_iters must be >= 0");
    if (!(altmin_tol >= 0.0) || !(gap_tol >= 0.0)) throw PreconditionError("bnb: tolerances must be >= 0");
    if (time_budget && !(*time_budget >= 0.0)) throw PreconditionError("bnb: time budget must be >= 0");
}

double lower_bound(double center_residual, double sigma1, double box_half_diagonal) {
    return std::max(center_residual - sigma1 * box_half_diagonal, 0.0);
}

std::pair<Box, Box> split_longest_edge(const Box& box) {
    Index axis = 0;
    box.half_widths.maxCoeff(&axis);
    Box left = box;
    Box right = box;
    const double h = box.half_widths(axis) / 2.0;
    left.half_widths(axis) = h;
    right.half_widths(axis) = h;
    left.center(axis) -= h;
    right.center(axis) += h;
    return {std::move(left), std::move(right)};
}

namespace {

void check_problem(const Matrix& A, const Vector& y) {
    if (A.rows() < 1 || A.cols() < 1) throw DimensionError("A is empty");
    if (y.size() < 1) throw DimensionError("y is empty");
    if (y.size() > A.rows()) {
        throw PreconditionError("k = " + std::to_string(y.size()) + " exceeds m = " + std::to_string(A.rows()));
    }
    require_finite(A, "A");
    require_finite(y, "y");
}

} // namespace

AltminResult altmin_upper(const Matrix& A, const Vector& y, const Vector& x0, int max_iters, double tol) {
    check_problem(A, y);
    if (x0.size() != A.cols()) throw DimensionError("altmin: x0 length differs from A's column count");
    SelectionScorer scorer(y);
    AltminResult out;
    out.x = x0;
    double previous = std::numeric_limits<double>::infinity();
    for (int it = 0; it < std::max(max_iters, 1); ++it) {
        AlignResult sel = scorer.solve(A * out.x);
        out.history.push_back(std::sqrt(sel.cost));
        const Matrix As = select_rows(A, sel.map.map);
        Vector x = lstsq(As, y);
        const double r = (y - As * x).norm();
        out.history.push_back(r);
        out.iterations = it + 1;
        if (r <= previous) {
            out.x = std::move(x);
            out.map = std::move(sel.map);
            out.residual = r;
        }
        // Below tol no later iteration can improve by tol.
        if (r < tol || !(previous - r >= tol)) break;
        previous = r;
    }
    return out;
}

Box default_box(const Matrix& A, const Vector& y) {
    check_problem(A, y);
    const double smin = sigma_min_positive(A);
    if (!(smin > 0.0)) throw PreconditionError("default box: A has no positive singular value");
    Box box;
    box.center = Vector::Zero(A.cols());
    const double h = std::max(3.0 * y.norm() / smin, 1e-12);
    box.half_widths = Vector::Constant(A.cols(), h);
    return box;
}

namespace {

class UnlabeledProblem {
public:
    UnlabeledProblem(const Matrix& A, const Vector& y, const BnbConfig& cfg)
        : A_(A), y_(y), cfg_(cfg), sigma1_(sigma_max(A)) {}

    double center_residual(const Vector& x) const {
        SelectionScorer scorer(y_);
        return std::sqrt(scorer.cost(A_ * x));
    }

    AltminResult refine(const Vector& x) const {
        return altmin_upper(A_, y_, x, cfg_.altmin_max_iters, cfg_.altmin_tol);
    }

    double lipschitz() const { return sigma1_; }

private:
    const Matrix& A_;
    const Vector& y_;
    const BnbConfig& cfg_;
    double sigma1_;
};

} // namespace

SolveResult solve_bnb(const Matrix& A, const Vector& y, const BnbConfig& cfg) {
    check_problem(A, y);
    const Box root = cfg.initial_box ? *cfg.initial_box : default_box(A, y);
    if (root.dim() != A.cols()) throw DimensionError("bnb: box dimension differs from A's column count");
    UnlabeledProblem problem(A, y, cfg);
    auto outcome = detail::best_first_search(problem, root, cfg);

    SolveResult result;
    result.x_hat = std::move(outcome.best.x);
    result.assignment = std::move(outcome.best.map);
    result.residual = outcome.best.residual;
    result.nodes_expanded = outcome.nodes_expanded;
    result.wall_time = outcome.wall_time;
    result.terminated_by = outcome.terminated_by;
    result.history = std::move(outcome.history);
    return result;
}

} // namespace homsense
