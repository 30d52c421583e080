#include "homsense/solver_enum.hpp"

#include "homsense/errors.hpp"
#include "homsense/solver_bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <iterator>
#include <numeric>
#include <sstream>

namespace homsense {

namespace {

struct Best {
    double cost = std::numeric_limits<double>::infinity();
    /// Cost snapped to a grid of width `quantum`; candidates in the same cell
    /// tie, so round-off cannot override the lexicographic rule. Comparing
    /// (cell, rank) is a total order, hence merge order does not matter.
    double cell = std::numeric_limits<double>::infinity();
    /// Rank of the tuple in lexicographic order; breaks cost ties.
    std::uint64_t rank = std::numeric_limits<std::uint64_t>::max();
    Vector x;
    std::size_t evaluated = 0;
    double quantum = 0.0;

    void offer(double c, double c_cell, std::uint64_t r, const Vector& candidate) {
        if (c_cell < cell || (c_cell == cell && r < rank)) {
            cost = c;
            cell = c_cell;
            rank = r;
            x = candidate;
        }
    }
    void offer(double c, std::uint64_t r, const Vector& candidate) { offer(c, std::floor(c / quantum), r, candidate); }
};

double tie_quantum(const Vector& y) { return 1e-12 * (1.0 + y.squaredNorm()); }

// Visits, in lexicographic order, every ordered n-tuple of distinct rows
// whose first entry lies in [first_begin, first_end).
Best scan_tuples(const Matrix& A, const Vector& y, const Vector& ybar, Index first_begin, Index first_end,
                 double cond_max) {
    const Index m = A.rows();
    const Index n = A.cols();
    SelectionScorer scorer(y);
    Best best;
    best.quantum = tie_quantum(y);
    std::vector<Index> tuple(static_cast<std::size_t>(n));
    std::vector<bool> used(static_cast<std::size_t>(m), false);
    Matrix Ai(n, n);
    Vector z(m);

    // Tuples with first index f start at rank f * (m-1)!/(m-n)!.
    std::uint64_t per_first = 1;
    for (Index i = 1; i < n; ++i) per_first *= static_cast<std::uint64_t>(m - i);
    std::uint64_t rank = static_cast<std::uint64_t>(first_begin) * per_first;

    auto visit = [&](auto&& self, Index depth) -> void {
        if (depth == n) {
            for (Index r = 0; r < n; ++r) Ai.row(r) = A.row(tuple[static_cast<std::size_t>(r)]);
            Eigen::JacobiSVD<Matrix> svd(Ai, Eigen::ComputeFullU | Eigen::ComputeFullV);
            const Vector& s = svd.singularValues();
            const double smin = s(n - 1);
            const double cond = smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
            if (cond <= cond_max) {
                const Vector x = svd.solve(ybar);
                z.noalias() = A * x;
                best.offer(scorer.cost(z), rank, x);
                ++best.evaluated;
            }
            ++rank;
            return;
        }
        const Index lo = depth == 0 ? first_begin : 0;
        const Index hi = depth == 0 ? first_end : m;
        for (Index r = lo; r < hi; ++r) {
            if (used[static_cast<std::size_t>(r)]) continue;
            used[static_cast<std::size_t>(r)] = true;
            tuple[static_cast<std::size_t>(depth)] = r;
            self(self, depth + 1);
            used[static_cast<std::size_t>(r)] = false;
        }
    };
    visit(visit, 0);
    return best;
}

Best scan_all(const Matrix& A, const Vector& y, const Vector& ybar, double cond_max, unsigned workers) {
    const Index m = A.rows();
    workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(m));
    if (workers == 1) return scan_tuples(A, y, ybar, 0, m, cond_max);

    std::vector<std::future<Best>> parts;
    for (unsigned w = 0; w < workers; ++w) {
        const Index begin = m * static_cast<Index>(w) / static_cast<Index>(workers);
        const Index end = m * static_cast<Index>(w + 1) / static_cast<Index>(workers);
        parts.push_back(std::async(std::launch::async, [&, begin, end] { return scan_tuples(A, y, ybar, begin, end, cond_max); }));
    }
    Best best;
    best.quantum = tie_quantum(y);
    for (auto& part : parts) {
        Best b = part.get();
        best.evaluated += b.evaluated;
        if (b.evaluated > 0) best.offer(b.cost, b.cell, b.rank, b.x);
    }
    return best;
}

} // namespace

SolveResult solve_enum(const Matrix& A, const Vector& y, const EnumConfig& cfg) {
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    const Index m = A.rows();
    const Index n = A.cols();
    const Index k = y.size();
    if (m < 1 || n < 1) throw DimensionError("solve_enum: A is empty");
    if (k < n) {
        throw PreconditionError("solve_enum: k = " + std::to_string(k) + " is smaller than n = " + std::to_string(n));
    }
    if (k > m) throw PreconditionError("solve_enum: k = " + std::to_string(k) + " exceeds m = " + std::to_string(m));
    if (cfg.restarts < 1) throw PreconditionError("solve_enum: restarts must be >= 1");
    require_finite(A, "A");
    require_finite(y, "y");

    std::mt19937_64 rng(cfg.seed);
    std::vector<Index> positions(static_cast<std::size_t>(k));
    std::iota(positions.begin(), positions.end(), Index{0});

    SolveResult result;
    double best_cost = std::numeric_limits<double>::infinity();
    std::size_t evaluated = 0;
    for (int restart = 0; restart < cfg.restarts; ++restart) {
        std::vector<Index> subset;
        std::sample(positions.begin(), positions.end(), std::back_inserter(subset), n, rng);
        const Vector ybar = select_entries(y, subset);

        Best best = scan_all(A, y, ybar, cfg.cond_max, cfg.workers);
        evaluated += best.evaluated;
        if (best.evaluated == 0) continue;

        auto winner = recover_selection(y, A * best.x);
        Vector x = best.x;
        AssignmentMap map = std::move(winner.map);
        double residual = (y - select_rows(A, map.map) * x).norm();
        std::vector<double> history{residual};
        if (cfg.refine) {
            auto refined = altmin_upper(A, y, x, cfg.refine_max_iters, cfg.refine_tol);
            if (refined.residual <= residual) {
                x = std::move(refined.x);
                map = std::move(refined.map);
                residual = refined.residual;
                history.push_back(residual);
            }
        }
        if (residual < best_cost) {
            best_cost = residual;
            result.x_hat = std::move(x);
            result.assignment = std::move(map);
            result.residual = residual;
            result.history = std::move(history);
        }
    }
    if (evaluated == 0) {
        std::ostringstream msg;
        msg << "solve_enum: every row tuple exceeds the condition-number threshold " << cfg.cond_max;
        throw NumericalError(msg.str());
    }
    result.nodes_expanded = evaluated;
    result.terminated_by = Termination::exhausted;
    result.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
    return result;
}

} // namespace homsense
