#pragma once

// Best-first branch-and-bound over an axis-aligned box, shared by the
// unlabeled-sensing and registration solvers.

#include "homsense/assign.hpp"
#include "homsense/errors.hpp"
#include "homsense/numerics.hpp"
#include "homsense/solve_result.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

namespace homsense {

struct Box {
    Vector center;
    Vector half_widths;

    Index dim() const { return center.size(); }
    /// Half the Euclidean diagonal.
    double half_diagonal() const { return half_widths.norm(); }
    void validate() const;
};

struct HypercubeNode {
    Box box;
    int depth = 0;
    double lower_bound = 0.0;
    /// Optimal residual at the center for the fixed-center assignment (not the alternated value).
    double center_residual = 0.0;
    std::uint64_t sequence = 0;
};

struct BnbConfig {
    std::optional<Box> initial_box;
    int max_depth = 6;
    std::optional<double> time_budget;
    int altmin_max_iters = 50;
    double altmin_tol = 1e-9;
    double gap_tol = 0.0;
    /// Disabling pruning turns the search into pure refinement down to max_depth.
    bool prune = true;
    unsigned workers = 1;

    void validate() const;
};

/// max(center_residual - sigma1 * box_half_diagonal, 0).
double lower_bound(double center_residual, double sigma1, double box_half_diagonal);

/// Bisects along the longest edge (lowest index on ties).
std::pair<Box, Box> split_longest_edge(const Box& box);

namespace detail {

template <class Candidate>
struct SearchOutcome {
    Candidate best;
    std::size_t nodes_expanded = 0;
    double wall_time = 0.0;
    Termination terminated_by = Termination::exhausted;
    std::vector<double> history;
};

struct NodeOrder {
    // std::priority_queue pops the "largest"; we want smallest bound,
    // then deeper, then earlier insertion.
    bool operator()(const HypercubeNode& a, const HypercubeNode& b) const {
        if (a.lower_bound != b.lower_bound) return a.lower_bound > b.lower_bound;
        if (a.depth != b.depth) return a.depth < b.depth;
        return a.sequence > b.sequence;
    }
};

/// Problem must provide (all callable concurrently):
///   double   center_residual(const Vector& center) const;
///   Candidate refine(const Vector& center) const;   // Candidate has `.residual`
///   double   lipschitz() const;
template <class Problem>
auto best_first_search(const Problem& problem, const Box& root, const BnbConfig& cfg)
    -> SearchOutcome<decltype(problem.refine(root.center))> {
    using Candidate = decltype(problem.refine(root.center));
    using Clock = std::chrono::steady_clock;
    root.validate();
    cfg.validate();

    const auto start = Clock::now();
    const double sigma1 = problem.lipschitz();
    const auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

    SearchOutcome<Candidate> out;
    std::uint64_t sequence = 0;
    auto make_node = [&](Box box, int depth) {
        HypercubeNode node;
        node.center_residual = problem.center_residual(box.center);
        node.lower_bound = lower_bound(node.center_residual, sigma1, box.half_diagonal());
        node.depth = depth;
        node.box = std::move(box);
        node.sequence = sequence++;
        return node;
    };

    std::priority_queue<HypercubeNode, std::vector<HypercubeNode>, NodeOrder> queue;
    queue.push(make_node(root, 0));

    double incumbent = std::numeric_limits<double>::infinity();
    bool have_incumbent = false;
    bool depth_capped = false;
    bool gap_pruned = false;
    const auto prunable = [&](const HypercubeNode& node) {
        if (!cfg.prune || !have_incumbent || node.lower_bound < incumbent - cfg.gap_tol) return false;
        if (node.lower_bound < incumbent) gap_pruned = true;
        return true;
    };
    const unsigned workers = std::max(1u, cfg.workers);

    out.terminated_by = Termination::exhausted;
    while (!queue.empty()) {
        if (cfg.time_budget && have_incumbent && elapsed() >= *cfg.time_budget) {
            out.terminated_by = Termination::budget;
            break;
        }
        if (cfg.gap_tol > 0.0 && have_incumbent && incumbent - queue.top().lower_bound <= cfg.gap_tol) {
            out.terminated_by = Termination::gap;
            break;
        }

        // Pop a batch of live nodes (one in single-worker mode).
        std::vector<HypercubeNode> batch;
        while (!queue.empty() && batch.size() < workers) {
            HypercubeNode node = queue.top();
            queue.pop();
            if (prunable(node)) continue;
            batch.push_back(std::move(node));
        }
        if (batch.empty()) continue;

        std::vector<Candidate> evaluated(batch.size());
        if (batch.size() == 1) {
            evaluated[0] = problem.refine(batch[0].box.center);
        } else {
            std::vector<std::future<Candidate>> futures;
            futures.reserve(batch.size());
            for (const auto& node : batch) {
                futures.push_back(std::async(std::launch::async, [&problem, &node] { return problem.refine(node.box.center); }));
            }
            for (std::size_t i = 0; i < batch.size(); ++i) evaluated[i] = futures[i].get();
        }

        for (std::size_t i = 0; i < batch.size(); ++i) {
            ++out.nodes_expanded;
            if (!have_incumbent || evaluated[i].residual < incumbent) {
                incumbent = evaluated[i].residual;
                out.best = std::move(evaluated[i]);
                have_incumbent = true;
                out.history.push_back(incumbent);
            }
            const HypercubeNode& node = batch[i];
            if (prunable(node)) continue;
            if (node.depth >= cfg.max_depth) {
                depth_capped = true;
                continue;
            }
            auto [left, right] = split_longest_edge(node.box);
            queue.push(make_node(std::move(left), node.depth + 1));
            queue.push(make_node(std::move(right), node.depth + 1));
        }
    }
    if (out.terminated_by == Termination::exhausted) {
        if (depth_capped) out.terminated_by = Termination::depth;
        else if (gap_pruned) out.terminated_by = Termination::gap;
    }
    out.wall_time = elapsed();
    return out;
}

} // namespace detail
} // namespace homsense
