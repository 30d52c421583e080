#pragma once

#include "homsense/assign.hpp"
#include "homsense/numerics.hpp"

#include <string_view>
#include <vector>

namespace homsense {

enum class Termination { exhausted, depth, budget, gap };

std::string_view to_string(Termination t);

struct SolveResult {
    Vector x_hat;
    AssignmentMap assignment;
    /// ||y - A[assignment] x_hat||_2 (not squared).
    double residual = 0.0;
    std::size_t nodes_expanded = 0;
    double wall_time = 0.0;
    Termination terminated_by = Termination::exhausted;
    /// Incumbent residual after each improvement (BnB) or per iteration (alternation).
    std::vector<double> history;
};

/// ||y - A[map] x||_2.
double assignment_residual(const Matrix& A, const Vector& y, const Vector& x, const AssignmentMap& map);

} // namespace homsense
