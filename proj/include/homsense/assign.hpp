#pragma once

#include "homsense/numerics.hpp"

#include <cstdint>
#include <vector>

namespace homsense {

/// Injective map [k] -> [m], stored 0-based. Row t of the selection
/// matrix S picks coordinate map[t].
struct AssignmentMap {
    Index codomain_size = 0;
    std::vector<Index> map;

    AssignmentMap() = default;
    AssignmentMap(Index m, std::vector<Index> indices);

    Index domain_size() const { return static_cast<Index>(map.size()); }
    Index operator[](Index t) const { return map[static_cast<std::size_t>(t)]; }

    bool is_injective() const;
    /// Strictly increasing, i.e. a row-submatrix of the identity.
    bool is_order_preserving() const;
    /// Throws PreconditionError when the map is not a valid injection.
    void validate() const;

    static AssignmentMap identity(Index k, Index m);

    friend bool operator==(const AssignmentMap&, const AssignmentMap&) = default;
};

struct AlignResult {
    /// Sum of squared differences under `map`.
    double cost = 0.0;
    AssignmentMap map;
};

/// Minimum of sum_i (a[i] - b[sigma(i)])^2 over strictly increasing sigma.
/// Both inputs must be sorted non-increasing.
AlignResult dp_align(const Vector& a, const Vector& b);

/// Same recurrence as dp_align without the sortedness requirement: the
/// optimum over order-preserving maps for arbitrary sequences.
AlignResult dp_align_unsorted(const Vector& a, const Vector& b);

/// Optimal injective matching of y (length k) into z (length m) under the
/// squared loss: sort both, align monotonically, compose the permutations.
AlignResult recover_selection(const Vector& y, const Vector& z);

/// Reusable scorer for many recover_selection calls against one fixed y.
/// Not thread-safe; each worker owns an instance.
class SelectionScorer {
public:
    explicit SelectionScorer(const Vector& y);

    Index size() const { return y_sorted_.size(); }
    /// Optimal cost only.
    double cost(const Vector& z);
    /// Optimal cost and map, identical to recover_selection(y, z).
    AlignResult solve(const Vector& z);

private:
    Vector y_sorted_;
    std::vector<Index> y_perm_;
    std::vector<Index> z_order_;
    Vector z_sorted_;
    std::vector<double> prev_;
    std::vector<double> curr_;
    std::vector<std::uint8_t> choice_;

    void sort_z(const Vector& z);
};

struct LapResult {
    AssignmentMap map;
    double total = 0.0;
};

/// Exact rectangular linear assignment (k <= m): minimizes
/// sum_t cost(t, map[t]) over injective maps. Shortest augmenting path
/// with dual potentials, O(k^2 m).
LapResult lap_solve(const Matrix& cost);

} // namespace homsense
