#pragma once

#include "homsense/assign.hpp"
#include "homsense/numerics.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace homsense::theory {

/// Default clustering tolerance for eigenvalues.
inline constexpr double kEigenTol = 1e-8;

enum class EndoKind { permutation, projection, permutation_projection, general };

/// Linear map of C^m given by a real m x m matrix.
struct Endomorphism {
    Matrix matrix;
    EndoKind kind = EndoKind::general;

    Index dim() const { return matrix.rows(); }
    /// Checks the kind tag against the matrix (one 1 per row/column for
    /// permutations, idempotence for projections).
    void validate() const;

    /// Matrix sending e_j to e_{images[j]}.
    static Endomorphism permutation(const std::vector<Index>& images);
    /// Keeps the coordinates listed in `kept`, zeroes the others.
    static Endomorphism coordinate_projection(Index m, const std::vector<Index>& kept);
    static Endomorphism general(Matrix M);
    static Endomorphism identity(Index m);
    /// rho * pi.
    static Endomorphism compose(const Endomorphism& rho, const Endomorphism& pi);
};

/// Matrix with orthonormal columns spanning the subspace.
struct SubspaceBasis {
    Matrix basis;

    /// Orthonormalizes the columns of M (which must have full column rank).
    static SubspaceBasis span_of(const Matrix& M);
    Index ambient_dim() const { return basis.rows(); }
    Index dim() const { return basis.cols(); }
};

struct Eigenspace {
    std::complex<double> eigenvalue;
    /// Eigenvalues of the cluster (algebraic multiplicity).
    std::size_t algebraic = 0;
    /// Dimension of ker(tau - lambda I).
    std::size_t geometric = 0;
};

/// Eigenvalues clustered within tol, with geometric multiplicities;
/// sorted by (real, imag).
std::vector<Eigenspace> eigenspace_dims(const Endomorphism& tau, double tol = kEigenTol);

struct EigenBoundCheck {
    bool holds = true;
    /// Eigenvalue != 1 with the largest eigenspace (1 when there is none).
    std::complex<double> worst_eigenvalue{1.0, 0.0};
    std::size_t worst_dim = 0;
    /// m - floor(m / 2).
    std::size_t bound = 0;
};

/// dim E_{pi,lambda} <= m - floor(m/2) for every lambda != 1.
EigenBoundCheck check_permutation_eigen_bound(const Endomorphism& pi, double tol = kEigenTol);

/// True when every (xi1, xi2) with M1 xi1 = M2 xi2 has xi1 = xi2, i.e. the
/// kernel of [M1 | -M2] lies on the diagonal.
bool kernel_within_diagonal(const Matrix& M1, const Matrix& M2, double tol);

/// tau1(V xi1) = tau2(V xi2) implies xi1 = xi2.
bool pairwise_unique_recovery(const SubspaceBasis& V, const Endomorphism& tau1, const Endomorphism& tau2,
                              double tol = kDefaultRankTol);

struct UniquenessEnumeration {
    bool unique = true;
    std::optional<std::pair<AssignmentMap, AssignmentMap>> violation;
    std::size_t pairs_checked = 0;
};

/// Unique recovery in range(A) under all k-row selections of [m] (m <= 9),
/// checked pair by pair. Rows can be reordered jointly without changing a
/// pair's kernel, so the first map runs over increasing maps only.
UniquenessEnumeration enumerate_unlabeled_uniqueness(const Matrix& A, Index k, double tol = kDefaultRankTol);

struct GenericPointRecovery {
    bool recovered = true;
    /// Injective maps whose least-squares fit is consistent with y.
    std::size_t consistent = 0;
    std::size_t maps_checked = 0;
    double worst_deviation = 0.0;
};

/// Observes y = (A x*)[s*] for a seeded random injective s* and collects
/// every consistent solution over all injective s (m <= 9).
GenericPointRecovery generic_point_recovery(const Matrix& A, const Vector& x_star, Index k, double tol,
                                            std::uint64_t seed);

struct IntersectionStats {
    std::map<Index, std::size_t> histogram;
    Index expected = 0;
    bool all_match = true;
};

/// dim(W ∩ V) for `trials` random n-dimensional V.
IntersectionStats generic_intersection_dim(const SubspaceBasis& W, Index n, std::size_t trials, double tol,
                                           std::uint64_t seed);

/// dim(W ∩ V) for given bases (full column rank).
Index intersection_dim(const Matrix& W, const Matrix& V, double tol);

struct Lemma2Result {
    bool condition_holds = true;
    bool unique_recovery_holds = true;
    Index intersection_dim = 0;

    bool agree() const { return condition_holds == unique_recovery_holds; }
};

/// condition: V ∩ tau(V) lies in the eigenspace of eigenvalue 1;
/// unique recovery: pairwise_unique_recovery(V, identity, tau).
Lemma2Result lemma2_condition(const Matrix& A, const Endomorphism& tau, double tol = kDefaultRankTol);

/// Eigenspace dimensions of a permutation from its cycle structure:
/// dim E_lambda = #cycles whose length l satisfies lambda^l = 1.
std::vector<Eigenspace> permutation_eigenspaces_from_cycles(const std::vector<Index>& images);

/// Lengths of the cycles of a permutation.
std::vector<Index> cycle_lengths(const std::vector<Index>& images);

/// Invokes f on every injective map [k] -> [m] in lexicographic order; stops when f returns false.
template <class F>
void for_each_injection(Index k, Index m, F&& f);

/// Invokes f on every strictly increasing map [k] -> [m]; stops when f returns false.
template <class F>
void for_each_increasing(Index k, Index m, F&& f);

// ---------------------------------------------------------------------------

template <class F>
void for_each_injection(Index k, Index m, F&& f) {
    std::vector<Index> cur(static_cast<std::size_t>(k));
    std::vector<bool> used(static_cast<std::size_t>(m), false);
    bool stop = false;
    auto rec = [&](auto&& self, Index depth) -> void {
        if (stop) return;
        if (depth == k) {
            if (!f(static_cast<const std::vector<Index>&>(cur))) stop = true;
            return;
        }
        for (Index j = 0; j < m && !stop; ++j) {
            if (used[static_cast<std::size_t>(j)]) continue;
            used[static_cast<std::size_t>(j)] = true;
            cur[static_cast<std::size_t>(depth)] = j;
            self(self, depth + 1);
            used[static_cast<std::size_t>(j)] = false;
        }
    };
    rec(rec, 0);
}

template <class F>
void for_each_increasing(Index k, Index m, F&& f) {
    std::vector<Index> cur(static_cast<std::size_t>(k));
    bool stop = false;
    auto rec = [&](auto&& self, Index depth, Index from) -> void {
        if (stop) return;
        if (depth == k) {
            if (!f(static_cast<const std::vector<Index>&>(cur))) stop = true;
            return;
        }
        for (Index j = from; j <= m - (k - depth) && !stop; ++j) {
            cur[static_cast<std::size_t>(depth)] = j;
            self(self, depth + 1, j + 1);
        }
    };
    rec(rec, 0, 0);
}

} // namespace homsense::theory
