#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string_view>
#include <vector>

namespace homsense {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Default relative rank tolerance: singular values below tol * sigma_1 count as zero.
inline constexpr double kDefaultRankTol = 1e-9;

void require_finite(const Matrix& m, std::string_view what);
void require_finite(const Vector& v, std::string_view what);
void require_finite(const ComplexMatrix& m, std::string_view what);

/// Minimum-norm least-squares solution of min ||M x - b||_2.
Vector lstsq(const Matrix& M, const Vector& b);

/// Largest singular value.
double sigma_max(const Matrix& M);

/// Smallest singular value that exceeds tol * sigma_1; 0 for the zero matrix.
double sigma_min_positive(const Matrix& M, double tol = kDefaultRankTol);

/// Orthonormal basis of the numerical null space of M. A right singular
/// vector belongs to the kernel when its singular value is <= tol * sigma_1
/// (or when it has no singular value at all, for wide matrices). The zero
/// matrix has the whole space as kernel.
std::vector<Vector> kernel_basis(const Matrix& M, double tol = kDefaultRankTol);
std::vector<ComplexVector> kernel_basis(const ComplexMatrix& M, double tol = kDefaultRankTol);

/// Numerical rank with the same relative tolerance convention.
Index numerical_rank(const Matrix& M, double tol = kDefaultRankTol);

struct SortedPermutation {
    Vector sorted;
    /// sorted[i] == v[perm[i]] (0-based).
    std::vector<Index> perm;
};

/// Non-increasing sort. Ties keep ascending original index.
SortedPermutation sort_desc_perm(const Vector& v);

/// Stacks rows rows[0], rows[1], ... of M.
Matrix select_rows(const Matrix& M, const std::vector<Index>& rows);
Vector select_entries(const Vector& v, const std::vector<Index>& idx);

/// Orthonormal basis for the column span of M (thin SVD, rank by tol).
Matrix orthonormal_columns(const Matrix& M, double tol = kDefaultRankTol);

} // namespace homsense
