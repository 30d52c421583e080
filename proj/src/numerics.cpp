#include "homsense/numerics.hpp"

#include "homsense/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace homsense {

namespace {

std::string non_finite_message(std::string_view what) {
    return std::string(what) + ": non-finite entry";
}

} // namespace

void require_finite(const Matrix& m, std::string_view what) {
    if (!m.allFinite()) throw NumericalError(non_finite_message(what));
}

void require_finite(const Vector& v, std::string_view what) {
    if (!v.allFinite()) throw NumericalError(non_finite_message(what));
}

void require_finite(const ComplexMatrix& m, std::string_view what) {
    if (!m.allFinite()) throw NumericalError(non_finite_message(what));
}

Vector lstsq(const Matrix& M, const Vector& b) {
    if (M.rows() < 1 || M.cols() < 1) throw DimensionError("lstsq: empty matrix");
    if (M.rows() != b.size()) {
        throw DimensionError("lstsq: matrix has " + std::to_string(M.rows()) + " rows but rhs has " +
                             std::to_string(b.size()) + " entries");
    }
    require_finite(M, "lstsq matrix");
    require_finite(b, "lstsq rhs");
    // COD yields the minimum-norm minimizer when M is rank deficient.
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(M);
    return cod.solve(b);
}

double sigma_max(const Matrix& M) {
    require_finite(M, "sigma_max");
    if (M.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(M);
    return svd.singularValues()(0);
}

double sigma_min_positive(const Matrix& M, double tol) {
    require_finite(M, "sigma_min_positive");
    if (M.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(M);
    const Vector& s = svd.singularValues();
    const double cutoff = tol * s(0);
    double result = 0.0;
    for (Index i = 0; i < s.size(); ++i) {
        if (s(i) > cutoff) result = s(i);
    }
    return result;
}

namespace {

template <class Mat, class Vec>
std::vector<Vec> kernel_basis_impl(const Mat& M, double tol) {
    if (!(tol > 0.0)) throw PreconditionError("kernel_basis: tol must be positive");
    if (M.rows() < 1 || M.cols() < 1) throw DimensionError("kernel_basis: empty matrix");
    require_finite(M, "kernel_basis");
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double cutoff = tol * s(0);
    std::vector<Vec> basis;
    const Index n = M.cols();
    for (Index j = 0; j < n; ++j) {
        if (j >= s.size() || s(j) <= cutoff) basis.emplace_back(svd.matrixV().col(j));
    }
    return basis;
}

} // namespace

std::vector<Vector> kernel_basis(const Matrix& M, double tol) {
    return kernel_basis_impl<Matrix, Vector>(M, tol);
}

std::vector<ComplexVector> kernel_basis(const ComplexMatrix& M, double tol) {
    return kernel_basis_impl<ComplexMatrix, ComplexVector>(M, tol);
}

Index numerical_rank(const Matrix& M, double tol) {
    if (M.size() == 0) return 0;
    require_finite(M, "numerical_rank");
    Eigen::JacobiSVD<Matrix> svd(M);
    const Vector& s = svd.singularValues();
    const double cutoff = tol * s(0);
    Index r = 0;
    for (Index i = 0; i < s.size(); ++i) {
        if (s(i) > cutoff) ++r;
    }
    return r;
}

SortedPermutation sort_desc_perm(const Vector& v) {
    require_finite(v, "sort_desc_perm");
    SortedPermutation out;
    out.perm.resize(static_cast<std::size_t>(v.size()));
    std::iota(out.perm.begin(), out.perm.end(), Index{0});
    std::stable_sort(out.perm.begin(), out.perm.end(), [&](Index a, Index b) { return v(a) > v(b); });
    out.sorted.resize(v.size());
    for (Index i = 0; i < v.size(); ++i) out.sorted(i) = v(out.perm[static_cast<std::size_t>(i)]);
    return out;
}

Matrix select_rows(const Matrix& M, const std::vector<Index>& rows) {
    Matrix out(static_cast<Index>(rows.size()), M.cols());
    for (std::size_t t = 0; t < rows.size(); ++t) {
        if (rows[t] < 0 || rows[t] >= M.rows()) throw DimensionError("select_rows: row index out of range");
        out.row(static_cast<Index>(t)) = M.row(rows[t]);
    }
    return out;
}

Vector select_entries(const Vector& v, const std::vector<Index>& idx) {
    Vector out(static_cast<Index>(idx.size()));
    for (std::size_t t = 0; t < idx.size(); ++t) {
        if (idx[t] < 0 || idx[t] >= v.size()) throw DimensionError("select_entries: index out of range");
        out(static_cast<Index>(t)) = v(idx[t]);
    }
    return out;
}

Matrix orthonormal_columns(const Matrix& M, double tol) {
    require_finite(M, "orthonormal_columns");
    if (M.size() == 0) return Matrix(M.rows(), 0);
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU);
    const Vector& s = svd.singularValues();
    const double cutoff = tol * s(0);
    Index r = 0;
    while (r < s.size() && s(r) > cutoff) ++r;
    return svd.matrixU().leftCols(r);
}

} // namespace homsense
