#include "homsense/theory.hpp"

#include "homsense/errors.hpp"
#include "homsense/random.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace homsense::theory {

namespace {

constexpr Index kEnumerationMaxM = 9;

void require_square(const Matrix& M, const char* what) {
    if (M.rows() < 1 || M.rows() != M.cols()) throw DimensionError(std::string(what) + ": matrix must be square");
}

std::vector<Eigenspace> sorted_by_value(std::vector<Eigenspace> out) {
    std::sort(out.begin(), out.end(), [](const Eigenspace& a, const Eigenspace& b) {
        if (a.eigenvalue.real() != b.eigenvalue.real()) return a.eigenvalue.real() < b.eigenvalue.real();
        return a.eigenvalue.imag() < b.eigenvalue.imag();
    });
    return out;
}

} // namespace

void Endomorphism::validate() const {
    require_square(matrix, "endomorphism");
    require_finite(matrix, "endomorphism");
    const Index m = dim();
    auto is_permutation = [&] {
        for (Index r = 0; r < m; ++r) {
            Index ones = 0;
            for (Index c = 0; c < m; ++c) {
                const double v = matrix(r, c);
                if (v == 1.0) ++ones;
                else if (v != 0.0) return false;
            }
            if (ones != 1) return false;
        }
        return ((matrix.colwise().sum().array() - 1.0).abs() == 0.0).all();
    };
    auto is_idempotent = [&] { return (matrix * matrix - matrix).cwiseAbs().maxCoeff() <= 1e-12; };
    switch (kind) {
    case EndoKind::permutation:
        if (!is_permutation()) throw PreconditionError("endomorphism tagged permutation is not a permutation matrix");
        break;
    case EndoKind::projection:
        if (!is_idempotent()) throw PreconditionError("endomorphism tagged projection is not idempotent");
        break;
    case EndoKind::permutation_projection:
    case EndoKind::general:
        break;
    }
}

Endomorphism Endomorphism::permutation(const std::vector<Index>& images) {
    const auto m = static_cast<Index>(images.size());
    Endomorphism e;
    e.kind = EndoKind::permutation;
    e.matrix = Matrix::Zero(m, m);
    for (Index j = 0; j < m; ++j) {
        const Index i = images[static_cast<std::size_t>(j)];
        if (i < 0 || i >= m) throw PreconditionError("permutation image out of range");
        e.matrix(i, j) = 1.0;
    }
    e.validate();
    return e;
}

Endomorphism Endomorphism::coordinate_projection(Index m, const std::vector<Index>& kept) {
    Endomorphism e;
    e.kind = EndoKind::projection;
    e.matrix = Matrix::Zero(m, m);
    for (Index j : kept) {
        if (j < 0 || j >= m) throw PreconditionError("projection coordinate out of range");
        e.matrix(j, j) = 1.0;
    }
    return e;
}

Endomorphism Endomorphism::general(Matrix M) {
    Endomorphism e;
    e.matrix = std::move(M);
    e.validate();
    return e;
}

Endomorphism Endomorphism::identity(Index m) {
    Endomorphism e;
    e.kind = EndoKind::permutation;
    e.matrix = Matrix::Identity(m, m);
    return e;
}

Endomorphism Endomorphism::compose(const Endomorphism& rho, const Endomorphism& pi) {
    if (rho.dim() != pi.dim()) throw DimensionError("compose: dimension mismatch");
    Endomorphism e;
    e.matrix = rho.matrix * pi.matrix;
    const bool perm_proj = (rho.kind == EndoKind::projection || rho.kind == EndoKind::permutation) &&
                           pi.kind == EndoKind::permutation;
    e.kind = perm_proj ? EndoKind::permutation_projection : EndoKind::general;
    return e;
}

SubspaceBasis SubspaceBasis::span_of(const Matrix& M) {
    if (M.rows() < 1 || M.cols() < 1) throw DimensionError("subspace: empty basis");
    if (M.cols() > M.rows()) throw DimensionError("subspace: more basis vectors than ambient dimension");
    SubspaceBasis s;
    s.basis = orthonormal_columns(M);
    if (s.basis.cols() != M.cols()) throw PreconditionError("subspace: basis is rank deficient");
    return s;
}

std::vector<Eigenspace> eigenspace_dims(const Endomorphism& tau, double tol) {
    require_square(tau.matrix, "eigenspace_dims");
    require_finite(tau.matrix, "eigenspace_dims");
    const Index m = tau.dim();
    const ComplexMatrix Tc = tau.matrix.cast<std::complex<double>>();
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(Tc, false);
    if (solver.info() != Eigen::Success) throw NumericalError("eigenspace_dims: eigen-solver did not converge");
    const ComplexVector& values = solver.eigenvalues();

    // Greedy clustering in eigen-solver order around the first member.
    std::vector<std::vector<std::complex<double>>> clusters;
    for (Index i = 0; i < values.size(); ++i) {
        bool placed = false;
        for (auto& c : clusters) {
            if (std::abs(values(i) - c.front()) <= tol) {
                c.push_back(values(i));
                placed = true;
                break;
            }
        }
        if (!placed) clusters.push_back({values(i)});
    }

    std::vector<Eigenspace> out;
    for (const auto& c : clusters) {
        std::complex<double> mean = std::accumulate(c.begin(), c.end(), std::complex<double>{});
        mean /= static_cast<double>(c.size());
        const ComplexMatrix shifted = Tc - mean * ComplexMatrix::Identity(m, m);
        Eigenspace e;
        e.eigenvalue = mean;
        e.algebraic = c.size();
        e.geometric = kernel_basis(shifted, kDefaultRankTol).size();
        out.push_back(e);
    }
    return sorted_by_value(std::move(out));
}

EigenBoundCheck check_permutation_eigen_bound(const Endomorphism& pi, double tol) {
    if (pi.kind != EndoKind::permutation) throw PreconditionError("check_permutation_eigen_bound: not a permutation");
    pi.validate();
    const auto m = static_cast<std::size_t>(pi.dim());
    EigenBoundCheck out;
    out.bound = m - m / 2;
    for (const auto& e : eigenspace_dims(pi, tol)) {
        if (std::abs(e.eigenvalue - 1.0) <= tol) continue;
        if (e.geometric > out.worst_dim) {
            out.worst_dim = e.geometric;
            out.worst_eigenvalue = e.eigenvalue;
        }
    }
    out.holds = out.worst_dim <= out.bound;
    return out;
}

bool kernel_within_diagonal(const Matrix& M1, const Matrix& M2, double tol) {
    if (M1.rows() != M2.rows() || M1.cols() != M2.cols()) throw DimensionError("kernel_within_diagonal: shape mismatch");
    const Index n = M1.cols();
    Matrix stacked(M1.rows(), 2 * n);
    stacked << M1, -M2;
    if (stacked.rows() >= stacked.cols()) {
        // Cheap exit for the common full-rank case.
        Eigen::JacobiSVD<Matrix> svd(stacked);
        const Vector& s = svd.singularValues();
        if (s(s.size() - 1) > tol * s(0)) return true;
    }
    for (const Vector& v : kernel_basis(stacked, tol)) {
        if ((v.head(n) - v.tail(n)).norm() > tol) return false;
    }
    return true;
}

bool pairwise_unique_recovery(const SubspaceBasis& V, const Endomorphism& tau1, const Endomorphism& tau2, double tol) {
    if (tau1.dim() != V.ambient_dim() || tau2.dim() != V.ambient_dim()) {
        throw DimensionError("pairwise_unique_recovery: endomorphism and subspace dimensions differ");
    }
    return kernel_within_diagonal(tau1.matrix * V.basis, tau2.matrix * V.basis, tol);
}

UniquenessEnumeration enumerate_unlabeled_uniqueness(const Matrix& A, Index k, double tol) {
    const Index m = A.rows();
    if (m > kEnumerationMaxM) throw PreconditionError("enumerate_unlabeled_uniqueness: m must be <= 9");
    if (k < 1 || k > m) throw PreconditionError("enumerate_unlabeled_uniqueness: need 1 <= k <= m");
    require_finite(A, "A");
    UniquenessEnumeration out;
    for_each_increasing(k, m, [&](const std::vector<Index>& s1) {
        const Matrix A1 = select_rows(A, s1);
        bool keep_going = true;
        for_each_injection(k, m, [&](const std::vector<Index>& s2) {
            ++out.pairs_checked;
            if (!kernel_within_diagonal(A1, select_rows(A, s2), tol)) {
                out.unique = false;
                out.violation.emplace(AssignmentMap(m, s1), AssignmentMap(m, s2));
                keep_going = false;
            }
            return keep_going;
        });
        return keep_going;
    });
    return out;
}

GenericPointRecovery generic_point_recovery(const Matrix& A, const Vector& x_star, Index k, double tol,
                                            std::uint64_t seed) {
    const Index m = A.rows();
    if (m > kEnumerationMaxM) throw PreconditionError("generic_point_recovery: m must be <= 9");
    if (k < 1 || k > m) throw PreconditionError("generic_point_recovery: need 1 <= k <= m");
    if (x_star.size() != A.cols()) throw DimensionError("generic_point_recovery: x* length differs from A's column count");
    require_finite(A, "A");
    require_finite(x_star, "x*");

    Rng rng(seed);
    const auto s_star = random_injection(k, m, rng);
    const Vector y = select_entries(Vector(A * x_star), s_star);
    const double ynorm = y.norm();
    const double xnorm = std::max(x_star.norm(), 1.0);

    GenericPointRecovery out;
    for_each_injection(k, m, [&](const std::vector<Index>& s) {
        ++out.maps_checked;
        const Matrix As = select_rows(A, s);
        const Vector x = lstsq(As, y);
        if ((y - As * x).norm() <= tol * ynorm) {
            ++out.consistent;
            const double dev = (x - x_star).norm() / xnorm;
            out.worst_deviation = std::max(out.worst_deviation, dev);
            if (dev > tol) out.recovered = false;
        }
        return true;
    });
    return out;
}

Index intersection_dim(const Matrix& W, const Matrix& V, double tol) {
    if (W.rows() != V.rows()) throw DimensionError("intersection_dim: ambient dimensions differ");
    Matrix stacked(W.rows(), W.cols() + V.cols());
    stacked << W, -V;
    return static_cast<Index>(kernel_basis(stacked, tol).size());
}

IntersectionStats generic_intersection_dim(const SubspaceBasis& W, Index n, std::size_t trials, double tol,
                                           std::uint64_t seed) {
    const Index m = W.ambient_dim();
    if (n < 1 || n > m) throw DimensionError("generic_intersection_dim: need 1 <= n <= m");
    Rng rng(seed);
    IntersectionStats out;
    out.expected = std::max<Index>(n + W.dim() - m, 0);
    for (std::size_t t = 0; t < trials; ++t) {
        const Matrix V = orthonormal_columns(gaussian_matrix(m, n, rng));
        const Index d = intersection_dim(W.basis, V, tol);
        ++out.histogram[d];
        if (d != out.expected) out.all_match = false;
    }
    return out;
}

Lemma2Result lemma2_condition(const Matrix& A, const Endomorphism& tau, double tol) {
    require_square(tau.matrix, "lemma2_condition");
    if (tau.dim() != A.rows()) throw DimensionError("lemma2_condition: tau and basis dimensions differ");
    {
        Eigen::JacobiSVD<Matrix> svd(tau.matrix);
        if (!(svd.singularValues()(tau.dim() - 1) > tol)) throw PreconditionError("lemma2_condition: tau is not invertible");
    }
    const SubspaceBasis V = SubspaceBasis::span_of(A);
    const Index n = V.dim();
    const Matrix TV = tau.matrix * V.basis;

    Lemma2Result out;
    // Pairs (a, b) with V a = tau V b; their V a span V ∩ tau(V).
    Matrix stacked(V.ambient_dim(), 2 * n);
    stacked << V.basis, -TV;
    const auto kernel = kernel_basis(stacked, tol);
    if (!kernel.empty()) {
        Matrix points(V.ambient_dim(), static_cast<Index>(kernel.size()));
        for (std::size_t i = 0; i < kernel.size(); ++i) points.col(static_cast<Index>(i)) = V.basis * kernel[i].head(n);
        const Matrix inter = orthonormal_columns(points, tol);
        out.intersection_dim = inter.cols();
        for (Index c = 0; c < inter.cols(); ++c) {
            if ((tau.matrix * inter.col(c) - inter.col(c)).norm() > tol) out.condition_holds = false;
        }
    }
    out.unique_recovery_holds = kernel_within_diagonal(V.basis, TV, tol);
    return out;
}

std::vector<Index> cycle_lengths(const std::vector<Index>& images) {
    const std::size_t m = images.size();
    std::vector<bool> seen(m, false);
    std::vector<Index> lengths;
    for (std::size_t start = 0; start < m; ++start) {
        if (seen[start]) continue;
        Index len = 0;
        for (std::size_t j = start; !seen[j]; j = static_cast<std::size_t>(images[j])) {
            seen[j] = true;
            ++len;
        }
        lengths.push_back(len);
    }
    return lengths;
}

std::vector<Eigenspace> permutation_eigenspaces_from_cycles(const std::vector<Index>& images) {
    // lambda = exp(2 pi i p / q) with p/q reduced; a cycle of length l
    // contributes one dimension to every l-th root of unity.
    std::map<std::pair<Index, Index>, std::size_t> dims;
    for (Index len : cycle_lengths(images)) {
        for (Index p = 0; p < len; ++p) {
            const Index g = std::gcd(p, len);
            ++dims[{p / g, len / g}];
        }
    }
    std::vector<Eigenspace> out;
    for (const auto& [frac, dim] : dims) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(frac.first) / static_cast<double>(frac.second);
        Eigenspace e;
        e.eigenvalue = std::polar(1.0, angle);
        e.algebraic = dim;
        e.geometric = dim;
        out.push_back(e);
    }
    return sorted_by_value(std::move(out));
}

} // namespace homsense::theory
