#pragma once

#include "homsense/best_first.hpp"
#include "homsense/solve_result.hpp"

namespace homsense {

/// Model P (k x 3, homogeneous: last column all ones) and scene Q (m x 2), k <= m.
struct RegistrationProblem {
    Matrix model;
    Matrix scene;

    /// Homogenizes the k x 2 model points.
    static RegistrationProblem from_points(const Matrix& model_xy, const Matrix& scene_xy);
    void validate() const;
    Index k() const { return model.rows(); }
    Index m() const { return scene.rows(); }
};

/// 3 x 2 affine map acting on homogeneous row vectors: [x y 1] T.
/// Rows 0-1 hold the linear part, row 2 the translation.
struct AffineTransform {
    Matrix T = Matrix::Zero(3, 2);

    static AffineTransform identity();
    /// Row-major parameter vector (T00, T01, T10, T11, T20, T21).
    Vector params() const;
    static AffineTransform from_params(const Vector& p);
};

struct RegistrationAltmin {
    AffineTransform transform;
    AssignmentMap map;
    /// Frobenius residual ||P T - S Q||_F.
    double residual = 0.0;
    int iterations = 0;
    std::vector<double> history;
};

/// Squared distances cost(t, j) = ||(P T)_t - Q_j||^2.
Matrix registration_costs(const RegistrationProblem& prob, const AffineTransform& T);

/// min_S ||P T - S Q||_F via exact linear assignment.
double registration_residual(const RegistrationProblem& prob, const AffineTransform& T);

/// Alternates the LAP S-step with the least-squares T-step.
RegistrationAltmin register_altmin(const RegistrationProblem& prob, const AffineTransform& T0, int max_iters = 50,
                                   double tol = 1e-9);

struct RegistrationConfig {
    /// Search settings. An initial box, when given, is over the six
    /// parameters of the transform in the coordinates the search runs in
    /// (normalized ones when `normalize` is set).
    BnbConfig bnb;
    /// Center both point sets and scale them to unit RMS radius before searching.
    bool normalize = true;
};

struct RegistrationResult {
    AffineTransform transform;
    AssignmentMap assignment;
    double residual = 0.0;
    std::size_t nodes_expanded = 0;
    double wall_time = 0.0;
    Termination terminated_by = Termination::exhausted;
    std::vector<double> history;
};

/// [-B, B]^6 with B = 2 (diameter(Q) / diameter(P) + 1).
Box default_registration_box(const RegistrationProblem& prob);

/// Branch-and-bound over the six transform parameters. Lower bound per box:
/// max(F(T0, S_T0) - sigma_1(P) * half_diagonal, 0).
RegistrationResult register_bnb(const RegistrationProblem& prob, const RegistrationConfig& cfg = {});

} // namespace homsense
