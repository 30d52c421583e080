#include "homsense/registration.hpp"

#include "homsense/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace homsense {

RegistrationProblem RegistrationProblem::from_points(const Matrix& model_xy, const Matrix& scene_xy) {
    if (model_xy.cols() != 2 || scene_xy.cols() != 2) throw DimensionError("registration: point sets must have 2 columns");
    RegistrationProblem prob;
    prob.model.resize(model_xy.rows(), 3);
    prob.model.leftCols(2) = model_xy;
    prob.model.col(2).setOnes();
    prob.scene = scene_xy;
    prob.validate();
    return prob;
}

void RegistrationProblem::validate() const {
    if (model.cols() != 3) throw DimensionError("registration: model must be k x 3 (homogeneous)");
    if (scene.cols() != 2) throw DimensionError("registration: scene must be m x 2");
    if (model.rows() < 1 || scene.rows() < 1) throw DimensionError("registration: empty point set");
    if (model.rows() > scene.rows()) {
        throw PreconditionError("registration: model has k = " + std::to_string(model.rows()) +
                                " points but scene only m = " + std::to_string(scene.rows()));
    }
    require_finite(model, "model points");
    require_finite(scene, "scene points");
    if (!(model.col(2).array() == 1.0).all()) throw PreconditionError("registration: model's third column must be 1");
}

AffineTransform AffineTransform::identity() {
    AffineTransform a;
    a.T(0, 0) = 1.0;
    a.T(1, 1) = 1.0;
    return a;
}

Vector AffineTransform::params() const {
    Vector p(6);
    for (Index r = 0; r < 3; ++r) {
        p(2 * r) = T(r, 0);
        p(2 * r + 1) = T(r, 1);
    }
    return p;
}

AffineTransform AffineTransform::from_params(const Vector& p) {
    if (p.size() != 6) throw DimensionError("affine transform needs 6 parameters");
    AffineTransform a;
    for (Index r = 0; r < 3; ++r) {
        a.T(r, 0) = p(2 * r);
        a.T(r, 1) = p(2 * r + 1);
    }
    return a;
}

Matrix registration_costs(const RegistrationProblem& prob, const AffineTransform& T) {
    const Matrix mapped = prob.model * T.T;
    Matrix cost(prob.k(), prob.m());
    for (Index t = 0; t < prob.k(); ++t) {
        for (Index j = 0; j < prob.m(); ++j) cost(t, j) = (mapped.row(t) - prob.scene.row(j)).squaredNorm();
    }
    return cost;
}

double registration_residual(const RegistrationProblem& prob, const AffineTransform& T) {
    return std::sqrt(std::max(lap_solve(registration_costs(prob, T)).total, 0.0));
}

namespace {

RegistrationAltmin altmin_with(const RegistrationProblem& prob, const Eigen::CompleteOrthogonalDecomposition<Matrix>& cod,
                               const AffineTransform& T0, int max_iters, double tol) {
    RegistrationAltmin out;
    out.transform = T0;
    out.residual = std::numeric_limits<double>::infinity();
    AffineTransform T = T0;
    double previous = std::numeric_limits<double>::infinity();
    for (int it = 0; it < std::max(max_iters, 1); ++it) {
        LapResult lap = lap_solve(registration_costs(prob, T));
        out.history.push_back(std::sqrt(std::max(lap.total, 0.0)));
        const Matrix target = select_rows(prob.scene, lap.map.map);
        T.T = cod.solve(target);
        const double r = (prob.model * T.T - target).norm();
        out.history.push_back(r);
        out.iterations = it + 1;
        if (r <= out.residual) {
            out.transform = T;
            out.map = std::move(lap.map);
            out.residual = r;
        }
        if (!(previous - r >= tol)) break;
        previous = r;
    }
    return out;
}

struct Normalization {
    Eigen::RowVector2d center = Eigen::RowVector2d::Zero();
    double scale = 1.0;
};

Normalization normalization_of(const Matrix& pts) {
    Normalization n;
    n.center = pts.colwise().mean();
    const double rms = std::sqrt((pts.rowwise() - n.center).rowwise().squaredNorm().mean());
    n.scale = rms > 0.0 ? rms : 1.0;
    return n;
}

Matrix apply_normalization(const Matrix& pts, const Normalization& n) {
    return (pts.rowwise() - n.center) / n.scale;
}

double diameter(const Matrix& pts) {
    double best = 0.0;
    for (Index i = 0; i < pts.rows(); ++i) {
        for (Index j = i + 1; j < pts.rows(); ++j) best = std::max(best, (pts.row(i) - pts.row(j)).norm());
    }
    return best;
}

class RegistrationSearch {
public:
    RegistrationSearch(const RegistrationProblem& prob, const BnbConfig& cfg)
        : prob_(prob), cfg_(cfg), cod_(prob.model), sigma1_(sigma_max(prob.model)) {}

    double center_residual(const Vector& p) const {
        return registration_residual(prob_, AffineTransform::from_params(p));
    }

    RegistrationAltmin refine(const Vector& p) const {
        return altmin_with(prob_, cod_, AffineTransform::from_params(p), cfg_.altmin_max_iters, cfg_.altmin_tol);
    }

    double lipschitz() const { return sigma1_; }

private:
    const RegistrationProblem& prob_;
    const BnbConfig& cfg_;
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod_;
    double sigma1_;
};

} // namespace

RegistrationAltmin register_altmin(const RegistrationProblem& prob, const AffineTransform& T0, int max_iters,
                                   double tol) {
    prob.validate();
    if (T0.T.rows() != 3 || T0.T.cols() != 2) throw DimensionError("register_altmin: T0 must be 3 x 2");
    require_finite(T0.T, "T0");
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(prob.model);
    return altmin_with(prob, cod, T0, max_iters, tol);
}

Box default_registration_box(const RegistrationProblem& prob) {
    prob.validate();
    const double dp = diameter(prob.model.leftCols(2));
    const double dq = diameter(prob.scene);
    const double bound = 2.0 * ((dp > 0.0 ? dq / dp : 1.0) + 1.0);
    Box box;
    box.center = Vector::Zero(6);
    box.half_widths = Vector::Constant(6, bound);
    return box;
}

RegistrationResult register_bnb(const RegistrationProblem& prob, const RegistrationConfig& cfg) {
    prob.validate();

    Normalization model_norm, scene_norm;
    RegistrationProblem work = prob;
    if (cfg.normalize) {
        model_norm = normalization_of(prob.model.leftCols(2));
        scene_norm = normalization_of(prob.scene);
        work.model.leftCols(2) = apply_normalization(prob.model.leftCols(2), model_norm);
        work.scene = apply_normalization(prob.scene, scene_norm);
    }
    const Box root = cfg.bnb.initial_box ? *cfg.bnb.initial_box : default_registration_box(work);
    if (root.dim() != 6) throw DimensionError("register_bnb: box must have 6 dimensions");

    RegistrationSearch search(work, cfg.bnb);
    auto outcome = detail::best_first_search(search, root, cfg.bnb);

    RegistrationResult result;
    result.assignment = std::move(outcome.best.map);
    result.nodes_expanded = outcome.nodes_expanded;
    result.wall_time = outcome.wall_time;
    result.terminated_by = outcome.terminated_by;
    result.history = std::move(outcome.history);

    const Matrix& Tn = outcome.best.transform.T;
    if (cfg.normalize) {
        // Q = P L + t with L = (sQ / sP) Ln and t = cQ - cP L + sQ tn.
        const double ratio = scene_norm.scale / model_norm.scale;
        Matrix T(3, 2);
        T.topRows(2) = ratio * Tn.topRows(2);
        T.row(2) = scene_norm.center - model_norm.center * T.topRows(2) + scene_norm.scale * Tn.row(2);
        result.transform.T = T;
        for (double& h : result.history) h *= scene_norm.scale;
    } else {
        result.transform.T = Tn;
    }
    result.residual = (prob.model * result.transform.T - select_rows(prob.scene, result.assignment.map)).norm();
    return result;
}

} // namespace homsense
