#pragma once

// Independent reference implementations used as test oracles. They share no
// code with the library beyond the basic Eigen types.

#include "homsense/numerics.hpp"
#include "homsense/random.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace support {

using homsense::Index;
using homsense::Matrix;
using homsense::Rng;
using homsense::Vector;

/// Calls f(map) for every injective map [k] -> [m], generated by choosing a
/// subset with std::next_permutation over a bitmask and then every ordering.
inline void each_injection(Index k, Index m, const std::function<void(const std::vector<Index>&)>& f) {
    std::vector<bool> mask(static_cast<std::size_t>(m), false);
    std::fill(mask.end() - k, mask.end(), true);
    do {
        std::vector<Index> chosen;
        for (Index j = 0; j < m; ++j) {
            if (mask[static_cast<std::size_t>(j)]) chosen.push_back(j);
        }
        do {
            f(chosen);
        } while (std::next_permutation(chosen.begin(), chosen.end()));
    } while (std::next_permutation(mask.begin(), mask.end()));
}

inline double brute_matching_cost(const Vector& y, const Vector& z) {
    double best = std::numeric_limits<double>::infinity();
    each_injection(y.size(), z.size(), [&](const std::vector<Index>& s) {
        double c = 0.0;
        for (Index t = 0; t < y.size(); ++t) c += (y(t) - z(s[t])) * (y(t) - z(s[t]));
        best = std::min(best, c);
    });
    return best;
}

inline double brute_lap_total(const Matrix& cost) {
    double best = std::numeric_limits<double>::infinity();
    each_injection(cost.rows(), cost.cols(), [&](const std::vector<Index>& s) {
        double c = 0.0;
        for (Index t = 0; t < cost.rows(); ++t) c += cost(t, s[t]);
        best = std::min(best, c);
    });
    return best;
}

inline Matrix rows_of(const Matrix& M, const std::vector<Index>& rows) {
    Matrix out(static_cast<Index>(rows.size()), M.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = M.row(rows[i]);
    return out;
}

/// Householder QR least squares (full column rank assumed).
inline Matrix qr_solve(const Matrix& M, const Matrix& B) { return M.colPivHouseholderQr().solve(B); }

/// Exhaustive global minimum of ||y - S A x|| over injective S and x.
struct BruteRegression {
    Vector x;
    double residual = std::numeric_limits<double>::infinity();
};

inline BruteRegression brute_regression(const Matrix& A, const Vector& y) {
    BruteRegression best;
    each_injection(y.size(), A.rows(), [&](const std::vector<Index>& s) {
        const Matrix As = rows_of(A, s);
        const Vector x = qr_solve(As, y);
        const double r = (As * x - y).norm();
        if (r < best.residual) best = {x, r};
    });
    return best;
}

/// Exhaustive minimum of ||P T - S Q||_F with T fit in closed form for every S.
inline double brute_registration(const Matrix& P_h, const Matrix& Q) {
    double best = std::numeric_limits<double>::infinity();
    each_injection(P_h.rows(), Q.rows(), [&](const std::vector<Index>& s) {
        const Matrix Qs = rows_of(Q, s);
        const Matrix T = qr_solve(P_h, Qs);
        best = std::min(best, (P_h * T - Qs).norm());
    });
    return best;
}

/// Largest singular value by power iteration on M^T M.
inline double power_sigma_max(const Matrix& M, Rng& rng, int iters = 2000) {
    Vector v = homsense::gaussian_vector(M.cols(), rng).normalized();
    double s = 0.0;
    for (int i = 0; i < iters; ++i) {
        Vector w = M.transpose() * (M * v);
        const double nw = w.norm();
        if (nw == 0.0) return 0.0;
        v = w / nw;
        s = std::sqrt(nw);
    }
    return s;
}

struct RegistrationInstance {
    Matrix model_xy;
    Matrix scene_xy;
    Matrix T_star;
    std::vector<Index> s_star;
};

/// Model points ~ N(0, 1); T* entries uniform in [-1, 1]; inliers placed at
/// a random injection, outliers uniform in the inliers' bounding box.
inline RegistrationInstance make_registration(Index k, Index m, double sigma, Rng& rng) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    RegistrationInstance inst;
    inst.model_xy = homsense::gaussian_matrix(k, 2, rng);
    inst.T_star.resize(3, 2);
    for (Index r = 0; r < 3; ++r) {
        for (Index c = 0; c < 2; ++c) inst.T_star(r, c) = unit(rng);
    }
    Matrix P_h(k, 3);
    P_h << inst.model_xy, Vector::Ones(k);
    const Matrix inliers = P_h * inst.T_star;
    inst.s_star = homsense::random_injection(k, m, rng);
    inst.scene_xy = Matrix::Zero(m, 2);
    std::vector<bool> used(static_cast<std::size_t>(m), false);
    for (Index t = 0; t < k; ++t) {
        for (Index c = 0; c < 2; ++c) inst.scene_xy(inst.s_star[t], c) = inliers(t, c) + sigma * normal(rng);
        used[static_cast<std::size_t>(inst.s_star[t])] = true;
    }
    const Eigen::RowVector2d lo = inliers.colwise().minCoeff();
    const Eigen::RowVector2d hi = inliers.colwise().maxCoeff();
    for (Index j = 0; j < m; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        for (Index c = 0; c < 2; ++c) inst.scene_xy(j, c) = lo(c) + (hi(c) - lo(c)) * 0.5 * (unit(rng) + 1.0);
    }
    return inst;
}

} // namespace support
