#pragma once

#include "homsense/numerics.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace homsense {

using Rng = std::mt19937_64;

inline Matrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix M(rows, cols);
    // Row-major fill order so that instances do not depend on Eigen's storage order.
    for (Index r = 0; r < rows; ++r) {
        for (Index c = 0; c < cols; ++c) M(r, c) = normal(rng);
    }
    return M;
}

inline Vector gaussian_vector(Index n, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = normal(rng);
    return v;
}

/// Uniform random permutation of 0..m-1 (images[i] = pi(i)).
inline std::vector<Index> random_permutation(Index m, Rng& rng) {
    std::vector<Index> p(static_cast<std::size_t>(m));
    std::iota(p.begin(), p.end(), Index{0});
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

/// Uniform random injective map [k] -> [m].
inline std::vector<Index> random_injection(Index k, Index m, Rng& rng) {
    auto p = random_permutation(m, rng);
    p.resize(static_cast<std::size_t>(k));
    return p;
}

} // namespace homsense
