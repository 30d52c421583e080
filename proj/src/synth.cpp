#include "homsense/synth.hpp"

#include "homsense/errors.hpp"
#include "homsense/random.hpp"

#include <cmath>
#include <cstring>
#include <iterator>
#include <string>

namespace homsense {

Index shuffled_count(Index k, double shuffle_ratio) {
    auto c = static_cast<Index>(std::ceil(shuffle_ratio * static_cast<double>(k) - 1e-9));
    c = std::clamp<Index>(c, 0, k);
    // A single position cannot be deranged; move two instead.
    if (c == 1) c = k >= 2 ? 2 : 0;
    return c;
}

ProblemInstance gen_instance(Index n, Index m, Index k, double shuffle_ratio, double sigma, std::uint64_t seed) {
    if (n < 1) throw PreconditionError("gen_instance: n must be >= 1");
    if (!(n <= k && k <= m)) {
        throw PreconditionError("gen_instance: need n <= k <= m (got n = " + std::to_string(n) + ", k = " +
                                std::to_string(k) + ", m = " + std::to_string(m) + ")");
    }
    if (!(shuffle_ratio >= 0.0 && shuffle_ratio <= 1.0)) throw PreconditionError("gen_instance: shuffle ratio must be in [0, 1]");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw PreconditionError("gen_instance: sigma must be >= 0");

    Rng rng(seed);
    ProblemInstance inst;
    inst.n = n;
    inst.m = m;
    inst.k = k;
    inst.sigma = sigma;
    inst.shuffle_ratio = shuffle_ratio;
    inst.seed = seed;
    inst.A = gaussian_matrix(m, n, rng);
    inst.x_star = gaussian_vector(n, rng);
    const Vector z = inst.A * inst.x_star;

    std::vector<Index> all(static_cast<std::size_t>(m));
    std::iota(all.begin(), all.end(), Index{0});
    std::vector<Index> kept;
    std::sample(all.begin(), all.end(), std::back_inserter(kept), k, rng);

    const Index c = shuffled_count(k, shuffle_ratio);
    std::vector<Index> positions(static_cast<std::size_t>(k));
    std::iota(positions.begin(), positions.end(), Index{0});
    std::vector<Index> moved;
    std::sample(positions.begin(), positions.end(), std::back_inserter(moved), c, rng);
    std::vector<Index> derangement;
    if (c >= 2) {
        for (;;) {
            derangement = random_permutation(c, rng);
            bool fixed_point = false;
            for (Index i = 0; i < c; ++i) fixed_point |= derangement[static_cast<std::size_t>(i)] == i;
            if (!fixed_point) break;
        }
    }

    std::vector<Index> s = kept;
    for (Index i = 0; i < c; ++i) {
        const auto src = moved[static_cast<std::size_t>(derangement[static_cast<std::size_t>(i)])];
        s[static_cast<std::size_t>(moved[static_cast<std::size_t>(i)])] = kept[static_cast<std::size_t>(src)];
    }
    inst.s_star = AssignmentMap(m, std::move(s));
    inst.noise = sigma * gaussian_vector(k, rng);
    inst.y = select_entries(z, inst.s_star.map) + inst.noise;
    return inst;
}

double relative_error(const Vector& x_hat, const Vector& x_star) {
    if (x_hat.size() != x_star.size()) throw DimensionError("relative_error: length mismatch");
    const double denom = x_star.norm();
    if (!(denom > 0.0)) throw PreconditionError("relative_error: ground truth has zero norm");
    return (x_hat - x_star).norm() / denom;
}

std::uint64_t instance_hash(const ProblemInstance& inst) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&](const void* data, std::size_t bytes) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < bytes; ++i) {
            h ^= p[i];
            h *= 1099511628211ull;
        }
    };
    const std::int64_t dims[3] = {inst.A.rows(), inst.A.cols(), inst.y.size()};
    mix(dims, sizeof(dims));
    mix(inst.A.data(), sizeof(double) * static_cast<std::size_t>(inst.A.size()));
    mix(inst.y.data(), sizeof(double) * static_cast<std::size_t>(inst.y.size()));
    return h;
}

} // namespace homsense
