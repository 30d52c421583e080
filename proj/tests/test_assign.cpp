#include "support.hpp"

#include "homsense/assign.hpp"
#include "homsense/errors.hpp"

#include <doctest.h>

using namespace homsense;

namespace {

Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Index>(xs.size()));
    Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

double map_cost(const Vector& a, const Vector& b, const AssignmentMap& s) {
    double c = 0.0;
    for (Index t = 0; t < a.size(); ++t) c += (a(t) - b(s[t])) * (a(t) - b(s[t]));
    return c;
}

double brute_increasing(const Vector& a, const Vector& b) {
    double best = std::numeric_limits<double>::infinity();
    support::each_injection(a.size(), b.size(), [&](const std::vector<Index>& s) {
        if (!std::is_sorted(s.begin(), s.end())) return;
        double c = 0.0;
        for (Index t = 0; t < a.size(); ++t) c += (a(t) - b(s[t])) * (a(t) - b(s[t]));
        best = std::min(best, c);
    });
    return best;
}

} // namespace

TEST_CASE("AssignmentMap validity") {
    CHECK(AssignmentMap(3, {0, 2}).is_injective());
    CHECK(AssignmentMap(3, {0, 2}).is_order_preserving());
    CHECK_FALSE(AssignmentMap(3, {2, 0}).is_order_preserving());
    CHECK_FALSE(AssignmentMap(3, {1, 1}).is_injective());
    CHECK_FALSE(AssignmentMap(3, {3}).is_injective());
    CHECK_THROWS_AS(AssignmentMap(2, {0, 0}).validate(), PreconditionError);
    CHECK(AssignmentMap::identity(2, 4).map == std::vector<Index>{0, 1});
}

TEST_CASE("dp_align examples") {
    auto r = dp_align(vec({2, 1}), vec({2, 1}));
    CHECK(r.cost == 0.0);
    CHECK(r.map.map == std::vector<Index>{0, 1});

    r = dp_align(vec({3}), vec({5, 2, 1}));
    CHECK(r.cost == doctest::Approx(1.0));
    CHECK(r.map.map == std::vector<Index>{1});

    r = dp_align(vec({5, 1}), vec({5, 3, 1}));
    CHECK(r.cost == 0.0);
    CHECK(r.map.map == std::vector<Index>{0, 2});
}

TEST_CASE("dp_align errors") {
    CHECK_THROWS_AS(dp_align(vec({3, 2, 1}), vec({2, 1})), PreconditionError);
    CHECK_THROWS_AS(dp_align(vec({1, 2}), vec({3, 2, 1})), PreconditionError);
    CHECK_THROWS_AS(dp_align(vec({2, 1}), vec({1, 2, 3})), PreconditionError);
}

TEST_CASE("dp_align tie prefers skipping the later candidate") {
    // Matching either candidate costs 0; skipping b[1] keeps the match with b[0].
    const auto r = dp_align(vec({1}), vec({1, 1}));
    CHECK(r.cost == 0.0);
    CHECK(r.map.map == std::vector<Index>{0});
}

TEST_CASE("dp_align equals the exhaustive optimum over increasing maps") {
    Rng rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        const Index m = 1 + trial % 8;
        const Index k = 1 + (trial / 8) % m;
        Vector a = gaussian_vector(k, rng), b = gaussian_vector(m, rng);
        std::sort(a.data(), a.data() + k, std::greater<>());
        std::sort(b.data(), b.data() + m, std::greater<>());
        const auto r = dp_align(a, b);
        CHECK(r.map.is_order_preserving());
        CHECK(std::abs(r.cost - brute_increasing(a, b)) < 1e-12);
        CHECK(std::abs(r.cost - map_cost(a, b, r.map)) < 1e-12);
    }
}

TEST_CASE("dp_align cost never increases when a candidate is appended") {
    Rng rng(22);
    for (int trial = 0; trial < 200; ++trial) {
        const Index m = 2 + trial % 10;
        const Index k = 1 + trial % m;
        Vector a = gaussian_vector(k, rng), b = gaussian_vector(m, rng);
        std::sort(a.data(), a.data() + k, std::greater<>());
        const double extra = std::normal_distribution<double>()(rng);
        Vector b2(m + 1);
        b2 << b, extra;
        std::sort(b.data(), b.data() + m, std::greater<>());
        std::sort(b2.data(), b2.data() + m + 1, std::greater<>());
        CHECK(dp_align(a, b2).cost <= dp_align(a, b).cost + 1e-15);
    }
}

TEST_CASE("recover_selection examples") {
    const auto r = recover_selection(vec({1, 3}), vec({3, 0, 1}));
    CHECK(r.cost == 0.0);
    CHECK(r.map.map == std::vector<Index>{2, 0});

    Rng rng(23);
    const Vector z = gaussian_vector(9, rng);
    const auto p = random_permutation(9, rng);
    CHECK(recover_selection(select_entries(z, p), z).cost == 0.0);
    CHECK_THROWS_AS(recover_selection(vec({1, 2, 3}), vec({1, 2})), PreconditionError);
}

TEST_CASE("recover_selection equals the exhaustive minimum over injective maps") {
    Rng rng(24);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 500; ++trial) {
        const Index m = 1 + trial % 8;
        const Index k = 1 + (trial / 8) % std::min<Index>(5, m);
        const Vector z = gaussian_vector(m, rng);
        Vector y = gaussian_vector(k, rng);
        if (trial % 2 == 0) {
            const auto s = random_injection(k, m, rng);
            for (Index t = 0; t < k; ++t) y(t) = z(s[t]) + 0.01 * normal(rng);
        }
        const auto r = recover_selection(y, z);
        CHECK(r.map.is_injective());
        CHECK(r.map.codomain_size == m);
        CHECK(std::abs(r.cost - map_cost(y, z, r.map)) < 1e-12);
        CHECK(std::abs(r.cost - support::brute_matching_cost(y, z)) < 1e-12);
    }
}

TEST_CASE("recover_selection is exact on permuted sub-vectors") {
    Rng rng(25);
    for (int trial = 0; trial < 100; ++trial) {
        const Index m = 5 + trial % 40;
        const Index k = 1 + trial % m;
        const Vector z = gaussian_vector(m, rng);
        const auto s = random_injection(k, m, rng);
        const auto r = recover_selection(select_entries(z, s), z);
        CHECK(r.cost == 0.0);
        CHECK(r.map.map == s);
    }
}

TEST_CASE("SelectionScorer matches recover_selection") {
    Rng rng(26);
    const Vector y = gaussian_vector(7, rng);
    SelectionScorer scorer(y);
    for (int trial = 0; trial < 50; ++trial) {
        const Vector z = gaussian_vector(12, rng);
        const auto want = recover_selection(y, z);
        const auto got = scorer.solve(z);
        CHECK(got.cost == want.cost);
        CHECK(got.map == want.map);
        CHECK(scorer.cost(z) == want.cost);
    }
}

TEST_CASE("dp_align_unsorted optimizes over order-preserving maps of raw sequences") {
    Rng rng(27);
    for (int trial = 0; trial < 200; ++trial) {
        const Index m = 1 + trial % 7;
        const Index k = 1 + (trial / 7) % m;
        const Vector a = gaussian_vector(k, rng), b = gaussian_vector(m, rng);
        const auto r = dp_align_unsorted(a, b);
        CHECK(r.map.is_order_preserving());
        CHECK(std::abs(r.cost - brute_increasing(a, b)) < 1e-12);
    }
}

TEST_CASE("lap_solve examples") {
    Matrix c = Matrix::Ones(3, 3) - Matrix::Identity(3, 3);
    auto r = lap_solve(c);
    CHECK(r.map.map == std::vector<Index>{0, 1, 2});
    CHECK(r.total == 0.0);

    Matrix d(2, 2);
    d << 1, 2, 2, 1;
    r = lap_solve(d);
    CHECK(r.map.map == std::vector<Index>{0, 1});
    CHECK(r.total == 2.0);

    CHECK_THROWS_AS(lap_solve(Matrix::Ones(3, 2)), PreconditionError);
    Matrix bad = Matrix::Ones(2, 2);
    bad(1, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(lap_solve(bad), NumericalError);
}

TEST_CASE("lap_solve equals the exhaustive optimum") {
    Rng rng(28);
    for (int trial = 0; trial < 200; ++trial) {
        const Index m = 1 + trial % 7;
        const Index k = 1 + (trial / 7) % std::min<Index>(6, m);
        const Matrix cost = gaussian_matrix(k, m, rng).cwiseAbs();
        const auto r = lap_solve(cost);
        CHECK(r.map.is_injective());
        double total = 0.0;
        for (Index t = 0; t < k; ++t) total += cost(t, r.map[t]);
        CHECK(std::abs(total - r.total) < 1e-12);
        CHECK(std::abs(total - support::brute_lap_total(cost)) < 1e-12);
    }
}

TEST_CASE("lap_solve handles negative and tied costs") {
    Matrix c(2, 3);
    c << -5, -5, 0, -5, -5, 0;
    const auto r = lap_solve(c);
    CHECK(r.total == -10.0);
    CHECK(r.map.is_injective());
}
