#include "support.hpp"

#include "homsense/errors.hpp"
#include "homsense/solver_bnb.hpp"
#include "homsense/synth.hpp"

#include <doctest.h>

using namespace homsense;

namespace {

double optimal_residual(const Matrix& A, const Vector& y, const Vector& x) {
    return std::sqrt(recover_selection(y, A * x).cost);
}

BnbConfig depth(int d) {
    BnbConfig cfg;
    cfg.max_depth = d;
    return cfg;
}

} // namespace

TEST_CASE("lower_bound formula") {
    CHECK(lower_bound(5.0, 2.0, 1.0) == 3.0);
    CHECK(lower_bound(1.0, 2.0, 1.0) == 0.0);
    CHECK(lower_bound(0.7, 4.0, 0.0) == 0.7);
}

TEST_CASE("split_longest_edge halves the longest coordinate") {
    Box b{Vector::Zero(3), (Vector(3) << 1, 4, 2).finished()};
    const auto [lo, hi] = split_longest_edge(b);
    CHECK(lo.half_widths(1) == 2.0);
    CHECK(hi.half_widths(1) == 2.0);
    CHECK(lo.center(1) == -2.0);
    CHECK(hi.center(1) == 2.0);
    CHECK(lo.half_widths(0) == 1.0);
    CHECK(lo.center(0) == 0.0);

    Box cube{Vector::Zero(2), Vector::Ones(2)};
    const auto [a, c] = split_longest_edge(cube);
    CHECK(a.half_widths(0) == 0.5);
    CHECK(c.half_widths(1) == 1.0);
}

TEST_CASE("box validation") {
    CHECK_THROWS_AS((Box{Vector::Zero(2), (Vector(2) << 1, 0).finished()}).validate(), PreconditionError);
    CHECK_THROWS_AS((Box{Vector(), Vector()}).validate(), PreconditionError);
    CHECK_THROWS_AS((Box{Vector::Zero(2), Vector::Ones(3)}).validate(), DimensionError);
}

TEST_CASE("altmin_upper fixed point and square permutation case") {
    const auto inst = gen_instance(3, 20, 15, 1.0, 0.0, 31);
    const auto r = altmin_upper(inst.A, inst.y, inst.x_star, 50, 1e-9);
    CHECK(r.residual < 1e-12);
    CHECK(r.iterations == 1);
    CHECK((r.x - inst.x_star).norm() < 1e-10);

    // A = I3: any selection yields an exactly solvable square system.
    const Vector x_star = (Vector(3) << 0.3, -1.2, 2.5).finished();
    const Vector y = (Vector(3) << x_star(2), x_star(0), x_star(1)).finished();
    const auto id = altmin_upper(Matrix::Identity(3, 3), y, Vector::Zero(3), 50, 1e-9);
    CHECK(id.residual < 1e-12);
    CHECK(id.iterations == 1);
}

TEST_CASE("altmin_upper residual sequence is monotone") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto inst = gen_instance(3, 25, 20, 1.0, 0.1, 100 + seed);
        Rng rng(seed);
        const auto r = altmin_upper(inst.A, inst.y, gaussian_vector(3, rng), 50, 0.0);
        for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] <= r.history[i - 1] + 1e-12);
        CHECK(std::abs(r.residual - assignment_residual(inst.A, inst.y, r.x, r.map)) < 1e-10);
    }
}

TEST_CASE("solve_bnb one-dimensional example") {
    BnbConfig cfg;
    cfg.initial_box = Box{Vector::Zero(1), Vector::Constant(1, 10.0)};
    const auto r = solve_bnb(Matrix::Ones(3, 1), Vector::Constant(3, 2.0), cfg);
    CHECK(r.x_hat(0) == doctest::Approx(2.0));
    CHECK(r.residual < 1e-12);
}

TEST_CASE("solve_bnb identity example") {
    const auto r = solve_bnb(Matrix::Identity(3, 3), (Vector(3) << 1, 2, 3).finished());
    CHECK(r.residual < 1e-12);
    CHECK((r.x_hat - Vector::LinSpaced(3, 1, 3)).norm() < 1e-10);
}

TEST_CASE("solve_bnb matches exhaustive search on small noiseless instances") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto inst = gen_instance(2, 6, 6, 1.0, 0.0, 200 + seed);
        const auto brute = support::brute_regression(inst.A, inst.y);
        const auto r = solve_bnb(inst.A, inst.y, depth(12));
        CHECK(brute.residual < 1e-10);
        CHECK(r.residual < 1e-9);
        CHECK((r.x_hat - inst.x_star).norm() < 1e-6);
    }
}

TEST_CASE("solve_bnb noisy result is within the certified distance of the global optimum") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto inst = gen_instance(2, 6, 5, 1.0, 0.1, 300 + seed);
        const auto brute = support::brute_regression(inst.A, inst.y);
        const int d = 16;
        const auto r = solve_bnb(inst.A, inst.y, depth(d));
        Box leaf = default_box(inst.A, inst.y);
        for (int i = 0; i < d; ++i) leaf = split_longest_edge(leaf).first;
        CHECK(r.residual >= brute.residual - 1e-9);
        CHECK(r.residual <= brute.residual + sigma_max(inst.A) * leaf.half_diagonal() + 1e-9);
        // In practice the alternation from a nearby center lands on the optimum itself.
        CHECK(r.residual == doctest::Approx(brute.residual).epsilon(1e-9));
    }
}

TEST_CASE("Lipschitz premise of the lower bound") {
    Rng rng(41);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int box = 0; box < 10; ++box) {
        const auto inst = gen_instance(3, 15, 12, 0.5, 0.05, 400 + box);
        const double s1 = sigma_max(inst.A);
        const Vector c = gaussian_vector(3, rng);
        const Vector hw = gaussian_vector(3, rng).cwiseAbs();
        const double rc = optimal_residual(inst.A, inst.y, c);
        for (int i = 0; i < 100; ++i) {
            Vector x = c;
            for (Index j = 0; j < 3; ++j) x(j) += hw(j) * unit(rng);
            const double rx = optimal_residual(inst.A, inst.y, x);
            CHECK(std::abs(rx - rc) <= s1 * (x - c).norm() + 1e-9);
            CHECK(rx >= lower_bound(rc, s1, hw.norm()) - 1e-9);
        }
    }
}

TEST_CASE("solve_bnb incumbent history is decreasing and residual is consistent") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = gen_instance(3, 20, 16, 1.0, 0.05, 500 + seed);
        const auto r = solve_bnb(inst.A, inst.y, depth(8));
        REQUIRE(!r.history.empty());
        for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] < r.history[i - 1]);
        CHECK(r.history.back() == r.residual);
        CHECK(std::abs(r.residual - assignment_residual(inst.A, inst.y, r.x_hat, r.assignment)) < 1e-10);
        CHECK(r.assignment.is_injective());
    }
}

TEST_CASE("pruning does not change the result") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto inst = gen_instance(2, 7, 6, 1.0, 0.0, 600 + seed);
        BnbConfig pruned = depth(8);
        BnbConfig full = pruned;
        full.prune = false;
        const auto a = solve_bnb(inst.A, inst.y, pruned);
        const auto b = solve_bnb(inst.A, inst.y, full);
        CHECK(std::abs(a.residual - b.residual) < 1e-9);
        CHECK(b.nodes_expanded == (std::size_t{1} << 9) - 1);
        CHECK(a.nodes_expanded <= b.nodes_expanded);
    }
}

TEST_CASE("solve_bnb is deterministic") {
    const auto inst = gen_instance(3, 20, 15, 0.7, 0.02, 700);
    const auto a = solve_bnb(inst.A, inst.y, depth(9));
    const auto b = solve_bnb(inst.A, inst.y, depth(9));
    CHECK(a.x_hat == b.x_hat);
    CHECK(a.assignment == b.assignment);
    CHECK(a.residual == b.residual);
    CHECK(a.nodes_expanded == b.nodes_expanded);
    CHECK(a.history == b.history);
    CHECK(a.terminated_by == b.terminated_by);
}

TEST_CASE("parallel workers find the same optimum") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto inst = gen_instance(3, 16, 16, 1.0, 0.0, 800 + seed);
        BnbConfig cfg = depth(12);
        const auto serial = solve_bnb(inst.A, inst.y, cfg);
        cfg.workers = 4;
        const auto parallel = solve_bnb(inst.A, inst.y, cfg);
        CHECK(std::abs(serial.residual - parallel.residual) < 1e-9);
    }
}

TEST_CASE("termination reasons") {
    const auto inst = gen_instance(3, 30, 24, 1.0, 0.01, 900);

    BnbConfig budget = depth(40);
    budget.time_budget = 0.0;
    const auto b = solve_bnb(inst.A, inst.y, budget);
    CHECK(b.terminated_by == Termination::budget);
    CHECK(b.nodes_expanded == 1);

    const auto d = solve_bnb(inst.A, inst.y, depth(3));
    CHECK(d.terminated_by == Termination::depth);

    BnbConfig gap = depth(40);
    gap.gap_tol = 1e6;
    const auto g = solve_bnb(inst.A, inst.y, gap);
    CHECK(g.terminated_by == Termination::gap);

    // An exactly zero incumbent prunes every remaining node.
    const auto e = solve_bnb(Matrix::Identity(3, 3), Vector::LinSpaced(3, 1, 3), depth(40));
    CHECK(e.residual == 0.0);
    CHECK(e.terminated_by == Termination::exhausted);
    CHECK(e.nodes_expanded == 1);

    // Round-off keeps a noiseless incumbent slightly above 0; a tiny gap tolerance ends the search.
    const auto clean = gen_instance(2, 8, 8, 1.0, 0.0, 901);
    BnbConfig tiny = depth(40);
    tiny.gap_tol = 1e-9;
    const auto t = solve_bnb(clean.A, clean.y, tiny);
    CHECK(t.residual < 1e-10);
    CHECK(t.terminated_by == Termination::gap);
    CHECK(t.nodes_expanded < 1000);
    CHECK(to_string(Termination::gap) == "gap");
}

TEST_CASE("default box contains exact solutions") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto inst = gen_instance(3, 20, 12, 1.0, 0.0, 950 + seed);
        const Box box = default_box(inst.A, inst.y);
        CHECK(box.center.isZero());
        CHECK(((inst.x_star - box.center).cwiseAbs().array() <= box.half_widths.array()).all());
    }
}

TEST_CASE("solve_bnb errors") {
    const Matrix A = Matrix::Ones(3, 2);
    CHECK_THROWS_AS(solve_bnb(A, Vector::Ones(4)), PreconditionError);
    BnbConfig cfg;
    cfg.initial_box = Box{Vector::Zero(2), Vector::Zero(2)};
    CHECK_THROWS_AS(solve_bnb(A, Vector::Ones(3), cfg), PreconditionError);
    cfg.initial_box = Box{Vector::Zero(3), Vector::Ones(3)};
    CHECK_THROWS_AS(solve_bnb(A, Vector::Ones(3), cfg), DimensionError);
    BnbConfig neg;
    neg.max_depth = -1;
    CHECK_THROWS_AS(solve_bnb(Matrix::Identity(2, 2), Vector::Ones(2), neg), PreconditionError);
}
