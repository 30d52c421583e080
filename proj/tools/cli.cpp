#include "cli.hpp"

#include "homsense/baselines.hpp"
#include "homsense/bench.hpp"
#include "homsense/errors.hpp"
#include "homsense/io.hpp"
#include "homsense/registration.hpp"
#include "homsense/solver_bnb.hpp"
#include "homsense/solver_enum.hpp"
#include "homsense/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

namespace homsense::cli {

namespace {

using json = nlohmann::json;

std::vector<double> to_list(const Vector& v) { return {v.data(), v.data() + v.size()}; }

std::vector<Index> one_based(const AssignmentMap& map) {
    std::vector<Index> out(map.map);
    for (Index& j : out) ++j;
    return out;
}

void write_json(const std::optional<std::string>& path, const json& j) {
    const std::string text = j.dump(2) + "\n";
    if (!path) {
        std::cout << text;
        return;
    }
    std::ofstream out(*path);
    if (!out) throw ParseError(*path + ": cannot open for writing");
    out << text;
}

std::shared_ptr<spdlog::logger> make_logger() {
    auto logger = spdlog::get("homsense");
    if (!logger) logger = spdlog::stderr_color_mt("homsense");
    logger->set_pattern("[%l] %v");
    spdlog::level::level_enum level = spdlog::level::info;
    if (const char* env = std::getenv("HOMSENSE_LOG")) {
        const std::string v(env);
        if (v == "error") level = spdlog::level::err;
        else if (v == "debug") level = spdlog::level::debug;
        else if (v == "info") level = spdlog::level::info;
    }
    logger->set_level(level);
    return logger;
}

struct SolveArgs {
    std::string matrix, obs, method;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    int max_depth = 6;
    std::optional<double> budget;
    double gap_tol = 0.0;
    std::optional<double> half_width;
    double cond_max = 1e8;
    bool no_refine = false;
    int restarts = 1;
    std::optional<double> lambda;
    int max_iters = 100;
    unsigned workers = 1;
};

int cmd_solve(const SolveArgs& a, spdlog::logger& log) {
    const Matrix A = io::read_matrix_csv(a.matrix);
    const Vector y = io::read_vector_csv(a.obs);
    if (y.size() > A.rows()) {
        throw PreconditionError("k = " + std::to_string(y.size()) + " observations exceed m = " +
                                std::to_string(A.rows()) + " rows of A");
    }
    log.info("solve: method {}, m = {}, n = {}, k = {}", a.method, A.rows(), A.cols(), y.size());

    json j;
    j["method"] = a.method;
    SolveResult r;
    if (a.method == "bnb") {
        BnbConfig cfg;
        cfg.max_depth = a.max_depth;
        cfg.time_budget = a.budget;
        cfg.gap_tol = a.gap_tol;
        cfg.workers = a.workers;
        if (a.half_width) {
            if (!(*a.half_width > 0.0)) throw PreconditionError("--box-half-width must be positive");
            cfg.initial_box = Box{Vector::Zero(A.cols()), Vector::Constant(A.cols(), *a.half_width)};
        }
        r = solve_bnb(A, y, cfg);
    } else if (a.method == "enum") {
        if (!a.seed) throw PreconditionError("method enum draws a random sub-vector and requires --seed");
        EnumConfig cfg;
        cfg.seed = *a.seed;
        cfg.cond_max = a.cond_max;
        cfg.refine = !a.no_refine;
        cfg.restarts = a.restarts;
        cfg.workers = a.workers;
        r = solve_enum(A, y, cfg);
    } else if (a.method == "altmin-sort") {
        r = altmin_sort(A, y, std::nullopt, a.max_iters);
    } else if (a.method == "altmin-op") {
        r = altmin_order_preserving(A, y, std::nullopt, a.max_iters);
    } else if (a.method == "robust-l1") {
        if (!a.lambda) throw PreconditionError("method robust-l1 requires --lambda (there is no default)");
        const auto rr = robust_l1(A, y, *a.lambda);
        r.x_hat = rr.x;
        if (y.size() == A.rows()) r.assignment = AssignmentMap::identity(y.size(), A.rows());
        r.residual = (y - A * rr.x).norm();
        r.nodes_expanded = static_cast<std::size_t>(rr.iterations);
        j["e"] = to_list(rr.e);
        j["objective"] = rr.objective;
    }
    j["x_hat"] = to_list(r.x_hat);
    j["assignment"] = one_based(r.assignment);
    j["residual"] = r.residual;
    j["nodes_expanded"] = r.nodes_expanded;
    j["wall_time"] = r.wall_time;
    j["terminated_by"] = std::string(to_string(r.terminated_by));
    write_json(a.out, j);
    log.info("solve: residual {:.6g}, {} nodes/iterations, {:.3f} s", r.residual, r.nodes_expanded, r.wall_time);
    return kSuccess;
}

struct RegisterArgs {
    std::string model, scene;
    double budget = 60.0;
    int max_depth = 18;
    double gap_tol = 1e-9;
    bool no_normalize = false;
    unsigned workers = 1;
    std::optional<std::string> out;
};

int cmd_register(const RegisterArgs& a, spdlog::logger& log) {
    const Matrix P = io::read_matrix_csv(a.model);
    const Matrix Q = io::read_matrix_csv(a.scene);
    const auto prob = RegistrationProblem::from_points(P, Q);
    RegistrationConfig cfg;
    cfg.bnb.time_budget = a.budget;
    cfg.bnb.max_depth = a.max_depth;
    cfg.bnb.gap_tol = a.gap_tol;
    cfg.bnb.workers = a.workers;
    cfg.normalize = !a.no_normalize;
    log.info("register: k = {} model points, m = {} scene points, budget {} s", prob.k(), prob.m(), a.budget);
    const auto r = register_bnb(prob, cfg);

    json j;
    std::vector<double> T;
    for (Index row = 0; row < 3; ++row) {
        for (Index col = 0; col < 2; ++col) T.push_back(r.transform.T(row, col));
    }
    j["T"] = T;
    j["assignment"] = one_based(r.assignment);
    j["residual"] = r.residual;
    j["nodes_expanded"] = r.nodes_expanded;
    j["wall_time"] = r.wall_time;
    j["terminated_by"] = std::string(to_string(r.terminated_by));
    write_json(a.out, j);
    log.info("register: residual {:.6g} after {} nodes ({:.2f} s, {})", r.residual, r.nodes_expanded, r.wall_time,
             to_string(r.terminated_by));
    return kSuccess;
}

struct BenchArgs {
    std::string grid;
    std::uint64_t seed = 0;
    std::string out;
    std::optional<std::string> summary;
    std::optional<unsigned> workers;
};

int cmd_bench(const BenchArgs& a, spdlog::logger& log) {
    GridConfig cfg = GridConfig::from_json(io::read_text_file(a.grid));
    cfg.seed0 = a.seed;
    if (a.workers) cfg.workers = *a.workers;
    const auto records = run_benchmark(cfg);
    std::ofstream out(a.out);
    if (!out) throw ParseError(a.out + ": cannot open for writing");
    write_records_csv(out, records);
    const auto summary = summarize(records);
    if (a.summary) {
        std::ofstream s(*a.summary);
        if (!s) throw ParseError(*a.summary + ": cannot open for writing");
        write_summary_csv(s, summary);
    }
    for (const auto& c : summary) {
        log.info("{:<24} n={} m={} k={} shuffle={} sigma={}: median {:.3g} [{:.3g}, {:.3g}]", c.method, c.n, c.m, c.k,
                 c.shuffle_ratio, c.sigma, c.median, c.q1, c.q3);
    }
    return kSuccess;
}

struct VerifyArgs {
    std::string suite = "all";
    std::uint64_t seed = 0;
    std::optional<std::string> out;
    bool force_below_threshold = false;
};

int cmd_verify(const VerifyArgs& a, spdlog::logger& log) {
    theory::VerifyOptions opt;
    opt.seed = a.seed;
    opt.force_below_threshold = a.force_below_threshold;
    const auto checks = theory::run_verify_suite(a.suite, opt);
    json j;
    j["suite"] = a.suite;
    j["seed"] = a.seed;
    bool all_passed = true;
    json list = json::array();
    for (const auto& c : checks) {
        all_passed = all_passed && c.passed;
        list.push_back({{"name", c.name},
                        {"passed", c.passed},
                        {"trials", c.trials},
                        {"failures", c.failures},
                        {"flakes", c.flakes},
                        {"worst_margin", c.worst_margin},
                        {"detail", c.detail}});
        if (c.passed) log.info("PASS {} ({} trials)", c.name, c.trials);
        else log.error("FAIL {} ({} of {} trials failed)", c.name, c.failures, c.trials);
    }
    j["checks"] = list;
    j["passed"] = all_passed;
    write_json(a.out, j);
    return all_passed ? kSuccess : kVerificationFailure;
}

} // namespace

int run(const std::vector<std::string>& args) {
    auto log = make_logger();
    CLI::App app{"Unlabeled sensing solvers, affine point-set registration and recovery-theory checks", "homsense"};
    app.require_subcommand(1);

    SolveArgs solve;
    auto* sc = app.add_subcommand("solve", "Recover x from shuffled/subsampled measurements y ~ S A x");
    sc->add_option("--matrix", solve.matrix, "A as CSV (m rows, n columns)")->required();
    sc->add_option("--obs", solve.obs, "y as single-column CSV (k rows)")->required();
    sc->add_option("--method", solve.method, "Solver")
        ->required()
        ->check(CLI::IsMember({"bnb", "enum", "altmin-sort", "robust-l1", "altmin-op"}));
    sc->add_option("--seed", solve.seed, "Random seed (required by enum)");
    sc->add_option("--out", solve.out, "Result JSON path (stdout when omitted)");
    sc->add_option("--max-depth", solve.max_depth, "bnb: maximum split depth")->capture_default_str();
    sc->add_option("--budget", solve.budget, "bnb: time budget in seconds");
    sc->add_option("--gap-tol", solve.gap_tol, "bnb: stop when incumbent - best bound <= gap")->capture_default_str();
    sc->add_option("--box-half-width", solve.half_width, "bnb: half-width of the search cube around 0");
    sc->add_option("--cond-max", solve.cond_max, "enum: skip row tuples above this condition number")->capture_default_str();
    sc->add_flag("--no-refine", solve.no_refine, "enum: skip the final alternating refinement");
    sc->add_option("--restarts", solve.restarts, "enum: independent random sub-vectors")->capture_default_str();
    sc->add_option("--lambda", solve.lambda, "robust-l1: sparsity weight (required)");
    sc->add_option("--max-iters", solve.max_iters, "altmin-*: iteration cap")->capture_default_str();
    sc->add_option("--workers", solve.workers, "Parallel workers")->capture_default_str();

    RegisterArgs reg;
    auto* rc = app.add_subcommand("register", "Affine registration of a model point set into a scene point set");
    rc->add_option("--model", reg.model, "Model points P as CSV (k rows, x,y)")->required();
    rc->add_option("--scene", reg.scene, "Scene points Q as CSV (m rows, x,y)")->required();
    rc->add_option("--budget", reg.budget, "Time budget in seconds")->capture_default_str();
    rc->add_option("--max-depth", reg.max_depth, "Maximum split depth")->capture_default_str();
    rc->add_option("--gap-tol", reg.gap_tol, "Stop when incumbent - best bound <= gap")->capture_default_str();
    rc->add_flag("--no-normalize", reg.no_normalize, "Search in the raw coordinates");
    rc->add_option("--workers", reg.workers, "Parallel workers")->capture_default_str();
    rc->add_option("--out", reg.out, "Result JSON path (stdout when omitted)");

    BenchArgs bench;
    auto* bc = app.add_subcommand("bench", "Run a benchmark grid of synthetic instances");
    bc->add_option("--grid", bench.grid, "Grid JSON file")->required();
    bc->add_option("--seed", bench.seed, "Base seed; trial t uses seed + t")->required();
    bc->add_option("--out", bench.out, "Records CSV path")->required();
    bc->add_option("--summary", bench.summary, "Per-cell summary CSV path");
    bc->add_option("--workers", bench.workers, "Parallel trials");

    VerifyArgs verify;
    auto* vc = app.add_subcommand("verify", "Numerical checks of the unique-recovery theory");
    vc->add_option("--suite", verify.suite, "Suite to run")
        ->check(CLI::IsMember({"eigen", "uniqueness", "generic-point", "lemma2", "intersection", "all"}))
        ->capture_default_str();
    vc->add_option("--seed", verify.seed, "Random seed")->required();
    vc->add_option("--out", verify.out, "Report JSON path (stdout when omitted)");
    vc->add_flag("--force-below-threshold", verify.force_below_threshold,
                 "generic-point: run the positive check at k = n (negative control; must fail)");

    std::vector<std::string> argv_rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(argv_rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kSuccess : kUsageError;
    }

    try {
        if (*sc) return cmd_solve(solve, *log);
        if (*rc) return cmd_register(reg, *log);
        if (*bc) return cmd_bench(bench, *log);
        if (*vc) return cmd_verify(verify, *log);
    } catch (const ParseError& e) {
        log->error("input error: {}", e.what());
        return kInputError;
    } catch (const DimensionError& e) {
        log->error("dimension mismatch: {}", e.what());
        return kInputError;
    } catch (const PreconditionError& e) {
        log->error("precondition violated: {}", e.what());
        return kPreconditionError;
    } catch (const NumericalError& e) {
        log->error("numerical failure: {}", e.what());
        return kPreconditionError;
    } catch (const std::exception& e) {
        log->error("internal error: {}", e.what());
        return kInternalError;
    }
    return kUsageError;
}

} // namespace homsense::cli
