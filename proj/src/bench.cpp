#include "homsense/bench.hpp"

#include "homsense/baselines.hpp"
#include "homsense/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <tuple>

namespace homsense {

namespace {

using json = nlohmann::json;

template <class T>
std::vector<T> read_list(const json& j, const char* key) {
    if (!j.contains(key)) throw ParseError(std::string("grid: missing key '") + key + "'");
    const json& v = j.at(key);
    if (v.is_array()) return v.get<std::vector<T>>();
    return {v.get<T>()};
}

} // namespace

GridConfig GridConfig::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("grid: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("grid: top level must be an object");
    GridConfig cfg;
    try {
        cfg.methods = read_list<std::string>(j, "methods");
        cfg.n = read_list<Index>(j, "n");
        cfg.m = read_list<Index>(j, "m");
        cfg.k = read_list<Index>(j, "k");
        cfg.shuffle_ratio = read_list<double>(j, "shuffle_ratio");
        cfg.sigma = read_list<double>(j, "sigma");
        cfg.trials = j.value("trials", std::size_t{1});
        cfg.seed0 = j.value("seed0", std::uint64_t{0});
        cfg.workers = j.value("workers", 1u);
        cfg.altmin_max_iters = j.value("altmin_max_iters", 100);
        if (j.contains("bnb")) {
            const json& b = j.at("bnb");
            cfg.bnb.max_depth = b.value("max_depth", cfg.bnb.max_depth);
            cfg.bnb.altmin_max_iters = b.value("altmin_max_iters", cfg.bnb.altmin_max_iters);
            cfg.bnb.altmin_tol = b.value("altmin_tol", cfg.bnb.altmin_tol);
            cfg.bnb.gap_tol = b.value("gap_tol", cfg.bnb.gap_tol);
            if (b.contains("time_budget")) cfg.bnb.time_budget = b.at("time_budget").get<double>();
        }
        if (j.contains("enum")) {
            const json& e = j.at("enum");
            cfg.enumeration.cond_max = e.value("cond_max", cfg.enumeration.cond_max);
            cfg.enumeration.refine = e.value("refine", cfg.enumeration.refine);
            cfg.enumeration.restarts = e.value("restarts", cfg.enumeration.restarts);
        }
        if (j.contains("robust_l1")) cfg.robust_l1_lambdas = read_list<double>(j.at("robust_l1"), "lambdas");
    } catch (const json::exception& e) {
        throw ParseError(std::string("grid: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

void GridConfig::validate() const {
    if (methods.empty()) throw ParseError("grid: no methods");
    for (const auto& method : methods) {
        if (std::find(kBenchMethods.begin(), kBenchMethods.end(), method) == kBenchMethods.end()) {
            throw ParseError("grid: unknown method '" + method + "'");
        }
        if (method == "robust-l1" && robust_l1_lambdas.empty()) {
            throw ParseError("grid: robust-l1 needs robust_l1.lambdas (no default lambda)");
        }
    }
    for (double l : robust_l1_lambdas) {
        if (!(l > 0.0)) throw PreconditionError("grid: robust-l1 lambdas must be positive");
    }
    if (trials < 1) throw PreconditionError("grid: trials must be >= 1");
    for (Index nn : n) {
        for (Index mm : m) {
            for (Index kk : k) {
                if (!(nn >= 1 && nn <= kk && kk <= mm)) {
                    throw PreconditionError("grid: every cell needs 1 <= n <= k <= m (n = " + std::to_string(nn) +
                                            ", k = " + std::to_string(kk) + ", m = " + std::to_string(mm) + ")");
                }
            }
        }
    }
    bnb.validate();
}

bool method_applies(const std::string& method, Index k, Index m) {
    if (method == "altmin-sort" || method == "robust-l1") return k == m;
    return true;
}

BenchRecord run_method(const std::string& method, const ProblemInstance& inst, const GridConfig& cfg) {
    BenchRecord rec;
    rec.method = method;
    rec.n = inst.n;
    rec.m = inst.m;
    rec.k = inst.k;
    rec.shuffle_ratio = inst.shuffle_ratio;
    rec.sigma = inst.sigma;
    rec.seed = inst.seed;
    rec.instance_hash = instance_hash(inst);

    const auto start = std::chrono::steady_clock::now();
    Vector x_hat;
    if (method == "bnb") {
        auto r = solve_bnb(inst.A, inst.y, cfg.bnb);
        x_hat = std::move(r.x_hat);
        rec.terminated_by = r.terminated_by;
    } else if (method == "enum") {
        EnumConfig ec = cfg.enumeration;
        ec.seed = inst.seed;
        auto r = solve_enum(inst.A, inst.y, ec);
        x_hat = std::move(r.x_hat);
        rec.terminated_by = r.terminated_by;
    } else if (method == "altmin-sort") {
        x_hat = altmin_sort(inst.A, inst.y, std::nullopt, cfg.altmin_max_iters).x_hat;
    } else if (method == "altmin-op") {
        x_hat = altmin_order_preserving(inst.A, inst.y, std::nullopt, cfg.altmin_max_iters).x_hat;
    } else if (method == "robust-l1") {
        rec.method = kRobustL1Label;
        double best = std::numeric_limits<double>::infinity();
        for (double lambda : cfg.robust_l1_lambdas) {
            Vector x = robust_l1(inst.A, inst.y, lambda).x;
            const double err = relative_error(x, inst.x_star);
            if (err < best) {
                best = err;
                x_hat = std::move(x);
            }
        }
    } else {
        throw ParseError("unknown method '" + method + "'");
    }
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rec.relative_error = relative_error(x_hat, inst.x_star);
    return rec;
}

std::vector<BenchRecord> run_benchmark(const GridConfig& cfg) {
    cfg.validate();
    struct Job {
        Index n, m, k;
        double ratio, sigma;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (Index n : cfg.n)
        for (Index m : cfg.m)
            for (Index k : cfg.k)
                for (double ratio : cfg.shuffle_ratio)
                    for (double sigma : cfg.sigma)
                        for (std::size_t t = 0; t < cfg.trials; ++t) jobs.push_back({n, m, k, ratio, sigma, cfg.seed0 + t});

    auto run_job = [&](const Job& job) {
        const ProblemInstance inst = gen_instance(job.n, job.m, job.k, job.ratio, job.sigma, job.seed);
        std::vector<BenchRecord> out;
        for (const auto& method : cfg.methods) {
            if (method_applies(method, job.k, job.m)) out.push_back(run_method(method, inst, cfg));
        }
        return out;
    };

    std::vector<std::vector<BenchRecord>> per_job(jobs.size());
    const unsigned workers = std::max(1u, cfg.workers);
    if (workers == 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) per_job[i] = run_job(jobs[i]);
    } else {
        for (std::size_t begin = 0; begin < jobs.size(); begin += workers) {
            const std::size_t end = std::min(jobs.size(), begin + workers);
            std::vector<std::future<std::vector<BenchRecord>>> futures;
            for (std::size_t i = begin; i < end; ++i) futures.push_back(std::async(std::launch::async, run_job, jobs[i]));
            for (std::size_t i = begin; i < end; ++i) per_job[i] = futures[i - begin].get();
        }
    }
    std::vector<BenchRecord> records;
    for (auto& recs : per_job) {
        for (auto& r : recs) records.push_back(std::move(r));
    }
    return records;
}

void write_records_csv(std::ostream& os, const std::vector<BenchRecord>& records) {
    os << kBenchCsvHeader << '\n';
    os << std::setprecision(17);
    for (const auto& r : records) {
        os << r.method << ',' << r.n << ',' << r.m << ',' << r.k << ',' << r.shuffle_ratio << ',' << r.sigma << ','
           << r.seed << ',' << r.relative_error << ',' << r.wall_time << ',' << to_string(r.terminated_by) << '\n';
    }
}

double quantile(std::vector<double> values, double q) {
    if (values.empty()) throw PreconditionError("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = static_cast<std::size_t>(std::ceil(pos));
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<CellSummary> summarize(const std::vector<BenchRecord>& records) {
    using Key = std::tuple<Index, Index, Index, double, double, std::string>;
    std::vector<Key> order;
    std::map<Key, std::pair<std::vector<double>, std::vector<double>>> groups;
    for (const auto& r : records) {
        Key key{r.n, r.m, r.k, r.shuffle_ratio, r.sigma, r.method};
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) order.push_back(key);
        it->second.first.push_back(r.relative_error);
        it->second.second.push_back(r.wall_time);
    }
    std::vector<CellSummary> out;
    for (const auto& key : order) {
        const auto& [errors, times] = groups.at(key);
        CellSummary s;
        std::tie(s.n, s.m, s.k, s.shuffle_ratio, s.sigma, s.method) = key;
        s.trials = errors.size();
        s.median = quantile(errors, 0.5);
        s.q1 = quantile(errors, 0.25);
        s.q3 = quantile(errors, 0.75);
        s.median_wall_time = quantile(times, 0.5);
        out.push_back(std::move(s));
    }
    return out;
}

void write_summary_csv(std::ostream& os, const std::vector<CellSummary>& summary) {
    os << "method,n,m,k,shuffle_ratio,sigma,trials,median,q1,q3,median_wall_time\n";
    os << std::setprecision(10);
    for (const auto& s : summary) {
        os << s.method << ',' << s.n << ',' << s.m << ',' << s.k << ',' << s.shuffle_ratio << ',' << s.sigma << ','
           << s.trials << ',' << s.median << ',' << s.q1 << ',' << s.q3 << ',' << s.median_wall_time << '\n';
    }
}

} // namespace homsense
