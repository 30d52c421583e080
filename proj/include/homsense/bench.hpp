#pragma once

#include "homsense/solver_bnb.hpp"
#include "homsense/solver_enum.hpp"
#include "homsense/synth.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace homsense {

/// Method names accepted by the harness (and the CLI).
inline const std::vector<std::string> kBenchMethods = {"bnb", "enum", "altmin-sort", "robust-l1", "altmin-op"};

struct GridConfig {
    std::vector<std::string> methods;
    std::vector<Index> n, m, k;
    std::vector<double> shuffle_ratio, sigma;
    std::size_t trials = 1;
    std::uint64_t seed0 = 0;
    BnbConfig bnb;
    EnumConfig enumeration;
    /// robust-l1 runs once per lambda; the record keeps the best relative
    /// error and is labeled as chosen with hindsight.
    std::vector<double> robust_l1_lambdas;
    int altmin_max_iters = 100;
    unsigned workers = 1;

    /// Parses the JSON grid file format (see README).
    static GridConfig from_json(const std::string& text);
    void validate() const;
};

struct BenchRecord {
    std::string method;
    Index n = 0, m = 0, k = 0;
    double shuffle_ratio = 0.0, sigma = 0.0;
    std::uint64_t seed = 0;
    double relative_error = 0.0;
    double wall_time = 0.0;
    Termination terminated_by = Termination::exhausted;
    std::uint64_t instance_hash = 0;
};

inline constexpr const char* kBenchCsvHeader =
    "method,n,m,k,shuffle_ratio,sigma,seed,relative_error,wall_time,terminated_by";

/// Label recorded for the robust-l1 method.
inline constexpr const char* kRobustL1Label = "robust-l1[best-lambda]";

/// True when the method's preconditions allow it on a k-of-m cell.
bool method_applies(const std::string& method, Index k, Index m);

/// Runs one method on one instance.
BenchRecord run_method(const std::string& method, const ProblemInstance& inst, const GridConfig& cfg);

/// Records in canonical order: cell (grid order), trial, method.
std::vector<BenchRecord> run_benchmark(const GridConfig& cfg);

void write_records_csv(std::ostream& os, const std::vector<BenchRecord>& records);

struct CellSummary {
    std::string method;
    Index n = 0, m = 0, k = 0;
    double shuffle_ratio = 0.0, sigma = 0.0;
    std::size_t trials = 0;
    double median = 0.0, q1 = 0.0, q3 = 0.0;
    double median_wall_time = 0.0;
};

std::vector<CellSummary> summarize(const std::vector<BenchRecord>& records);
void write_summary_csv(std::ostream& os, const std::vector<CellSummary>& summary);

/// Linear-interpolation quantile, q in [0, 1].
double quantile(std::vector<double> values, double q);

} // namespace homsense
