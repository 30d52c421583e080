#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace homsense::theory {

struct CheckRecord {
    std::string name;
    bool passed = true;
    std::size_t trials = 0;
    std::size_t failures = 0;
    /// Generic-position trials that failed once and passed on a re-run with a fresh seed.
    std::size_t flakes = 0;
    /// Worst observed value of the checked quantity (check-specific, see `detail`).
    double worst_margin = 0.0;
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 0;
    /// Run the generic-point positive check at k = n, where it must fail.
    bool force_below_threshold = false;
    std::size_t eigen_trials = 1000;
    std::size_t uniqueness_trials = 20;
    std::size_t violation_trials = 100;
    std::size_t generic_point_trials = 20;
    std::size_t lemma2_trials = 500;
    std::size_t intersection_trials = 50;
};

inline const std::vector<std::string> kVerifySuites = {"eigen", "uniqueness", "generic-point", "lemma2", "intersection"};

/// Runs one suite by name, or every suite for "all".
std::vector<CheckRecord> run_verify_suite(const std::string& suite, const VerifyOptions& options);

} // namespace homsense::theory
