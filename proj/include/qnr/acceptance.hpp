#ifndef QNR_ACCEPTANCE_HPP
#define QNR_ACCEPTANCE_HPP

// Acceptance criteria and the self-test report built on them.

#include "qnr/json_io.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qnr::acceptance {

struct Options {
    std::uint64_t seed = 20240601;
    /// Fraction of the nominal trial counts (each count stays >= 1).
    double scale = 1.0;
    /// Criterion 12 reruns the self-test; disabled inside the self-test itself.
    bool include_determinism = true;
    /// Scale of the two self-test runs compared by criterion 12.
    double determinism_scale = 0.05;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

inline constexpr int kCriterionCount = 12;

/// Runs one criterion; throws std::out_of_range for unknown ids.
CriterionResult run_criterion(int id, const Options& opts);

/// Runs criteria 1..12 in order, calling on_result after each one.
std::vector<CriterionResult> run_all(const Options& opts,
                                     const std::function<void(const CriterionResult&)>& on_result = {});

/// "criterion  4 PASS inequality suite: ..."
std::string format_line(const CriterionResult& r);

struct OracleCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Optimizer versus grid-oracle cross-checks at n = 2.
std::vector<OracleCheck> oracle_cross_checks(std::uint64_t seed, double scale);

/// Deterministic self-test document: oracle checks, criteria 1..11 and a
/// pass/fail table. Contains no timing.
Json selftest_report(std::uint64_t seed, double scale);

}  // namespace qnr::acceptance

#endif  // QNR_ACCEPTANCE_HPP
