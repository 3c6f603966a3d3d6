#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pqsim/checks.hpp"
#include "pqsim/distribution.hpp"
#include "pqsim/unified_search.hpp"

namespace pqsim {

inline constexpr const char* kReportSchemaVersion = "1";

// One repeated-trials experiment. setting selects the algorithm recipe:
// regular-range, mhr-range, regular-sample, mhr-sample, general-range.
// success_factor <= 0 means "use the setting's guarantee factor for this eps".
struct ExperimentConfig {
    std::string setting;
    std::string distribution_json;
    double eps = 0.1;
    double delta = 0.1;
    double C = 20;
    std::uint64_t trials = 100;
    std::uint64_t seed = 0;
    double success_factor = 0;
    double budget_multiplier = 10;  // oracle tripwire, x theoretical bound; 0 disables
    int jobs = 1;
    bool keep_per_trial = true;
    bool run_class_check = true;  // verify the class tag before trials
    bool collect_traces = false;  // retain the first trial's trace

    double resolved_success_factor() const;
};

struct TrialRecord {
    double output_price = 0;
    double achieved_revenue = 0;
    std::uint64_t queries = 0;
    bool success = false;
};

struct TrialReport {
    std::uint64_t successes = 0;
    std::uint64_t trials = 0;
    double success_rate = 0;
    double wilson_lo = 0, wilson_hi = 0;  // 95% score interval
    std::uint64_t queries_min = 0, queries_max = 0;
    double queries_mean = 0;
    std::uint64_t theoretical_query_bound = 0;
    double benchmark_revenue = 0;  // what success_factor multiplies
    double benchmark_price = 0;
    double success_factor = 0;
    std::vector<TrialRecord> per_trial;
    std::optional<std::string> first_trial_trace_json;
    std::string config_json;  // the resolved config, for reproducibility

    std::string to_json() const;
    std::string to_csv_row() const;
    static std::string csv_header();
};

// Runs `trials` independent seeded trials (per-trial seed =
// derive_seed(seed, t)); success means analytic Rev(output) >=
// success_factor * benchmark, with the benchmark computed by the brute-force
// oracle, never from query estimates.
TrialReport run_trials(const ExperimentConfig& cfg);

// (theoretical per-trial query bound, benchmark opt) for a config; exposed
// because acceptance checks compare against these directly.
std::uint64_t theoretical_query_bound(const ExperimentConfig& cfg);
OptResult benchmark_opt(const ExperimentConfig& cfg);

struct SweepResult {
    std::string parameter;  // eps | H | delta
    std::vector<double> values;
    std::vector<TrialReport> reports;
    // Least-squares slope of ln(mean queries) against ln(x), where x = 1/eps,
    // H, or 1/delta respectively.
    double loglog_slope = 0;

    std::string to_csv() const;
};

SweepResult sweep(const ExperimentConfig& base, const std::string& parameter,
                  const std::vector<double>& values);

struct CalibrationResult {
    std::vector<double> ladder;
    std::vector<TrialReport> reports;  // one per ladder entry, ascending C
    double target = 0;
    std::optional<double> chosen_C;  // smallest C with wilson_lo >= target

    std::string to_csv() const;
};

CalibrationResult calibrate_C(const ExperimentConfig& base, std::vector<double> ladder,
                              double target);

// Wilson 95% score interval for k successes out of n.
std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t n);

}  // namespace pqsim
