#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pqsim/estimation.hpp"
#include "pqsim/oracle.hpp"

namespace pqsim {

struct InternalInvariantError : std::logic_error {
    explicit InternalInvariantError(const std::string& what) : std::logic_error(what) {}
};

// Inputs of the elimination search: interval [lo, hi], error bound eps,
// failure probability delta, winning-probability floor gamma, and the
// estimation constant C.
//
// The guarantee (a (1-5eps)-approximation among prices with q >= gamma, with
// probability 1-delta) is established for eps <= 0.1; larger eps up to 1 is
// accepted for sweeps, where the pivot-window invariants below still guard
// the rounds that actually execute.
struct SearchParams {
    double lo = 1;
    double hi = 1;
    double eps = 0.1;
    double delta = 0.1;
    double gamma = 1;
    double C = 20;

    void validate() const;

    // 22 ln^2(hi/lo) + 44 ln(hi/lo) ln(1/eps) + 66 ln(1/eps), unceiled.
    double r_tilde() const;

    EstimateBudgets budgets() const { return {C, r_tilde(), delta, gamma, eps}; }
};

// Geometric candidate grid {(1+eps)^k * lo : k >= 0, (1+eps)^k * lo <= hi}.
std::vector<double> build_grid(const SearchParams& params);

// ceil(r_tilde): the analytic cap on elimination rounds.
std::uint64_t round_bound(const SearchParams& params);

// Pivots of one round: the smallest candidates strictly above the 0.2 and
// 0.5 points of the current interval. Asserts the windows
// a < lo + 0.3*(hi-lo), b < lo + 0.6*(hi-lo) that the round accounting
// depends on (they hold whenever at least 20 candidates remain and
// eps <= 0.1; a trip indicates misuse).
struct Pivots {
    std::size_t a_index = 0, b_index = 0;
    double a = 0, b = 0;
};
Pivots pick_pivots(std::span<const double> candidates);

struct RoundRecord {
    int round = 0;
    double lo = 0, hi = 0;
    double a = 0, b = 0;
    double qhat_b = 0;
    enum class Decision { kPruneRightByQuantile, kKeepRight, kKeepLeft } decision{};
    std::optional<double> rhat_a, rhat_b;
    std::size_t size_before = 0, size_after = 0;
};
const char* to_string(RoundRecord::Decision d);

struct RunTrace {
    std::vector<double> grid;
    std::vector<RoundRecord> rounds;
    std::vector<double> candidates;               // S_can, ascending
    std::map<double, double> final_estimates;     // price -> empirical revenue
    double output = 0;
    std::uint64_t round_cap = 0;
    // q(lo) >= gamma is the caller's obligation; the algorithm cannot test it
    // from bits alone, so the trace records it as assumed rather than checked.
    bool gamma_precondition_assumed = true;

    std::string to_json() const;
};

struct RunResult {
    double price = 0;
    RunTrace trace;
};

// The elimination search: ternary-style pruning over the geometric grid with
// a cheap quantile gate before each expensive revenue comparison, then an
// empirical argmax over the surviving candidate set (ties toward the lowest
// price).
RunResult run_search(const SearchParams& params, PricingOracle& oracle);

}  // namespace pqsim
