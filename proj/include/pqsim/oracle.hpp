#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "pqsim/distribution.hpp"
#include "pqsim/rng.hpp"

namespace pqsim {

// Which stage of an algorithm consumed a query; reports expose the split.
enum class Phase : int { kQuantileCheck = 0, kRevenueEstimate = 1, kFinalSelect = 2 };
constexpr int kPhaseCount = 3;
const char* to_string(Phase p);

struct QueryLedger {
    std::uint64_t total = 0;
    std::array<std::uint64_t, kPhaseCount> by_phase{};

    std::map<std::string, std::uint64_t> by_phase_map() const;
};

struct BudgetExhausted : std::runtime_error {
    BudgetExhausted() : std::runtime_error("pricing-query budget exhausted") {}
};

struct HintAlreadyConsumed : std::runtime_error {
    HintAlreadyConsumed() : std::runtime_error("one-sample hint already consumed") {}
};

// The interaction model: each pricing query draws a fresh hidden value and
// reveals only the sale bit. The drawn values are never exposed; the only
// full observation available is the single hint sample. Metering is
// mandatory and monotone.
class PricingOracle {
  public:
    PricingOracle(std::shared_ptr<const Distribution> dist, Rng rng,
                  std::optional<std::uint64_t> budget = std::nullopt);

    // Posts price p against a fresh value; returns the sale bit and advances
    // the ledger by one under the given phase.
    bool query(double price, Phase phase);

    // Exactly m queries at one price; returns the sale count. Bit-equivalent
    // to m query() calls (same RNG consumption), just without per-call
    // dispatch.
    std::uint64_t query_run(double price, std::uint64_t m, Phase phase);

    // The one fully observed sample. Not a pricing query: not metered.
    double draw_hint_sample();

    const QueryLedger& ledger() const { return ledger_; }
    std::optional<std::uint64_t> budget() const { return budget_; }

    // Budget may be installed after the hint is drawn but before any query.
    void set_budget(std::optional<std::uint64_t> budget);

  private:
    std::shared_ptr<const Distribution> dist_;
    Rng rng_;
    QueryLedger ledger_;
    std::optional<std::uint64_t> budget_;
    bool hint_consumed_ = false;
};

}  // namespace pqsim
