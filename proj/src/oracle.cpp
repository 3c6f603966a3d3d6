#include "pqsim/oracle.hpp"

namespace pqsim {

const char* to_string(Phase p) {
    switch (p) {
        case Phase::kQuantileCheck: return "quantile";
        case Phase::kRevenueEstimate: return "revenue";
        case Phase::kFinalSelect: return "final";
    }
    return "?";
}

std::map<std::string, std::uint64_t> QueryLedger::by_phase_map() const {
    std::map<std::string, std::uint64_t> m;
    for (int i = 0; i < kPhaseCount; ++i) {
        m[to_string(static_cast<Phase>(i))] = by_phase[static_cast<std::size_t>(i)];
    }
    return m;
}

PricingOracle::PricingOracle(std::shared_ptr<const Distribution> dist, Rng rng,
                             std::optional<std::uint64_t> budget)
    : dist_(std::move(dist)), rng_(rng), budget_(budget) {
    if (!dist_) throw std::invalid_argument("oracle requires a distribution");
}

bool PricingOracle::query(double price, Phase phase) { return query_run(price, 1, phase) == 1; }

std::uint64_t PricingOracle::query_run(double price, std::uint64_t m, Phase phase) {
    std::uint64_t n = m;
    bool exhausted = false;
    if (budget_) {
        const std::uint64_t remaining = *budget_ > ledger_.total ? *budget_ - ledger_.total : 0;
        if (remaining < m) {
            n = remaining;
            exhausted = true;
        }
    }
    // A fresh value v ~ F per query; the sale bit 1{v >= p} is equivalent to
    // 1{t <= q(p)} for the value's quantile level t, so the inversion itself
    // is skipped on this hot path.
    const double q = quantile_prob(*dist_, price);
    std::uint64_t sales = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const double t = 1.0 - rng_.uniform01();
        sales += t <= q ? 1 : 0;
    }
    ledger_.total += n;
    ledger_.by_phase[static_cast<std::size_t>(phase)] += n;
    if (exhausted) throw BudgetExhausted();
    return sales;
}

double PricingOracle::draw_hint_sample() {
    if (hint_consumed_) throw HintAlreadyConsumed();
    hint_consumed_ = true;
    return sample(*dist_, rng_);
}

void PricingOracle::set_budget(std::optional<std::uint64_t> budget) {
    if (ledger_.total > 0) {
        throw std::logic_error("budget must be set before the first pricing query");
    }
    budget_ = budget;
}

}  // namespace pqsim
