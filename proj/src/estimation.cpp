#include "pqsim/estimation.hpp"

#include <cmath>
#include <stdexcept>

namespace pqsim {

void EstimateBudgets::validate() const {
    if (!(C > 0) || !(r_tilde > 0)) throw std::invalid_argument("budgets: C, r_tilde must be > 0");
    if (!(delta > 0 && delta <= 1)) throw std::invalid_argument("budgets: delta must be in (0,1]");
    if (!(gamma > 0 && gamma <= 1)) throw std::invalid_argument("budgets: gamma must be in (0,1]");
    if (!(eps > 0 && eps <= 1)) throw std::invalid_argument("budgets: eps must be in (0,1]");
}

std::uint64_t quantile_queries(const EstimateBudgets& b) {
    b.validate();
    return static_cast<std::uint64_t>(std::ceil(b.C * std::log(b.r_tilde / b.delta) / b.gamma));
}

std::uint64_t revenue_queries(const EstimateBudgets& b) {
    b.validate();
    return static_cast<std::uint64_t>(
        std::ceil(b.C * std::log(b.r_tilde / b.delta) / (b.gamma * b.eps * b.eps)));
}

double estimate_quantile(PricingOracle& o, double price, std::uint64_t m, Phase phase) {
    if (m < 1) throw std::invalid_argument("estimate_quantile: m must be >= 1");
    const std::uint64_t sales = o.query_run(price, m, phase);
    return static_cast<double>(sales) / static_cast<double>(m);
}

double estimate_revenue(PricingOracle& o, double price, std::uint64_t m, Phase phase) {
    return price * estimate_quantile(o, price, m, phase);
}

}  // namespace pqsim
