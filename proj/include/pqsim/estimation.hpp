#pragma once

#include <cstdint>

#include "pqsim/oracle.hpp"

namespace pqsim {

// Query allotments for one quantile or revenue estimate. r_tilde is the
// (unceiled) analytic round bound; logs are natural throughout, the constant
// C absorbs base changes.
struct EstimateBudgets {
    double C = 20;
    double r_tilde = 1;
    double delta = 0.1;
    double gamma = 1;
    double eps = 0.1;

    void validate() const;
};

// ceil(C * ln(r_tilde/delta) / gamma)
std::uint64_t quantile_queries(const EstimateBudgets& b);

// ceil(C * ln(r_tilde/delta) / (gamma * eps^2))
std::uint64_t revenue_queries(const EstimateBudgets& b);

// Empirical sale fraction from exactly m queries at price p.
double estimate_quantile(PricingOracle& o, double price, std::uint64_t m,
                         Phase phase = Phase::kQuantileCheck);

// p * empirical sale fraction.
double estimate_revenue(PricingOracle& o, double price, std::uint64_t m,
                        Phase phase = Phase::kRevenueEstimate);

}  // namespace pqsim
