#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "pqsim/oracle.hpp"

namespace pqsim {

// Uniform-budget baseline for arbitrary distributions on [1, H]: estimate
// every geometric grid price with the same allotment and take the empirical
// argmax. No pruning and no class assumptions.

// {1, (1+eps), ..., (1+eps)^K, H} with K = floor(log_{1+eps} H); H is always
// the last element, duplicates removed.
std::vector<double> grid_for_general(double H, double eps);

// ceil((16H/eps^2) * ln(4H/(eps*delta))) queries per grid price.
std::uint64_t per_price_budget(double H, double eps, double delta);

struct GeneralRunResult {
    double price = 0;
    std::map<double, double> estimates;  // price -> empirical revenue
};

// |S| * N queries total, bit-exact; ties toward the lowest price.
GeneralRunResult run_general(double H, double eps, double delta, PricingOracle& oracle);

}  // namespace pqsim
