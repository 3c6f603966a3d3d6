#include "pqsim/grid_search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pqsim/estimation.hpp"

namespace pqsim {

std::vector<double> grid_for_general(double H, double eps) {
    if (!(H >= 1)) throw std::invalid_argument("grid_for_general: H must be >= 1");
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("grid_for_general: eps in (0,1)");
    std::vector<double> s;
    const auto K = static_cast<std::uint64_t>(std::floor(std::log(H) / std::log1p(eps)));
    double p = 1.0;
    for (std::uint64_t k = 0; k <= K; ++k) {
        if (p > H) break;  // accumulated rounding at an exact-power boundary
        s.push_back(p);
        p *= 1.0 + eps;
    }
    s.push_back(H);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

std::uint64_t per_price_budget(double H, double eps, double delta) {
    if (!(H >= 1) || !(eps > 0 && eps < 1) || !(delta > 0 && delta <= 1)) {
        throw std::invalid_argument("per_price_budget: bad parameters");
    }
    const double n = 16.0 * H / (eps * eps) * std::log(4.0 * H / (eps * delta));
    return static_cast<std::uint64_t>(std::ceil(n));
}

GeneralRunResult run_general(double H, double eps, double delta, PricingOracle& oracle) {
    const auto grid = grid_for_general(H, eps);
    const std::uint64_t n = per_price_budget(H, eps, delta);
    GeneralRunResult res;
    double best = -1.0;
    for (double p : grid) {  // ascending: ties resolve to the lowest price
        const double r = estimate_revenue(oracle, p, n, Phase::kRevenueEstimate);
        res.estimates[p] = r;
        if (r > best) {
            best = r;
            res.price = p;
        }
    }
    return res;
}

}  // namespace pqsim
