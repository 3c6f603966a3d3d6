#include "pqsim/unified_search.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "json.hpp"

namespace pqsim {

void SearchParams::validate() const {
    if (!(lo > 0) || !(hi >= lo)) throw std::invalid_argument("search params: need 0 < lo <= hi");
    if (!(eps > 0 && eps < 1)) throw std::invalid_argument("search params: eps must be in (0, 1)");
    if (!(delta > 0 && delta <= 1)) throw std::invalid_argument("search params: delta in (0, 1]");
    if (!(gamma > 0 && gamma <= 1)) throw std::invalid_argument("search params: gamma in (0, 1]");
    if (!(C > 0)) throw std::invalid_argument("search params: C must be positive");
}

double SearchParams::r_tilde() const {
    const double lr = std::log(hi / lo);
    const double le = std::log(1.0 / eps);
    return 22.0 * lr * lr + 44.0 * lr * le + 66.0 * le;
}

std::uint64_t round_bound(const SearchParams& params) {
    return static_cast<std::uint64_t>(std::ceil(params.r_tilde()));
}

std::vector<double> build_grid(const SearchParams& params) {
    params.validate();
    std::vector<double> grid;
    const double step = 1.0 + params.eps;
    double p = params.lo;
    while (p <= params.hi) {
        grid.push_back(p);
        p *= step;
    }
    return grid;
}

namespace {

std::size_t first_index_above(std::span<const double> g, double threshold) {
    const auto it = std::upper_bound(g.begin(), g.end(), threshold);
    return static_cast<std::size_t>(it - g.begin());
}

}  // namespace

Pivots pick_pivots(std::span<const double> candidates) {
    if (candidates.size() < 20) {
        throw InternalInvariantError("pick_pivots: needs at least 20 candidates");
    }
    const double lo = candidates.front();
    const double hi = candidates.back();
    Pivots piv;
    piv.a_index = first_index_above(candidates, lo + 0.2 * (hi - lo));
    piv.b_index = first_index_above(candidates, lo + 0.5 * (hi - lo));
    piv.a = candidates[piv.a_index];
    piv.b = candidates[piv.b_index];
    if (!(piv.a < lo + 0.3 * (hi - lo)) || !(piv.b < lo + 0.6 * (hi - lo))) {
        std::ostringstream os;
        os << "pivot window violated: a=" << piv.a << " b=" << piv.b << " on [" << lo << ", " << hi
           << "] with " << candidates.size() << " candidates (eps > 0.1 misuse?)";
        throw InternalInvariantError(os.str());
    }
    return piv;
}

const char* to_string(RoundRecord::Decision d) {
    switch (d) {
        case RoundRecord::Decision::kPruneRightByQuantile: return "prune-right-by-quantile";
        case RoundRecord::Decision::kKeepRight: return "keep-right";
        case RoundRecord::Decision::kKeepLeft: return "keep-left";
    }
    return "?";
}

RunResult run_search(const SearchParams& params, PricingOracle& oracle) {
    params.validate();
    const std::vector<double> grid = build_grid(params);
    const EstimateBudgets budgets = params.budgets();
    const std::uint64_t mq = std::max<std::uint64_t>(1, quantile_queries(budgets));
    const std::uint64_t mr = std::max<std::uint64_t>(1, revenue_queries(budgets));
    const std::uint64_t cap = round_bound(params);

    RunResult res;
    res.trace.grid = grid;
    res.trace.round_cap = cap;

    std::size_t lo = 0, hi = grid.size() - 1;  // current window, inclusive
    std::set<std::size_t> s_can;
    int round = 0;

    while (hi - lo + 1 >= 20) {
        ++round;
        if (static_cast<std::uint64_t>(round) > cap) {
            throw InternalInvariantError("round count exceeded the analytic bound");
        }
        const std::span<const double> window(grid.data() + lo, hi - lo + 1);
        const Pivots piv = pick_pivots(window);
        const std::size_t a_idx = lo + piv.a_index;
        const std::size_t b_idx = lo + piv.b_index;

        RoundRecord rec;
        rec.round = round;
        rec.lo = grid[lo];
        rec.hi = grid[hi];
        rec.a = piv.a;
        rec.b = piv.b;
        rec.size_before = hi - lo + 1;

        rec.qhat_b = estimate_quantile(oracle, piv.b, mq, Phase::kQuantileCheck);
        if (rec.qhat_b < 0.75 * params.gamma) {
            hi = b_idx;
            rec.decision = RoundRecord::Decision::kPruneRightByQuantile;
        } else {
            s_can.insert(a_idx);
            s_can.insert(b_idx);
            const double ra = estimate_revenue(oracle, piv.a, mr, Phase::kRevenueEstimate);
            const double rb = estimate_revenue(oracle, piv.b, mr, Phase::kRevenueEstimate);
            rec.rhat_a = ra;
            rec.rhat_b = rb;
            if ((1.0 + params.eps) * ra < (1.0 - params.eps) * rb) {
                lo = a_idx;
                rec.decision = RoundRecord::Decision::kKeepRight;
            } else {
                hi = b_idx;
                rec.decision = RoundRecord::Decision::kKeepLeft;
            }
        }
        rec.size_after = hi - lo + 1;
        res.trace.rounds.push_back(rec);
    }

    for (std::size_t i = lo; i <= hi; ++i) s_can.insert(i);

    double best_rev = -1.0;
    std::size_t best_idx = 0;
    for (std::size_t idx : s_can) {  // ascending: ties resolve to the lowest price
        const double r = estimate_revenue(oracle, grid[idx], mr, Phase::kFinalSelect);
        res.trace.candidates.push_back(grid[idx]);
        res.trace.final_estimates[grid[idx]] = r;
        if (r > best_rev) {
            best_rev = r;
            best_idx = idx;
        }
    }
    res.price = grid[best_idx];
    res.trace.output = res.price;
    return res;
}

std::string RunTrace::to_json() const {
    nlohmann::json j;
    j["algorithm"] = "unified-search";
    j["grid_size"] = grid.size();
    j["grid_lo"] = grid.empty() ? 0.0 : grid.front();
    j["grid_hi"] = grid.empty() ? 0.0 : grid.back();
    j["round_cap"] = round_cap;
    j["gamma_precondition_assumed"] = gamma_precondition_assumed;
    j["rounds"] = nlohmann::json::array();
    for (const auto& r : rounds) {
        nlohmann::json rj;
        rj["i"] = r.round;
        rj["lo"] = r.lo;
        rj["hi"] = r.hi;
        rj["a"] = r.a;
        rj["b"] = r.b;
        rj["qhat_b"] = r.qhat_b;
        rj["decision"] = to_string(r.decision);
        if (r.rhat_a) rj["rhat_a"] = *r.rhat_a;
        if (r.rhat_b) rj["rhat_b"] = *r.rhat_b;
        rj["size_before"] = r.size_before;
        rj["size_after"] = r.size_after;
        j["rounds"].push_back(rj);
    }
    j["candidates"] = candidates;
    nlohmann::json fe = nlohmann::json::object();
    for (const auto& [p, r] : final_estimates) fe[std::to_string(p)] = r;
    j["final_estimates"] = fe;
    j["output"] = output;
    return j.dump(2);
}

}  // namespace pqsim
