#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "pqsim/checks.hpp"
#include "pqsim/grid_search.hpp"
#include "pqsim/hard_instances.hpp"
#include "test_util.hpp"

using namespace pqsim;

TEST_CASE("general price grid") {
    const auto s = grid_for_general(20, 0.1);
    CHECK(s.size() == 33);  // k = 0..31 plus the explicit endpoint
    CHECK(s.front() == 1.0);
    CHECK(s.back() == 20.0);
    CHECK(std::is_sorted(s.begin(), s.end()));

    CHECK(grid_for_general(1, 0.1) == std::vector<double>{1.0});
    CHECK_THROWS_AS(grid_for_general(0.5, 0.1), std::invalid_argument);
}

TEST_CASE("per-price budget formula") {
    // ceil(16*20/0.01 * ln(4*20/(0.1*0.1))) = ceil(32000 * ln 8000)
    //   = ceil(287590.298...) = 287591, recomputed here in long double.
    const long double expect = std::ceil(32000.0L * std::log(8000.0L));
    CHECK(static_cast<long double>(per_price_budget(20, 0.1, 0.1)) == expect);
    CHECK(per_price_budget(20, 0.1, 0.1) == 287591);

    // Quartering eps multiplies the budget by 16 times a mild log factor.
    const auto coarse = per_price_budget(20, 0.4, 0.1);
    const auto fine = per_price_budget(20, 0.1, 0.1);
    CHECK(fine >= 16 * coarse);
    CHECK(fine <= 20 * coarse);
    // Strictly increasing in H.
    CHECK(per_price_budget(40, 0.1, 0.1) > per_price_budget(20, 0.1, 0.1));
}

TEST_CASE("point mass at the range top: output is exactly H") {
    auto oracle = test::oracle_for(make_point_mass(20), 4);
    const auto res = run_general(20, 0.1, 0.1, oracle);
    CHECK(res.price == 20.0);  // every grid price sells; Rev-hat = p
    CHECK(oracle.ledger().total == 33 * per_price_budget(20, 0.1, 0.1));
}

TEST_CASE("ledger is exactly grid size times the per-price budget") {
    const auto fam = make_general_family(20, 0.1);
    auto oracle = test::oracle_for(fam.member(3), 17);
    run_general(20, 0.1, 0.1, oracle);
    CHECK(oracle.ledger().total == 33 * per_price_budget(20, 0.1, 0.1));
    CHECK(oracle.ledger().by_phase[static_cast<int>(Phase::kRevenueEstimate)] ==
          oracle.ledger().total);
}

TEST_CASE("grid anchoring: some grid point is within (1+eps) of the optimum") {
    const auto fam = make_general_family(20, 0.1);
    for (std::size_t k = 0; k < fam.K; ++k) {
        const auto& d = fam.member(k);
        const auto opt = brute_force_opt(d, 100000);
        const auto s = grid_for_general(20, 0.1);
        bool anchored = false;
        for (double p : s) {
            if (p >= opt.opt_price / 1.1 - 1e-12 && p <= opt.opt_price + 1e-12) {
                anchored |= revenue(d, p) >= (1.0 - 0.1) * opt.opt_revenue - 1e-9;
            }
        }
        CHECK(anchored);
    }
}

TEST_CASE("estimates stay in the simultaneous eps*Opt band") {
    const auto fam = make_general_family(20, 0.1);
    const auto& d = fam.member(3);
    const auto opt = brute_force_opt(d, 100000);
    for (int t = 0; t < 3; ++t) {
        auto oracle = test::oracle_for(d, derive_seed(2101, static_cast<std::uint64_t>(t)));
        const auto res = run_general(20, 0.1, 0.1, oracle);
        for (const auto& [p, rhat] : res.estimates) {
            CHECK(std::abs(rhat - revenue(d, p)) <= 0.1 * opt.opt_revenue);
        }
    }
}

TEST_CASE("near-optimal output on the general family w.h.p.") {
    const auto fam = make_general_family(20, 0.1);
    const auto opt = brute_force_opt(fam.base, 100000);
    int ok = 0;
    const int trials = 5;
    for (int t = 0; t < trials; ++t) {
        auto oracle = test::oracle_for(fam.base, derive_seed(88, static_cast<std::uint64_t>(t)));
        const auto res = run_general(20, 0.1, 0.1, oracle);
        if (revenue(fam.base, res.price) >= 0.7 * opt.opt_revenue) ++ok;
    }
    CHECK(ok == trials);
}
