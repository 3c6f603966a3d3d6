#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "pqsim/checks.hpp"
#include "pqsim/hard_instances.hpp"
#include "test_util.hpp"

using namespace pqsim;

TEST_CASE("brute force optimum hits the closed-form optima exactly") {
    const auto pair = make_regular_pair(20, 0.1);
    const auto om = brute_force_opt(pair.f_minus, 1000000);
    CHECK(om.opt_price == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(om.opt_revenue == doctest::Approx(2.0).epsilon(1e-9));

    // alpha = 0.25: optimum sits on the injected breakpoint 1.75.
    const auto mhr = make_mhr_pair(1.0 / 64);
    const auto o1 = brute_force_opt(mhr.f1, 10000);
    CHECK(o1.opt_price == doctest::Approx(1.75).epsilon(1e-12));
    CHECK(o1.opt_revenue == doctest::Approx(1.225).epsilon(1e-12));

    const auto opm = brute_force_opt(make_point_mass(5), 1000);
    CHECK(opm.opt_price == 5.0);
    CHECK(opm.opt_revenue == 5.0);
}

TEST_CASE("brute force is deterministic and stable under grid refinement") {
    const auto d = make_regular_pair(20, 0.1).f_plus;
    const auto a = brute_force_opt(d, 10000);
    const auto b = brute_force_opt(d, 10000);
    CHECK(a.opt_price == b.opt_price);
    CHECK(a.opt_revenue == b.opt_revenue);
    double prev = brute_force_opt(d, 2000).opt_revenue;
    for (std::size_t n = 4000; n <= 64000; n *= 2) {
        const double cur = brute_force_opt(d, n).opt_revenue;
        CHECK(cur >= prev - 1e-6);  // refinement never loses more than a cell
        prev = cur;
    }
    CHECK_THROWS_AS(brute_force_opt(d, 10), std::invalid_argument);
}

TEST_CASE("regularity checker in quantile space") {
    const auto pair = make_regular_pair(20, 0.1);
    CHECK(check_regular(pair.f_minus, 10000, 1e-9).ok);
    // The kink of F+ at H/2 is convex once eps > 1/(H-4): quantile-space
    // slopes -H*eps and -H/(H-4) meet in the wrong order there.
    CHECK_FALSE(check_regular(pair.f_plus, 10000, 1e-9).ok);
    CHECK(check_regular(make_regular_pair(12, 0.1).f_plus, 10000, 1e-9).ok);
    CHECK(check_regular(make_regular_pair(20, 0.05).f_plus, 10000, 1e-9).ok);
    CHECK(check_regular(make_regular_pair(20, 1.0 / 16).f_plus, 10000, 1e-7).ok);

    const auto mhr = make_mhr_pair(1.0 / 64);
    CHECK(check_regular(mhr.f0, 10000, 1e-9).ok);
    CHECK(check_regular(mhr.f1, 10000, 1e-9).ok);
    CHECK(check_regular(make_truncated_exponential(0.125, 1, 30), 10000, 1e-9).ok);
    CHECK(check_regular(make_point_mass(5), 1000, 1e-9).ok);
}

TEST_CASE("two equal atoms far apart fail midpoint concavity in quantile space") {
    const auto d = make_discrete_atoms({1.0, 100.0}, {0.5, 0.5}, DistClass::kGeneral);
    const auto rep = check_regular(d, 2000, 1e-9);
    CHECK_FALSE(rep.ok);
    CHECK(rep.detail.find("quantile") != std::string::npos);
}

TEST_CASE("mhr checker") {
    const auto mhr = make_mhr_pair(1.0 / 64);
    CHECK(check_mhr(mhr.f0, 2000, 1e-6).ok);
    CHECK(check_mhr(mhr.f1, 2000, 1e-6).ok);
    CHECK(check_mhr(make_truncated_exponential(0.125, 1, 30), 2000, 1e-6).ok);
    CHECK(check_mhr(make_point_mass(5), 2000, 1e-6).ok);

    // The shared head of the regular pair has hazard (H-4)/((H-4)v+H),
    // decreasing in v.
    const auto rep = check_mhr(make_regular_pair(20, 0.1).f_minus, 2000, 1e-6);
    CHECK_FALSE(rep.ok);
    CHECK(rep.detail.find("hazard decreases") != std::string::npos);
}

TEST_CASE("half-concavity of the revenue curve below the optimum") {
    const auto pair = make_regular_pair(20, 0.1);
    CHECK(check_half_concavity(pair.f_minus, 10000, 1e-9).ok);
    // F+ at (20, 0.1) is outside the regular regime (eps > 1/(H-4)); its
    // junction at H/2 sits below the optimum and breaks price-space
    // concavity by the same margin: slopes 8 eps/(H(1+2eps)) vs 8/(H(H-2)).
    CHECK_FALSE(check_half_concavity(pair.f_plus, 10000, 1e-9).ok);
    CHECK(check_half_concavity(make_regular_pair(20, 0.05).f_plus, 10000, 1e-9).ok);
    CHECK(check_half_concavity(make_regular_pair(12, 0.1).f_plus, 10000, 1e-9).ok);
    CHECK(check_half_concavity(make_mhr_pair(1.0 / 64).f0, 10000, 1e-9).ok);
    // Rev(p) = p below the atom: linear, hence concave.
    CHECK(check_half_concavity(make_point_mass(5), 1000, 1e-9).ok);
}

TEST_CASE("revenue lower bounds on both sides of the optimum") {
    CHECK(check_rev_lower_bounds(make_regular_pair(20, 0.1).f_minus, 10000, 1e-9).ok);
    CHECK(check_rev_lower_bounds(make_mhr_pair(1.0 / 64).f1, 10000, 1e-9).ok);
    CHECK(check_rev_lower_bounds(make_truncated_exponential(0.125, 1, 30), 10000, 1e-9).ok);
    CHECK(check_rev_lower_bounds(test::low_opt_quantile_fixture(), 10000, 1e-9).ok);

    // At p = opt both forms reduce to Opt >= Opt * max(q, 1-q).
    const auto d = make_mhr_pair(1.0 / 64).f0;
    const auto opt = brute_force_opt(d, 10000);
    const double q = quantile_prob(d, opt.opt_price);
    CHECK(opt.opt_revenue >= opt.opt_revenue * std::max(q, 1 - q) - 1e-12);
}

TEST_CASE("target price keeps the optimum when its quantile is large enough") {
    const auto mhr = make_mhr_pair(1.0 / 64);
    CHECK(target_price(mhr.f0, 0.1, 100000) == doctest::Approx(1.5).epsilon(1e-9));
    const auto pair = make_regular_pair(20, 0.1);
    CHECK(target_price(pair.f_minus, 0.1, 100000) == doctest::Approx(10.0).epsilon(1e-9));
}

TEST_CASE("target price bisects to q = eps when the optimum is too thin") {
    // q(p) = 1/(0.95p+1): optimum at the 0.05-mass atom, so the target price
    // solves q(p) = 0.1, i.e. p = 9/0.95.
    const auto d = test::low_opt_quantile_fixture();
    const double p = target_price(d, 0.1, 100000);
    CHECK(p == doctest::Approx(9.0 / 0.95).epsilon(1e-6));
    CHECK(quantile_prob(d, p) == doctest::Approx(0.1).epsilon(1e-6));
    // The guarantee that motivates it: Rev(p) >= (1-eps) Opt.
    CHECK(revenue(d, p) >= 0.9 * brute_force_opt(d, 100000).opt_revenue - 1e-9);

    CHECK_THROWS_AS(target_price(d, 0.3, 10000), std::invalid_argument);
}
