#include <type_traits>
#include <vector>

#include "doctest.h"
#include "pqsim/hard_instances.hpp"
#include "pqsim/oracle.hpp"
#include "test_util.hpp"

using namespace pqsim;

TEST_CASE("point mass bits are deterministic") {
    auto o = test::oracle_for(make_point_mass(5), 42);
    for (int i = 0; i < 50; ++i) CHECK(o.query(3.0, Phase::kQuantileCheck));
    for (int i = 0; i < 50; ++i) CHECK_FALSE(o.query(7.0, Phase::kQuantileCheck));
    CHECK(o.query(5.0, Phase::kQuantileCheck));  // atom at the posted price sells
}

TEST_CASE("ledger counts every query under its phase") {
    auto o = test::oracle_for(make_point_mass(5), 1);
    o.query(3.0, Phase::kQuantileCheck);
    o.query_run(3.0, 10, Phase::kRevenueEstimate);
    o.query_run(3.0, 5, Phase::kFinalSelect);
    const auto& led = o.ledger();
    CHECK(led.total == 16);
    CHECK(led.by_phase[0] == 1);
    CHECK(led.by_phase[1] == 10);
    CHECK(led.by_phase[2] == 5);
    const auto m = led.by_phase_map();
    CHECK(m.at("quantile") == 1);
    CHECK(m.at("revenue") == 10);
    CHECK(m.at("final") == 5);
}

TEST_CASE("same seed, same query sequence, same bits and ledger") {
    const auto pair = make_regular_pair(20, 0.1);
    auto run = [&](std::uint64_t seed) {
        auto o = test::oracle_for(pair.f_minus, seed);
        std::vector<bool> bits;
        for (int i = 0; i < 300; ++i) bits.push_back(o.query(5.0 + (i % 7), Phase::kQuantileCheck));
        return std::make_pair(bits, o.ledger().total);
    };
    const auto a = run(123), b = run(123), c = run(124);
    CHECK(a.first == b.first);
    CHECK(a.second == b.second);
    CHECK(a.first != c.first);
}

TEST_CASE("query_run consumes the rng exactly like repeated query calls") {
    const auto d = make_regular_pair(20, 0.1).f_minus;
    auto batch = test::oracle_for(d, 9);
    auto single = test::oracle_for(d, 9);
    const auto sales = batch.query_run(8.0, 1000, Phase::kRevenueEstimate);
    std::uint64_t manual = 0;
    for (int i = 0; i < 1000; ++i) manual += single.query(8.0, Phase::kRevenueEstimate) ? 1 : 0;
    CHECK(sales == manual);
    // Both oracles continue in lockstep afterwards.
    for (int i = 0; i < 100; ++i) {
        CHECK(batch.query(3.0, Phase::kQuantileCheck) == single.query(3.0, Phase::kQuantileCheck));
    }
}

TEST_CASE("empirical sale frequency matches the analytic quantile") {
    const auto fam = make_general_family(20, 0.1);
    auto o = test::oracle_for(fam.base, 77);
    const std::uint64_t m = 1000000;
    const auto sales = o.query_run(10.0, m, Phase::kQuantileCheck);
    const double freq = static_cast<double>(sales) / static_cast<double>(m);
    CHECK(std::abs(freq - 0.5) <= 3 * 0.0005);  // q(p_1) = 10/H, 3 sigma
}

TEST_CASE("budget exhaustion") {
    auto o = PricingOracle(test::shared(make_point_mass(5)), Rng(4), 10);
    o.query_run(3.0, 10, Phase::kQuantileCheck);
    CHECK(o.ledger().total == 10);
    CHECK_THROWS_AS(o.query(3.0, Phase::kQuantileCheck), BudgetExhausted);
    CHECK(o.ledger().total == 10);  // the refused query is not metered

    // Mid-batch exhaustion consumes exactly the remainder, then reports.
    auto o2 = PricingOracle(test::shared(make_point_mass(5)), Rng(4), 10);
    CHECK_THROWS_AS(o2.query_run(3.0, 25, Phase::kQuantileCheck), BudgetExhausted);
    CHECK(o2.ledger().total == 10);

    auto o3 = PricingOracle(test::shared(make_point_mass(5)), Rng(4));
    o3.set_budget(5);
    o3.query(3.0, Phase::kQuantileCheck);
    CHECK_THROWS_AS(o3.set_budget(50), std::logic_error);
}

TEST_CASE("hint sample: full value once, never metered") {
    auto o = test::oracle_for(make_point_mass(5), 11);
    CHECK(o.draw_hint_sample() == 5.0);
    CHECK(o.ledger().total == 0);
    CHECK_THROWS_AS(o.draw_hint_sample(), HintAlreadyConsumed);
}

TEST_CASE("hint samples follow the value distribution (chi-square at 0.999)") {
    // 10 equal bins on [1,2] for the mhr f0 density: probability 0.04 per
    // bin below 1.5 and 0.16 above.
    const auto f0 = test::shared(make_mhr_pair(1.0 / 64).f0);
    const int n = 100000;
    std::vector<int> counts(10, 0);
    for (int i = 0; i < n; ++i) {
        PricingOracle o(f0, Rng(derive_seed(31337, static_cast<std::uint64_t>(i))));
        const double v = o.draw_hint_sample();
        const int bin = std::min(9, static_cast<int>((v - 1.0) * 10.0));
        counts[static_cast<std::size_t>(bin)]++;
    }
    double chi2 = 0;
    for (int b = 0; b < 10; ++b) {
        const double expect = n * (b < 5 ? 0.04 : 0.16);
        const double diff = counts[static_cast<std::size_t>(b)] - expect;
        chi2 += diff * diff / expect;
    }
    CHECK(chi2 <= 27.877);  // chi-square 0.999 quantile at 9 dof
}

// The oracle's public surface must not leak the hidden values: no accessor
// for the distribution, the last value, or any value history.
template <typename T, typename = void>
struct exposes_distribution : std::false_type {};
template <typename T>
struct exposes_distribution<T, std::void_t<decltype(std::declval<const T&>().distribution())>>
    : std::true_type {};

template <typename T, typename = void>
struct exposes_last_value : std::false_type {};
template <typename T>
struct exposes_last_value<T, std::void_t<decltype(std::declval<const T&>().last_value())>>
    : std::true_type {};

template <typename T, typename = void>
struct exposes_values : std::false_type {};
template <typename T>
struct exposes_values<T, std::void_t<decltype(std::declval<const T&>().values())>>
    : std::true_type {};

static_assert(!exposes_distribution<PricingOracle>::value);
static_assert(!exposes_last_value<PricingOracle>::value);
static_assert(!exposes_values<PricingOracle>::value);

TEST_CASE("oracle api hides values at compile time") {
    CHECK_FALSE(exposes_distribution<PricingOracle>::value);
    CHECK_FALSE(exposes_last_value<PricingOracle>::value);
    CHECK_FALSE(exposes_values<PricingOracle>::value);
}
