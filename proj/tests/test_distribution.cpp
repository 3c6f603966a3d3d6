#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "pqsim/distribution.hpp"
#include "pqsim/hard_instances.hpp"
#include "test_util.hpp"

using namespace pqsim;

TEST_CASE("cdf follows the strict convention") {
    const auto pair = make_regular_pair(20, 0.1);
    CHECK(cdf(pair.f_minus, 1.0) == 0.0);
    // Atom of mass 1/H at H: strictly-below mass excludes it.
    CHECK(cdf(pair.f_minus, 20.0) == doctest::Approx(0.95).epsilon(1e-12));
    CHECK(cdf(pair.f_minus, 20.0 + 1e-9) == 1.0);

    const auto mhr = make_mhr_pair(1.0 / 64);
    CHECK(cdf(mhr.f0, 1.25) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(cdf(mhr.f1, 1.25) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("quantile_prob counts the atom at the posted price") {
    const auto pair = make_regular_pair(20, 0.1);
    CHECK(quantile_prob(pair.f_minus, 1.0) == 1.0);  // support_lo sells always
    CHECK(quantile_prob(pair.f_minus, 0.5) == 1.0);  // below support too
    CHECK(quantile_prob(pair.f_minus, 20.0) == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(quantile_prob(pair.f_minus, 20.0 + 1e-9) == 0.0);

    const auto fam = make_general_family(20, 0.1);
    CHECK(quantile_prob(fam.base, 10.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("quantile_prob + cdf = 1 exactly for all families") {
    const auto pair = make_regular_pair(20, 0.1);
    const auto mhr = make_mhr_pair(1.0 / 64);
    const auto fam = make_general_family(20, 0.1);
    const Distribution dists[] = {pair.f_minus,
                                  pair.f_plus,
                                  mhr.f0,
                                  mhr.f1,
                                  fam.base,
                                  fam.member(3),
                                  make_point_mass(5),
                                  make_truncated_exponential(0.125, 1, 30)};
    Rng rng(99);
    for (const auto& d : dists) {
        for (int i = 0; i < 200; ++i) {
            const double p = d.support_lo - 1 + (d.support_hi - d.support_lo + 2) * rng.uniform01();
            CHECK(quantile_prob(d, p) + cdf(d, p) == 1.0);
        }
        CHECK(quantile_prob(d, d.support_hi) + cdf(d, d.support_hi) == 1.0);
    }
}

TEST_CASE("revenue spot values") {
    const auto pair = make_regular_pair(20, 0.1);
    CHECK(revenue(pair.f_minus, 10.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(revenue(pair.f_plus, 14.0) == doctest::Approx(2.1).epsilon(1e-12));
    const auto mhr = make_mhr_pair(1.0 / 64);
    CHECK(revenue(mhr.f0, 1.5) == doctest::Approx(1.2).epsilon(1e-12));
}

TEST_CASE("point mass sampling is degenerate") {
    const auto d = make_point_mass(5);
    Rng rng(1);
    for (int i = 0; i < 100; ++i) CHECK(sample(d, rng) == 5.0);
}

TEST_CASE("sample mean of the mhr f0 density matches the analytic integral") {
    // Hand integration of the piecewise-constant density:
    // mean = 0.4*(1.5^2-1)/2 + 1.6*(2^2-1.5^2)/2 = 1.65,
    // var  = 0.4*(1.5^3-1)/3 + 1.6*(2^3-1.5^3)/3 - 1.65^2 = 0.0608333.
    const auto mhr = make_mhr_pair(1.0 / 64);
    Rng rng(20240801);
    const int n = 1000000;
    double sum = 0;
    for (int i = 0; i < n; ++i) sum += sample(mhr.f0, rng);
    const double mean = sum / n;
    const double sigma_mean = std::sqrt(0.0608333 / n);
    CHECK(std::abs(mean - 1.65) <= 3 * sigma_mean);
}

TEST_CASE("general family: frequency of the bulk value 1") {
    const auto fam = make_general_family(20, 0.1);
    Rng rng(555);
    const int n = 1000000;
    int ones = 0;
    for (int i = 0; i < n; ++i) ones += sample(fam.base, rng) == 1.0 ? 1 : 0;
    const double freq = static_cast<double>(ones) / n;
    const double sigma = std::sqrt(0.25 / n);
    CHECK(std::abs(freq - 0.5) <= 3 * sigma);  // Pr[v=1] = 1 - 10/H
}

TEST_CASE("empirical cdf within the DKW band at 0.999") {
    const Distribution dists[] = {make_regular_pair(20, 0.1).f_minus, make_mhr_pair(1.0 / 64).f0,
                                  make_general_family(20, 0.1).member(3),
                                  make_truncated_exponential(0.125, 1, 30)};
    const int n = 1000000;
    const double band = std::sqrt(std::log(2.0 / 0.001) / (2.0 * n));
    std::uint64_t seed = 7;
    for (const auto& d : dists) {
        Rng rng(seed++);
        std::vector<double> xs(n);
        for (auto& x : xs) x = sample(d, rng);
        std::sort(xs.begin(), xs.end());
        // sup|F_hat - F| probed on a grid plus around each atom.
        std::vector<double> probes;
        for (int i = 0; i <= 400; ++i) {
            probes.push_back(d.support_lo + (d.support_hi - d.support_lo) * i / 400.0);
        }
        for (double a : notable_prices(d)) {
            probes.push_back(a);
            probes.push_back(std::nextafter(a, 1e30));
        }
        double worst = 0;
        for (double v : probes) {
            const auto it = std::lower_bound(xs.begin(), xs.end(), v);
            const double emp = static_cast<double>(it - xs.begin()) / n;  // Pr[sample < v]
            worst = std::max(worst, std::abs(emp - cdf(d, v)));
        }
        CHECK(worst <= band);
    }
}

TEST_CASE("value_at_quantile inverts quantile_prob") {
    const Distribution dists[] = {make_regular_pair(20, 0.1).f_plus, make_mhr_pair(1.0 / 64).f1,
                                  make_truncated_exponential(0.125, 1, 30)};
    Rng rng(3);
    for (const auto& d : dists) {
        for (int i = 0; i < 500; ++i) {
            const double t = 1.0 - rng.uniform01();
            const double v = value_at_quantile(d, t);
            CHECK(v >= d.support_lo);
            CHECK(v <= d.support_hi);
            // v(t) is the largest price still selling with probability >= t.
            CHECK(quantile_prob(d, v) >= t - 1e-12);
            if (v < d.support_hi) {
                CHECK(quantile_prob(d, v * 1.0000001) <= t + 1e-9);
            }
        }
    }
}

TEST_CASE("construction rejects invalid inputs") {
    CHECK_THROWS_AS(make_point_mass(-1), std::invalid_argument);
    CHECK_THROWS_AS(make_discrete_atoms({1, 2}, {0.5, 0.6}, DistClass::kGeneral),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_discrete_atoms({2, 1}, {0.5, 0.5}, DistClass::kGeneral),
                    std::invalid_argument);
    // Discontinuous junction.
    CHECK_THROWS_AS(make_piecewise({{1, 2, 0, 1, 0, 1}, {2, 3, 0, 0.2, 0, 1}}, DistClass::kGeneral),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_truncated_exponential(-1, 1, 2), std::invalid_argument);
}

TEST_CASE("json round-trip is lossless") {
    const char* docs[] = {
        R"({"family":"point-mass","params":{"value":5.0}})",
        R"({"family":"truncated-exponential","params":{"hi":30.0,"lo":1.0,"rate":0.125}})",
        R"({"family":"lb-regular-pair","params":{"H":20.0,"eps":0.1,"member":"minus"}})",
        R"({"family":"lb-mhr-pair","params":{"eps":0.015625,"member":"f1"}})",
        R"({"family":"lb-general-family","params":{"H":20.0,"eps":0.1,"k":3}})",
        R"({"family":"discrete-atoms","params":{"class":"general","masses":[0.5,0.5],"values":[1.0,100.0]}})",
    };
    for (const char* doc : docs) {
        const auto d = distribution_from_json(doc);
        const auto out = nlohmann::json::parse(distribution_to_json(d));
        CHECK(out == nlohmann::json::parse(doc));
        // The rebuilt object serializes to the same document again.
        const auto d2 = distribution_from_json(out.dump());
        CHECK(distribution_to_json(d2) == distribution_to_json(d));
    }
    CHECK_THROWS_AS(distribution_from_json(R"({"family":"nope"})"), std::invalid_argument);
    CHECK_THROWS_AS(distribution_from_json("not json"), std::invalid_argument);
}

TEST_CASE("builtin catalogue") {
    CHECK(make_builtin("lb-regular-fminus").support_hi == 20.0);
    CHECK(make_builtin("lb-mhr-f1").class_claim == DistClass::kMhr);
    BuiltinOverrides ov;
    ov.H = 40.0;
    ov.eps = 0.05;
    CHECK(make_builtin("lb-regular-fplus", ov).support_hi == 40.0);
    ov = {};
    ov.k = 3;
    const auto f3 = make_builtin("lb-general", ov);
    CHECK(quantile_prob(f3, 12.5) == doctest::Approx(5.0 / 12.0).epsilon(1e-12));
    CHECK_THROWS_AS(make_builtin("mystery"), std::invalid_argument);
}
