#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "pqsim/distribution.hpp"

namespace pqsim {

// Closed-form instance pairs/families whose near-optimal price sets are
// provably separated. CDFs are exact rational piecewise functions: the
// separation margins are O(eps^2) and tabulation error would swamp them.

// Two distributions on [1, H] with identical CDFs on [1, H/2] and an atom at
// H. F- peaks at H/2 with revenue 2; F+ peaks at H(2+eps)/3 with revenue
// 2+eps.
struct RegularPair {
    Distribution f_plus;
    Distribution f_minus;
    double H = 0;
    double eps = 0;
    double alpha = 0.01;  // approximation-slack constant in the thresholds

    // No price clears (1 - alpha*eps) of the optimum for both members when
    // the threshold lies strictly between these two prices.
    double p_minus_threshold() const;
    double p_plus_threshold() const;
};
RegularPair make_regular_pair(double H, double eps);

// Piecewise-constant-density MHR pair on [1, 2]; densities agree (0.4) on
// [1, 1.5) and differ only in where the steep part starts.
struct MhrPair {
    Distribution f0;
    Distribution f1;
    double eps = 0;
    double alpha = 0;  // 16*eps
    double d2 = 0;     // (0.8 - 0.4*alpha) / (0.5 - alpha)
};
MhrPair make_mhr_pair(double eps);

// Discrete family on {1} U {p_1..p_K}: the base has constant revenue 5 on
// the support grid; member k moves the mass at p_k up to p_{k+1}.
struct GeneralFamily {
    Distribution base;                   // F_0
    std::vector<Distribution> perturbed;  // F_1 .. F_{K-1}
    double H = 0;
    double eps = 0;
    double delta_step = 0;  // H*eps/2
    std::size_t K = 0;      // 1/eps + 1
    std::vector<double> support;  // p_1..p_K

    const Distribution& member(std::size_t k) const;  // k = 0 is the base
};
GeneralFamily make_general_family(double H, double eps);

// Near-optimal price sets at a multiplicative factor, computed on a fine
// geometric grid (plus atoms/breakpoints), and their pairwise disjointness.
struct SeparationResult {
    struct Hull {
        double lo = 0, hi = 0;   // range of qualifying grid prices
        std::size_t points = 0;  // how many grid prices qualified
        double opt_price = 0;
        double opt_revenue = 0;
    };
    bool disjoint = false;
    std::optional<double> witness_threshold;  // midpoint of the gap, two-member case
    std::vector<Hull> sets;
};

SeparationResult separation_check(const std::vector<const Distribution*>& members,
                                  double approx_factor, std::size_t grid_points);
SeparationResult separation_check(const RegularPair& pair, double approx_factor,
                                  std::size_t grid_points);
SeparationResult separation_check(const MhrPair& pair, double approx_factor,
                                  std::size_t grid_points);
SeparationResult separation_check(const GeneralFamily& family, double approx_factor,
                                  std::size_t grid_points);

}  // namespace pqsim
