#pragma once

#include <cstddef>
#include <string>

#include "pqsim/distribution.hpp"

namespace pqsim {

// Grid-scan revenue maximizer, used as the independent oracle everywhere a
// success criterion needs the true optimum. Scans a geometric grid plus all
// atoms and piece junctions; ties break toward the lowest price.
struct OptResult {
    double opt_price = 0;
    double opt_revenue = 0;
    std::size_t grid_resolution = 0;
};

OptResult brute_force_opt(const Distribution& d, std::size_t grid_points);

// Same scan restricted to prices in [lo, hi] with q(p) >= gamma (q evaluated
// analytically). Benchmark for constrained guarantees.
OptResult brute_force_opt_constrained(const Distribution& d, std::size_t grid_points, double lo,
                                      double hi, double gamma);

struct CheckReport {
    bool ok = true;
    std::string detail;  // first violation, empty when ok
    explicit operator bool() const { return ok; }
};

// Regularity = concavity of the revenue curve in quantile space, tested by
// midpoint inequalities on a uniform quantile grid plus injected piece/atom
// boundary levels. Discrete families are checked on the same (non-ironed)
// step curve.
CheckReport check_regular(const Distribution& d, std::size_t grid_points, double tol);

// Hazard rate f/q nondecreasing, from closed-form piecewise densities;
// checked within pieces and across junctions. Pure-atom families: a single
// atom passes vacuously, mixtures are rejected as undefined.
CheckReport check_mhr(const Distribution& d, std::size_t grid_points, double tol);

// Concavity of Rev(p) in price space on [support_lo, opt_price].
CheckReport check_half_concavity(const Distribution& d, std::size_t grid_points, double tol);

// Rev(p) >= Opt*(1-q(p)) left of the optimum and Rev(p) >= Opt*q(p) right of
// it, on a price grid spanning the support.
CheckReport check_rev_lower_bounds(const Distribution& d, std::size_t grid_points, double tol);

// The near-optimal representative price: the optimum itself while its sale
// probability is at least eps, otherwise the price with q(p) = eps (by
// bisection; at an atom jump, the smallest price with q(p) <= eps).
// Guarantees Rev >= (1-eps)*Opt for regular d.
double target_price(const Distribution& d, double eps, std::size_t grid_points);

}  // namespace pqsim
