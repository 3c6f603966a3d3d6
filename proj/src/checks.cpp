#include "pqsim/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pqsim {

namespace {

// Geometric grid over [lo, hi] with notable prices injected, sorted+deduped.
std::vector<double> scan_grid(const Distribution& d, std::size_t n, double lo, double hi) {
    std::vector<double> g;
    g.reserve(n + 8);
    const double glo = lo > 0 ? lo : hi * 1e-9;
    if (hi > glo && n >= 2) {
        const double ratio = std::log(hi / glo);
        for (std::size_t i = 0; i < n; ++i) {
            g.push_back(glo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(n - 1)));
        }
    } else {
        g.push_back(hi);
    }
    for (double p : notable_prices(d)) {
        if (p >= lo && p <= hi) g.push_back(p);
    }
    if (lo >= 0) g.push_back(lo);
    g.push_back(hi);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    while (!g.empty() && g.front() < lo) g.erase(g.begin());
    return g;
}

std::string triple_msg(const char* space, double x1, double x2, double x3, double gap) {
    std::ostringstream os;
    os << "midpoint concavity violated in " << space << " space at (" << x1 << ", " << x2 << ", "
       << x3 << "), gap " << gap;
    return os.str();
}

// Midpoint concavity of y(x): consecutive triples over the uniform grid plus
// controlled-width probes around each special point (piece junction, atom
// level). Special points are probed separately rather than merged into the
// grid: a junction landing within an ulp of a grid point would otherwise
// create a degenerate triple that masks the kink.
template <typename F>
CheckReport concave_check(const std::vector<double>& grid, const std::vector<double>& special,
                          double dom_lo, double dom_hi, F&& y, double tol, const char* space) {
    auto test = [&](double x1, double x2, double x3) -> CheckReport {
        const double w = x3 - x1;
        if (!(x1 < x2 && x2 < x3)) return {};
        const double interp = (y(x1) * (x3 - x2) + y(x3) * (x2 - x1)) / w;
        const double gap = interp - y(x2);
        if (gap > tol) return {false, triple_msg(space, x1, x2, x3, gap)};
        return {};
    };
    for (std::size_t i = 0; i + 2 < grid.size(); ++i) {
        if (auto r = test(grid[i], grid[i + 1], grid[i + 2]); !r.ok) return r;
    }
    const double span = dom_hi - dom_lo;
    for (double s : special) {
        for (double rel : {1e-3, 1e-5, 1e-7}) {
            const double h = span * rel;
            const double probes[][3] = {
                {s - h, s, s + h},          // kink at the middle
                {s, s + h, s + 2 * h},      // step: middle and right on one side
                {s - 2 * h, s - h, s},      // step: left and middle on one side
            };
            for (const auto& p : probes) {
                if (p[0] < dom_lo || p[2] > dom_hi) continue;
                if (auto r = test(p[0], p[1], p[2]); !r.ok) return r;
            }
        }
    }
    return {};
}

}  // namespace

OptResult brute_force_opt(const Distribution& d, std::size_t grid_points) {
    return brute_force_opt_constrained(d, grid_points, d.support_lo, d.support_hi, 0.0);
}

OptResult brute_force_opt_constrained(const Distribution& d, std::size_t grid_points, double lo,
                                      double hi, double gamma) {
    if (!std::isfinite(d.support_hi)) {
        throw std::invalid_argument("brute_force_opt: unbounded support");
    }
    if (grid_points < 1000) throw std::invalid_argument("brute_force_opt: grid_points < 1e3");
    const auto grid = scan_grid(d, grid_points, std::max(lo, 0.0), std::min(hi, d.support_hi));
    OptResult best;
    best.grid_resolution = grid.size();
    for (double p : grid) {
        const double q = quantile_prob(d, p);
        if (q < gamma) continue;
        const double rev = p * q;
        if (rev > best.opt_revenue) {
            best.opt_revenue = rev;
            best.opt_price = p;
        }
    }
    return best;
}

CheckReport check_regular(const Distribution& d, std::size_t grid_points, double tol) {
    // Uniform quantile levels in (0, 1]; junction/atom levels probed apart.
    std::vector<double> ts;
    ts.reserve(grid_points);
    const double n = static_cast<double>(grid_points);
    for (std::size_t j = 1; j <= grid_points; ++j) ts.push_back(static_cast<double>(j) / n);

    std::vector<double> special;
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, PiecewiseCdf>) {
                for (double q : f.q_starts) special.push_back(q);
                if (f.top_atom > 0) special.push_back(f.top_atom);
            } else if constexpr (std::is_same_v<T, DiscreteAtoms>) {
                for (double s : f.suffix) special.push_back(s);
            } else if constexpr (std::is_same_v<T, TruncatedExponential>) {
                if (f.top_atom > 0) special.push_back(f.top_atom);
            }
        },
        d.family);

    return concave_check(
        ts, special, 1.0 / n, 1.0, [&](double t) { return t * value_at_quantile(d, t); }, tol,
        "quantile");
}

CheckReport check_mhr(const Distribution& d, std::size_t grid_points, double tol) {
    if (std::holds_alternative<PointMass>(d.family)) return {};
    if (const auto* da = std::get_if<DiscreteAtoms>(&d.family)) {
        if (da->values.size() == 1) return {};
        return {false, "hazard rate undefined for multi-atom discrete family"};
    }

    // Closed-form hazard per piece; require nondecreasing within pieces and
    // upward jumps across junctions, with relative slack.
    struct Segment {
        double lo, hi;
    };
    std::vector<Segment> segs;
    if (const auto* pw = std::get_if<PiecewiseCdf>(&d.family)) {
        for (const auto& pc : pw->pieces) segs.push_back({pc.lo, pc.hi});
    } else {
        const auto& te = std::get<TruncatedExponential>(d.family);
        segs.push_back({te.lo, te.hi});
    }

    const std::size_t per = std::max<std::size_t>(grid_points / segs.size(), 16);
    double prev_h = -std::numeric_limits<double>::infinity();
    double prev_v = d.support_lo;
    for (const auto& s : segs) {
        for (std::size_t j = 0; j < per; ++j) {
            // Stay strictly inside the piece; hazard may blow up at the top.
            const double v = s.lo + (s.hi - s.lo) * (static_cast<double>(j) + 0.5) /
                                        static_cast<double>(per);
            const auto f = density_at(d, v);
            const double q = quantile_prob(d, v);
            if (!f || q <= 0) continue;
            const double h = *f / q;
            const double slack = tol * std::max(1.0, std::abs(prev_h));
            if (h < prev_h - slack) {
                std::ostringstream os;
                os << "hazard decreases from " << prev_h << " at v=" << prev_v << " to " << h
                   << " at v=" << v;
                return {false, os.str()};
            }
            prev_h = h;
            prev_v = v;
        }
    }
    return {};
}

CheckReport check_half_concavity(const Distribution& d, std::size_t grid_points, double tol) {
    const auto opt = brute_force_opt(d, std::max<std::size_t>(grid_points, 1000));
    const double lo = d.support_lo, hi = opt.opt_price;
    if (hi <= lo) return {};
    std::vector<double> grid;
    grid.reserve(grid_points + 1);
    for (std::size_t j = 0; j <= grid_points; ++j) {
        grid.push_back(lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(grid_points));
    }
    std::vector<double> special;
    for (double p : notable_prices(d)) {
        if (p > lo && p < hi) special.push_back(p);
    }
    return concave_check(
        grid, special, lo, hi, [&](double p) { return revenue(d, p); }, tol, "price");
}

CheckReport check_rev_lower_bounds(const Distribution& d, std::size_t grid_points, double tol) {
    const auto opt = brute_force_opt(d, std::max<std::size_t>(grid_points, 1000));
    auto grid = scan_grid(d, grid_points, d.support_lo, d.support_hi);
    grid.push_back(opt.opt_price);
    std::sort(grid.begin(), grid.end());
    for (double p : grid) {
        const double q = quantile_prob(d, p);
        const double rev = p * q;
        const double bound = p <= opt.opt_price ? opt.opt_revenue * (1.0 - q)
                                                : opt.opt_revenue * q;
        if (rev < bound - tol) {
            std::ostringstream os;
            os << "Rev(" << p << ") = " << rev << " below bound " << bound;
            return {false, os.str()};
        }
    }
    return {};
}

double target_price(const Distribution& d, double eps, std::size_t grid_points) {
    if (!(eps > 0 && eps <= 0.1)) throw std::invalid_argument("target_price: eps must be in (0, 0.1]");
    const auto opt = brute_force_opt(d, grid_points);
    if (quantile_prob(d, opt.opt_price) >= eps) return opt.opt_price;

    // q is nonincreasing with q(support_lo) = 1 >= eps > q(opt_price);
    // bisect for the crossing.
    double lo = d.support_lo, hi = opt.opt_price;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (quantile_prob(d, mid) >= eps) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Continuous crossing: q(lo) == eps up to bisection tolerance. At an atom
    // jump, fall to the smallest price with q(p) <= eps.
    if (std::abs(quantile_prob(d, lo) - eps) <= 1e-9) return lo;
    return hi;
}

}  // namespace pqsim
