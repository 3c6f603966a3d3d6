#include "pqsim/hard_instances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "pqsim/checks.hpp"

namespace pqsim {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

std::string pair_spec(const char* family, double H, double eps, const char* member) {
    nlohmann::json j;
    j["family"] = family;
    if (H > 0) j["params"]["H"] = H;
    j["params"]["eps"] = eps;
    j["params"]["member"] = member;
    return j.dump();
}

}  // namespace

double RegularPair::p_minus_threshold() const { return (1.0 - alpha * eps) * H / (2.0 - alpha); }

double RegularPair::p_plus_threshold() const {
    return (1.0 - alpha * eps) * (2.0 + eps) * H / (3.0 + alpha * (2.0 + eps));
}

RegularPair make_regular_pair(double H, double eps) {
    require(H >= 10, "regular pair: H must be >= 10");
    require(eps > 0 && eps <= 0.1, "regular pair: eps must be in (0, 1/10]");

    const double mid = H / 2.0;

    // Shared head on [1, H/2]: q = (2H-4) / ((H-4)v + H).
    const MobiusPiece head{1.0, mid, 0.0, 2.0 * H - 4.0, H - 4.0, H};

    // F-: q = (2-4e)/(v - He) then (1+e)/(2v - H(1-e)), atom 1/H at H.
    const double knee_m = H * (2.0 - eps) / 3.0;
    std::vector<MobiusPiece> minus = {
        head,
        {mid, knee_m, 0.0, 2.0 - 4.0 * eps, 1.0, -H * eps},
        {knee_m, H, 0.0, 1.0 + eps, 2.0, -H * (1.0 - eps)},
    };

    // F+: q = (2+4e)/(v + He) then (1-e)/(2v - H(1+e)), atom 1/H at H.
    const double knee_p = H * (2.0 + eps) / 3.0;
    std::vector<MobiusPiece> plus = {
        head,
        {mid, knee_p, 0.0, 2.0 + 4.0 * eps, 1.0, H * eps},
        {knee_p, H, 0.0, 1.0 - eps, 2.0, -H * (1.0 + eps)},
    };

    // In quantile space both curves are piecewise linear. F- has slopes
    // H, H(1-eps)/2, H*eps, -H/(H-4): always concave. F+ has slopes
    // H, H(1+eps)/2, -H*eps, -H/(H-4): concave iff eps <= 1/(H-4), i.e. the
    // kink at H/2 turns convex for large eps*H.
    const DistClass plus_class =
        eps <= 1.0 / (H - 4.0) ? DistClass::kRegular : DistClass::kGeneral;

    RegularPair out;
    out.H = H;
    out.eps = eps;
    out.f_minus = make_piecewise(std::move(minus), DistClass::kRegular);
    out.f_minus.spec_json = pair_spec("lb-regular-pair", H, eps, "minus");
    out.f_plus = make_piecewise(std::move(plus), plus_class);
    out.f_plus.spec_json = pair_spec("lb-regular-pair", H, eps, "plus");
    return out;
}

MhrPair make_mhr_pair(double eps) {
    require(eps > 0 && eps <= 1.0 / 64.0, "mhr pair: eps must be in (0, 1/64]");
    const double alpha = 16.0 * eps;
    const double d2 = (0.8 - 0.4 * alpha) / (0.5 - alpha);

    // Densities 0.4 / 1.6 (resp. 0.4 / d2) translate to linear q pieces.
    std::vector<MobiusPiece> f0 = {
        {1.0, 1.5, -0.4, 1.4, 0.0, 1.0},
        {1.5, 2.0, -1.6, 3.2, 0.0, 1.0},
    };
    const double split = 1.5 + alpha;
    std::vector<MobiusPiece> f1 = {
        {1.0, split, -0.4, 1.4, 0.0, 1.0},
        {split, 2.0, -d2, 2.0 * d2, 0.0, 1.0},
    };

    MhrPair out;
    out.eps = eps;
    out.alpha = alpha;
    out.d2 = d2;
    out.f0 = make_piecewise(std::move(f0), DistClass::kMhr);
    out.f0.spec_json = pair_spec("lb-mhr-pair", 0, eps, "f0");
    out.f1 = make_piecewise(std::move(f1), DistClass::kMhr);
    out.f1.spec_json = pair_spec("lb-mhr-pair", 0, eps, "f1");
    return out;
}

const Distribution& GeneralFamily::member(std::size_t k) const {
    if (k == 0) return base;
    if (k <= perturbed.size()) return perturbed[k - 1];
    throw std::invalid_argument("general family: member index out of range");
}

GeneralFamily make_general_family(double H, double eps) {
    require(H >= 20, "general family: H must be >= 20");
    require(eps > 0 && eps < 0.1 + 1e-12, "general family: eps must be in (0, 1/10]");
    const double inv = 1.0 / eps;
    require(std::abs(inv - std::round(inv)) <= 1e-9, "general family: 1/eps must be an integer");

    GeneralFamily out;
    out.H = H;
    out.eps = eps;
    out.delta_step = H * eps / 2.0;
    out.K = static_cast<std::size_t>(std::llround(inv)) + 1;

    out.support.resize(out.K);
    for (std::size_t k = 0; k < out.K; ++k) {
        out.support[k] = H / 2.0 + static_cast<double>(k) * out.delta_step;
    }
    out.support.back() = H;  // p_K = H exactly

    // Base masses: w_k = 5*delta/(p_k p_{k+1}) for k < K, w_K = 5/H, plus the
    // bulk atom 1 - 10/H at value 1 so everything sums to one.
    std::vector<double> w(out.K);
    for (std::size_t k = 0; k + 1 < out.K; ++k) {
        w[k] = 5.0 * out.delta_step / (out.support[k] * out.support[k + 1]);
    }
    w.back() = 5.0 / H;

    auto family_spec = [&](std::size_t k) {
        nlohmann::json j;
        j["family"] = "lb-general-family";
        j["params"]["H"] = H;
        j["params"]["eps"] = eps;
        j["params"]["k"] = k;
        return j.dump();
    };

    auto build = [&](std::size_t shift_k) {
        std::vector<double> values = {1.0};
        std::vector<double> masses = {1.0 - 10.0 / H};
        for (std::size_t j = 0; j < out.K; ++j) {
            double m = w[j];
            if (shift_k > 0) {
                if (j + 1 == shift_k) continue;           // mass moved away
                if (j == shift_k) m += w[shift_k - 1];                // and landed here
            }
            values.push_back(out.support[j]);
            masses.push_back(m);
        }
        Distribution d = make_discrete_atoms(std::move(values), std::move(masses));
        d.spec_json = family_spec(shift_k);
        return d;
    };

    out.base = build(0);
    out.perturbed.reserve(out.K - 1);
    for (std::size_t k = 1; k < out.K; ++k) out.perturbed.push_back(build(k));
    return out;
}

SeparationResult separation_check(const std::vector<const Distribution*>& members,
                                  double approx_factor, std::size_t grid_points) {
    require(!members.empty(), "separation check: no members");
    require(approx_factor > 0 && approx_factor < 1, "separation check: factor must be in (0,1)");

    SeparationResult res;
    res.sets.reserve(members.size());
    for (const Distribution* d : members) {
        const auto opt = brute_force_opt(*d, grid_points);
        // Recover the qualifying set from the same grid the optimum used.
        SeparationResult::Hull hull;
        hull.opt_price = opt.opt_price;
        hull.opt_revenue = opt.opt_revenue;
        hull.lo = std::numeric_limits<double>::infinity();
        hull.hi = -std::numeric_limits<double>::infinity();
        const double target = approx_factor * opt.opt_revenue;

        const double glo = d->support_lo > 0 ? d->support_lo : d->support_hi * 1e-9;
        const double ratio = std::log(d->support_hi / glo);
        auto probe = [&](double p) {
            if (revenue(*d, p) >= target) {
                hull.lo = std::min(hull.lo, p);
                hull.hi = std::max(hull.hi, p);
                ++hull.points;
            }
        };
        for (std::size_t i = 0; i < grid_points; ++i) {
            probe(glo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(grid_points - 1)));
        }
        for (double p : notable_prices(*d)) probe(p);
        res.sets.push_back(hull);
    }

    res.disjoint = true;
    for (std::size_t i = 0; i < res.sets.size() && res.disjoint; ++i) {
        for (std::size_t j = i + 1; j < res.sets.size(); ++j) {
            const auto& a = res.sets[i];
            const auto& b = res.sets[j];
            if (a.lo <= b.hi && b.lo <= a.hi) {
                res.disjoint = false;
                break;
            }
        }
    }
    if (res.disjoint && res.sets.size() == 2) {
        const auto& left = res.sets[0].hi < res.sets[1].lo ? res.sets[0] : res.sets[1];
        const auto& right = res.sets[0].hi < res.sets[1].lo ? res.sets[1] : res.sets[0];
        res.witness_threshold = 0.5 * (left.hi + right.lo);
    }
    return res;
}

SeparationResult separation_check(const RegularPair& pair, double approx_factor,
                                  std::size_t grid_points) {
    return separation_check({&pair.f_minus, &pair.f_plus}, approx_factor, grid_points);
}

SeparationResult separation_check(const MhrPair& pair, double approx_factor,
                                  std::size_t grid_points) {
    return separation_check({&pair.f0, &pair.f1}, approx_factor, grid_points);
}

SeparationResult separation_check(const GeneralFamily& family, double approx_factor,
                                  std::size_t grid_points) {
    std::vector<const Distribution*> members;
    members.reserve(family.perturbed.size());
    for (const auto& d : family.perturbed) members.push_back(&d);
    return separation_check(members, approx_factor, grid_points);
}

}  // namespace pqsim
