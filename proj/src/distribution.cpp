#include "pqsim/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pqsim {

namespace {

constexpr double kJunctionTol = 1e-9;

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

const char* to_string(DistClass c) {
    switch (c) {
        case DistClass::kRegular: return "regular";
        case DistClass::kMhr: return "mhr";
        case DistClass::kGeneral: return "general";
    }
    return "general";
}

DistClass dist_class_from_string(const std::string& s) {
    if (s == "regular") return DistClass::kRegular;
    if (s == "mhr") return DistClass::kMhr;
    if (s == "general") return DistClass::kGeneral;
    throw std::invalid_argument("unknown distribution class: " + s);
}

// ---------------------------------------------------------------------------
// Per-family sale probability q(p) on the open interior (lo, hi).
// ---------------------------------------------------------------------------

namespace {

double interior_q(const PiecewiseCdf& f, double p) {
    // Pieces are few (<= 4 for all built-ins); linear scan.
    for (const auto& pc : f.pieces) {
        if (p < pc.hi) return pc.q_at(p);
    }
    return f.top_atom;
}

double interior_q(const DiscreteAtoms& f, double p) {
    const auto it = std::lower_bound(f.values.begin(), f.values.end(), p);
    if (it == f.values.end()) return 0.0;
    return f.suffix[static_cast<std::size_t>(it - f.values.begin())];
}

double interior_q(const TruncatedExponential& f, double p) {
    return std::exp(-f.rate * (p - f.lo));
}

double top_atom_mass(const Family& fam) {
    if (const auto* pw = std::get_if<PiecewiseCdf>(&fam)) return pw->top_atom;
    if (const auto* da = std::get_if<DiscreteAtoms>(&fam)) return da->masses.back();
    if (std::holds_alternative<PointMass>(fam)) return 1.0;
    return std::get<TruncatedExponential>(fam).top_atom;
}

}  // namespace

double quantile_prob(const Distribution& d, double p) {
    if (p <= d.support_lo) return 1.0;
    if (p > d.support_hi) return 0.0;
    if (p == d.support_hi) return top_atom_mass(d.family);
    return std::visit(
        [&](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, PointMass>) {
                return 1.0;  // p in (lo, hi) impossible for a point mass
            } else {
                return interior_q(f, p);
            }
        },
        d.family);
}

double cdf(const Distribution& d, double v) { return 1.0 - quantile_prob(d, v); }

double revenue(const Distribution& d, double p) { return p * quantile_prob(d, p); }

// ---------------------------------------------------------------------------
// Generalized inverse and sampling
// ---------------------------------------------------------------------------

double value_at_quantile(const Distribution& d, double t) {
    if (t <= 0.0 || t > 1.0) throw std::invalid_argument("quantile level must be in (0, 1]");
    return std::visit(
        [&](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, PointMass>) {
                return f.value;
            } else if constexpr (std::is_same_v<T, DiscreteAtoms>) {
                // Largest value whose suffix mass still covers t.
                std::size_t i = 0;
                for (std::size_t j = f.suffix.size(); j-- > 0;) {
                    if (f.suffix[j] >= t) {
                        i = j;
                        break;
                    }
                }
                return f.values[i];
            } else if constexpr (std::is_same_v<T, TruncatedExponential>) {
                if (t <= f.top_atom) return f.hi;
                return std::min(f.hi, f.lo + std::log(1.0 / t) / f.rate);
            } else {
                if (t <= f.top_atom) return f.pieces.back().hi;
                for (std::size_t j = f.pieces.size(); j-- > 0;) {
                    if (t <= f.q_starts[j]) {
                        const double v = f.pieces[j].invert(t);
                        // Clamp inversion round-off back onto the piece.
                        return std::clamp(v, f.pieces[j].lo, f.pieces[j].hi);
                    }
                }
                return f.pieces.front().lo;
            }
        },
        d.family);
}

double sample(const Distribution& d, Rng& rng) {
    const double t = 1.0 - rng.uniform01();  // t in (0, 1]
    return value_at_quantile(d, t);
}

std::optional<double> density_at(const Distribution& d, double v) {
    if (v < d.support_lo || v >= d.support_hi) return std::nullopt;
    if (const auto* pw = std::get_if<PiecewiseCdf>(&d.family)) {
        for (const auto& pc : pw->pieces) {
            if (v < pc.hi) return pc.density(v);
        }
        return std::nullopt;
    }
    if (const auto* te = std::get_if<TruncatedExponential>(&d.family)) {
        return te->rate * std::exp(-te->rate * (v - te->lo));
    }
    return std::nullopt;
}

std::vector<double> notable_prices(const Distribution& d) {
    std::vector<double> out;
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, PointMass>) {
                out.push_back(f.value);
            } else if constexpr (std::is_same_v<T, DiscreteAtoms>) {
                out = f.values;
            } else if constexpr (std::is_same_v<T, TruncatedExponential>) {
                out = {f.lo, f.hi};
            } else {
                for (const auto& pc : f.pieces) out.push_back(pc.lo);
                out.push_back(f.pieces.back().hi);
            }
        },
        d.family);
    return out;
}

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

Distribution make_point_mass(double value) {
    require(value > 0 && std::isfinite(value), "point mass value must be positive and finite");
    Distribution d;
    d.family = PointMass{value};
    d.support_lo = d.support_hi = value;
    d.class_claim = DistClass::kMhr;
    return d;
}

Distribution make_discrete_atoms(std::vector<double> values, std::vector<double> masses,
                                 DistClass cls) {
    require(!values.empty() && values.size() == masses.size(),
            "discrete atoms: values/masses must be nonempty and same length");
    require(std::is_sorted(values.begin(), values.end()), "discrete atoms: values must ascend");
    require(std::adjacent_find(values.begin(), values.end()) == values.end(),
            "discrete atoms: values must be distinct");
    double total = 0;
    for (double m : masses) {
        require(m > 0 && std::isfinite(m), "discrete atoms: masses must be positive");
        total += m;
    }
    require(std::abs(total - 1.0) <= 1e-9, "discrete atoms: masses must sum to 1");
    require(values.front() > 0, "discrete atoms: values must be positive");

    DiscreteAtoms f;
    f.values = std::move(values);
    f.masses = std::move(masses);
    f.suffix.assign(f.masses.size(), 0.0);
    double acc = 0;
    for (std::size_t i = f.masses.size(); i-- > 0;) {
        acc += f.masses[i];
        f.suffix[i] = acc;
    }
    f.suffix[0] = 1.0;  // pin the exact total

    Distribution d;
    d.support_lo = f.values.front();
    d.support_hi = f.values.back();
    d.family = std::move(f);
    d.class_claim = cls;
    return d;
}

Distribution make_piecewise(std::vector<MobiusPiece> pieces, DistClass cls) {
    require(!pieces.empty(), "piecewise cdf: needs at least one piece");
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const auto& pc = pieces[i];
        require(pc.lo < pc.hi, "piecewise cdf: piece interval must be nonempty");
        if (i > 0) require(pieces[i - 1].hi == pc.lo, "piecewise cdf: pieces must be contiguous");
        // Strictly decreasing Mobius on the piece (derivative sign a*d - b*c),
        // which keeps the inverse single-valued.
        require(pc.a * pc.d - pc.b * pc.c < 0, "piecewise cdf: q must be strictly decreasing");
        // No pole inside the piece.
        if (pc.c != 0) {
            const double pole = -pc.d / pc.c;
            require(pole <= pc.lo || pole >= pc.hi, "piecewise cdf: pole inside piece");
        }
    }
    require(std::abs(pieces.front().q_at(pieces.front().lo) - 1.0) <= kJunctionTol,
            "piecewise cdf: q(support_lo) must equal 1");
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
        const double ql = pieces[i].q_at(pieces[i].hi);
        const double qr = pieces[i + 1].q_at(pieces[i + 1].lo);
        require(std::abs(ql - qr) <= kJunctionTol, "piecewise cdf: q discontinuous at junction");
    }

    PiecewiseCdf f;
    f.top_atom = pieces.back().q_at(pieces.back().hi);
    require(f.top_atom >= -kJunctionTol && f.top_atom <= 1.0 + kJunctionTol,
            "piecewise cdf: invalid mass at top of support");
    f.top_atom = std::clamp(f.top_atom, 0.0, 1.0);
    f.q_starts.reserve(pieces.size());
    for (const auto& pc : pieces) f.q_starts.push_back(std::min(1.0, pc.q_at(pc.lo)));
    f.pieces = std::move(pieces);

    Distribution d;
    d.support_lo = f.pieces.front().lo;
    d.support_hi = f.pieces.back().hi;
    d.family = std::move(f);
    d.class_claim = cls;
    return d;
}

Distribution make_truncated_exponential(double rate, double lo, double hi) {
    require(rate > 0 && std::isfinite(rate), "trunc-exp: rate must be positive");
    require(lo > 0 && lo < hi, "trunc-exp: needs 0 < lo < hi");
    TruncatedExponential f;
    f.rate = rate;
    f.lo = lo;
    f.hi = hi;
    f.top_atom = std::exp(-rate * (hi - lo));

    Distribution d;
    d.support_lo = lo;
    d.support_hi = hi;
    d.family = f;
    d.class_claim = DistClass::kMhr;
    return d;
}

}  // namespace pqsim
