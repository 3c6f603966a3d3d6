#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pqsim/rng.hpp"

namespace pqsim {

enum class DistClass { kRegular, kMhr, kGeneral };

const char* to_string(DistClass c);
DistClass dist_class_from_string(const std::string& s);

// One continuous CDF piece on [lo, hi) with sale probability
//   q(v) = (a*v + b) / (c*v + d),
// nonincreasing on the piece. Covers the rational and linear closed forms
// used by the built-in instances exactly (no tabulation).
struct MobiusPiece {
    double lo = 0, hi = 0;
    double a = 0, b = 0, c = 0, d = 1;

    double q_at(double v) const { return (a * v + b) / (c * v + d); }
    // Solves q(v) = t for v.
    double invert(double t) const { return (t * d - b) / (a - t * c); }
    // f(v) = -q'(v).
    double density(double v) const {
        const double den = c * v + d;
        return (b * c - a * d) / (den * den);
    }
};

// Continuous on [lo, hi) with an optional atom at hi whose mass equals the
// limit of q there, so total mass is exactly 1.
struct PiecewiseCdf {
    std::vector<MobiusPiece> pieces;
    double top_atom = 0;
    std::vector<double> q_starts;  // q at each piece's lo; descending
};

struct DiscreteAtoms {
    std::vector<double> values;  // ascending
    std::vector<double> masses;
    std::vector<double> suffix;  // suffix[i] = sum(masses[i..])
};

struct PointMass {
    double value = 0;
};

// q(v) = exp(-rate*(v-lo)) on [lo, hi), atom exp(-rate*(hi-lo)) at hi.
// Not one of the lower-bound constructions; a smooth MHR test fixture.
struct TruncatedExponential {
    double rate = 1;
    double lo = 1, hi = 2;
    double top_atom = 0;
};

using Family = std::variant<PiecewiseCdf, DiscreteAtoms, PointMass, TruncatedExponential>;

// A single-buyer value distribution with analytic sale probability,
// revenue and inverse-CDF sampling. Immutable after construction and safe
// to share across threads.
struct Distribution {
    Family family;
    double support_lo = 0;
    double support_hi = 0;
    DistClass class_claim = DistClass::kGeneral;
    // JSON document this distribution was built from; round-trips losslessly.
    std::string spec_json;
};

// CDF under the strict convention: Pr[value < v]. Atoms at v are excluded,
// so a posted price equal to an atom still sells.
double cdf(const Distribution& d, double v);

// Sale probability q(p) = Pr[value >= p] = 1 - cdf(p). Exact complement of
// cdf by construction.
double quantile_prob(const Distribution& d, double p);

// Rev(p) = p * q(p).
double revenue(const Distribution& d, double p);

// Generalized inverse: sup{ p : q(p) >= t } for t in (0, 1].
double value_at_quantile(const Distribution& d, double t);

// One inverse-CDF draw; advances rng.
double sample(const Distribution& d, Rng& rng);

// Closed-form density on continuous pieces; nullopt at atoms and for
// discrete families.
std::optional<double> density_at(const Distribution& d, double v);

// Breakpoints (piece junctions) and atom locations, ascending. These get
// injected into every scan grid so that atom revenue is never missed.
std::vector<double> notable_prices(const Distribution& d);

// Constructors. All validate the CDF invariants (monotone q, continuity at
// junctions, unit total mass) and reject violations with invalid_argument.
Distribution make_point_mass(double value);
Distribution make_discrete_atoms(std::vector<double> values, std::vector<double> masses,
                                 DistClass cls = DistClass::kGeneral);
Distribution make_piecewise(std::vector<MobiusPiece> pieces, DistClass cls);
Distribution make_truncated_exponential(double rate, double lo, double hi);

// JSON interface: {"family": ..., "params": {...}}. See README for the
// per-family parameter names. from_json also understands the built-in
// lower-bound family names (lb-regular-pair, lb-mhr-pair,
// lb-general-family).
Distribution distribution_from_json(const std::string& doc);
std::string distribution_to_json(const Distribution& d);

// Named built-ins for the CLI: lb-regular-fminus, lb-regular-fplus,
// lb-mhr-f0, lb-mhr-f1, lb-general, trunc-exp, point-mass.
struct BuiltinOverrides {
    std::optional<double> H, eps, rate, value;
    std::optional<int> k;
};
Distribution make_builtin(const std::string& name, const BuiltinOverrides& ov = {});

}  // namespace pqsim
