#include <stdexcept>

#include "json.hpp"
#include "pqsim/distribution.hpp"
#include "pqsim/hard_instances.hpp"

namespace pqsim {

namespace {

using nlohmann::json;

Distribution finish(Distribution d, const json& doc) {
    d.spec_json = doc.dump();
    return d;
}

DistClass class_of(const json& params, DistClass fallback) {
    if (params.contains("class")) return dist_class_from_string(params.at("class").get<std::string>());
    return fallback;
}

}  // namespace

Distribution distribution_from_json(const std::string& doc_text) {
    json doc;
    try {
        doc = json::parse(doc_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("distribution json: ") + e.what());
    }
    if (!doc.contains("family")) throw std::invalid_argument("distribution json: missing family");
    const std::string family = doc.at("family").get<std::string>();
    const json params = doc.value("params", json::object());

    if (family == "point-mass") {
        return finish(make_point_mass(params.at("value").get<double>()), doc);
    }
    if (family == "discrete-atoms") {
        auto d = make_discrete_atoms(params.at("values").get<std::vector<double>>(),
                                     params.at("masses").get<std::vector<double>>(),
                                     class_of(params, DistClass::kGeneral));
        return finish(std::move(d), doc);
    }
    if (family == "piecewise-cdf") {
        std::vector<MobiusPiece> pieces;
        for (const auto& pj : params.at("pieces")) {
            pieces.push_back({pj.at("lo").get<double>(), pj.at("hi").get<double>(),
                              pj.at("a").get<double>(), pj.at("b").get<double>(),
                              pj.at("c").get<double>(), pj.at("d").get<double>()});
        }
        return finish(make_piecewise(std::move(pieces), class_of(params, DistClass::kGeneral)),
                      doc);
    }
    if (family == "truncated-exponential") {
        return finish(make_truncated_exponential(params.at("rate").get<double>(),
                                                 params.value("lo", 1.0),
                                                 params.at("hi").get<double>()),
                      doc);
    }
    if (family == "lb-regular-pair") {
        const auto pair = make_regular_pair(params.at("H").get<double>(),
                                            params.at("eps").get<double>());
        const std::string member = params.at("member").get<std::string>();
        if (member == "plus") return pair.f_plus;
        if (member == "minus") return pair.f_minus;
        throw std::invalid_argument("lb-regular-pair: member must be plus or minus");
    }
    if (family == "lb-mhr-pair") {
        const auto pair = make_mhr_pair(params.at("eps").get<double>());
        const std::string member = params.at("member").get<std::string>();
        if (member == "f0") return pair.f0;
        if (member == "f1") return pair.f1;
        throw std::invalid_argument("lb-mhr-pair: member must be f0 or f1");
    }
    if (family == "lb-general-family") {
        const auto fam = make_general_family(params.at("H").get<double>(),
                                             params.at("eps").get<double>());
        return fam.member(params.value("k", std::size_t{0}));
    }
    throw std::invalid_argument("unknown distribution family: " + family);
}

std::string distribution_to_json(const Distribution& d) {
    if (!d.spec_json.empty()) return d.spec_json;

    // Distributions built programmatically still serialize canonically.
    json doc;
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, PointMass>) {
                doc["family"] = "point-mass";
                doc["params"]["value"] = f.value;
            } else if constexpr (std::is_same_v<T, DiscreteAtoms>) {
                doc["family"] = "discrete-atoms";
                doc["params"]["values"] = f.values;
                doc["params"]["masses"] = f.masses;
                doc["params"]["class"] = to_string(d.class_claim);
            } else if constexpr (std::is_same_v<T, TruncatedExponential>) {
                doc["family"] = "truncated-exponential";
                doc["params"]["rate"] = f.rate;
                doc["params"]["lo"] = f.lo;
                doc["params"]["hi"] = f.hi;
            } else {
                doc["family"] = "piecewise-cdf";
                doc["params"]["class"] = to_string(d.class_claim);
                auto arr = json::array();
                for (const auto& pc : f.pieces) {
                    arr.push_back({{"lo", pc.lo},
                                   {"hi", pc.hi},
                                   {"a", pc.a},
                                   {"b", pc.b},
                                   {"c", pc.c},
                                   {"d", pc.d}});
                }
                doc["params"]["pieces"] = arr;
            }
        },
        d.family);
    return doc.dump();
}

Distribution make_builtin(const std::string& name, const BuiltinOverrides& ov) {
    using nlohmann::json;
    json doc;
    auto& p = doc["params"];
    if (name == "lb-regular-fminus" || name == "lb-regular-fplus") {
        doc["family"] = "lb-regular-pair";
        p["H"] = ov.H.value_or(20.0);
        p["eps"] = ov.eps.value_or(0.1);
        p["member"] = name == "lb-regular-fplus" ? "plus" : "minus";
    } else if (name == "lb-mhr-f0" || name == "lb-mhr-f1") {
        doc["family"] = "lb-mhr-pair";
        p["eps"] = ov.eps.value_or(1.0 / 64.0);
        p["member"] = name == "lb-mhr-f1" ? "f1" : "f0";
    } else if (name == "lb-general") {
        doc["family"] = "lb-general-family";
        p["H"] = ov.H.value_or(20.0);
        p["eps"] = ov.eps.value_or(0.1);
        p["k"] = ov.k.value_or(0);
    } else if (name == "trunc-exp") {
        doc["family"] = "truncated-exponential";
        p["rate"] = ov.rate.value_or(0.125);
        p["lo"] = 1.0;
        p["hi"] = ov.H.value_or(30.0);
    } else if (name == "point-mass") {
        doc["family"] = "point-mass";
        p["value"] = ov.value.value_or(5.0);
    } else {
        throw std::invalid_argument("unknown builtin distribution: " + name);
    }
    return distribution_from_json(doc.dump());
}

}  // namespace pqsim
