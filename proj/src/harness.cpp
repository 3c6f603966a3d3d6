#include "pqsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "pqsim/estimation.hpp"
#include "pqsim/grid_search.hpp"
#include "pqsim/instantiation.hpp"

namespace pqsim {

namespace {

using nlohmann::json;

enum class Setting { kRegularRange, kMhrRange, kRegularSample, kMhrSample, kGeneralRange };

Setting parse_setting(const std::string& s) {
    if (s == "regular-range") return Setting::kRegularRange;
    if (s == "mhr-range") return Setting::kMhrRange;
    if (s == "regular-sample") return Setting::kRegularSample;
    if (s == "mhr-sample") return Setting::kMhrSample;
    if (s == "general-range") return Setting::kGeneralRange;
    throw std::invalid_argument("unknown setting: " + s);
}

// Class requirements: the range/sample recipes assume regularity (MHR
// qualifies, being a subclass); the mhr recipes need MHR proper.
void check_class(Setting s, const Distribution& d) {
    const bool is_mhr = d.class_claim == DistClass::kMhr;
    const bool is_regular = is_mhr || d.class_claim == DistClass::kRegular;
    switch (s) {
        case Setting::kRegularRange:
        case Setting::kRegularSample:
            if (!is_regular) {
                throw std::invalid_argument("setting requires a regular distribution, got class " +
                                            std::string(to_string(d.class_claim)));
            }
            break;
        case Setting::kMhrRange:
        case Setting::kMhrSample:
            if (!is_mhr) {
                throw std::invalid_argument("setting requires an MHR distribution, got class " +
                                            std::string(to_string(d.class_claim)));
            }
            break;
        case Setting::kGeneralRange: break;
    }
}

SearchParams params_for_range_setting(Setting s, const ExperimentConfig& cfg, double H) {
    if (s == Setting::kRegularRange) return regular_value_range(H, cfg.eps, cfg.delta, cfg.C);
    return mhr_value_range(H, cfg.eps, cfg.delta, cfg.C);
}

constexpr std::size_t kBenchmarkGrid = 1000000;

}  // namespace

double ExperimentConfig::resolved_success_factor() const {
    if (success_factor > 0) return success_factor;
    switch (parse_setting(setting)) {
        case Setting::kRegularRange: return success_factor_regular_range(eps);
        case Setting::kMhrRange: return success_factor_mhr_range(eps);
        case Setting::kRegularSample: return success_factor_regular_sample(eps);
        case Setting::kMhrSample: return success_factor_mhr_sample(eps);
        case Setting::kGeneralRange: return success_factor_general_range(eps);
    }
    return 0;
}

std::uint64_t theoretical_query_bound(const ExperimentConfig& cfg) {
    const Setting s = parse_setting(cfg.setting);
    const Distribution d = distribution_from_json(cfg.distribution_json);
    const double H = d.support_hi;
    switch (s) {
        case Setting::kGeneralRange: {
            const auto grid = grid_for_general(H, cfg.eps);
            return grid.size() * per_price_budget(H, cfg.eps, cfg.delta);
        }
        case Setting::kRegularRange:
        case Setting::kMhrRange: {
            const SearchParams p = params_for_range_setting(s, cfg, H);
            return (3 * round_bound(p) + 20) * revenue_queries(p.budgets());
        }
        case Setting::kRegularSample:
        case Setting::kMhrSample: {
            // The interval scales with the hint but its hi/lo ratio is
            // 32/(delta^2 eps) regardless, so round bound and budgets are
            // hint-independent; any sample value gives the bound.
            const SearchParams p = s == Setting::kRegularSample
                                       ? regular_one_sample(d.support_hi, cfg.eps, cfg.delta, cfg.C)
                                       : mhr_one_sample(d.support_hi, cfg.eps, cfg.delta, cfg.C);
            return (3 * round_bound(p) + 20) * revenue_queries(p.budgets());
        }
    }
    return 0;
}

OptResult benchmark_opt(const ExperimentConfig& cfg) {
    const Setting s = parse_setting(cfg.setting);
    const Distribution d = distribution_from_json(cfg.distribution_json);
    switch (s) {
        case Setting::kRegularRange:
        case Setting::kMhrRange: {
            const SearchParams p = params_for_range_setting(s, cfg, d.support_hi);
            return brute_force_opt_constrained(d, kBenchmarkGrid, p.lo, p.hi, p.gamma);
        }
        default: return brute_force_opt(d, kBenchmarkGrid);
    }
}

TrialReport run_trials(const ExperimentConfig& cfg) {
    const Setting s = parse_setting(cfg.setting);
    if (cfg.trials < 1) throw std::invalid_argument("run_trials: trials must be >= 1");
    auto dist = std::make_shared<const Distribution>(distribution_from_json(cfg.distribution_json));
    if (cfg.run_class_check) check_class(s, *dist);

    const double factor = cfg.resolved_success_factor();
    if (!(factor > 0 && factor < 1)) {
        throw std::invalid_argument("run_trials: success factor must be in (0,1)");
    }
    const OptResult bench = benchmark_opt(cfg);
    const std::uint64_t bound = theoretical_query_bound(cfg);
    const std::optional<std::uint64_t> budget =
        cfg.budget_multiplier > 0
            ? std::optional<std::uint64_t>(static_cast<std::uint64_t>(
                  std::ceil(cfg.budget_multiplier * static_cast<double>(bound))))
            : std::nullopt;
    const double H = dist->support_hi;

    std::vector<TrialRecord> records(cfg.trials);
    std::vector<std::string> traces(cfg.collect_traces ? 1 : 0);

    auto run_one = [&](std::uint64_t t) {
        Rng rng(derive_seed(cfg.seed, t));
        PricingOracle oracle(dist, rng, budget);
        double out_price = 0;
        std::optional<RunTrace> trace;
        switch (s) {
            case Setting::kGeneralRange:
                out_price = run_general(H, cfg.eps, cfg.delta, oracle).price;
                break;
            case Setting::kRegularRange:
            case Setting::kMhrRange: {
                auto res = run_search(params_for_range_setting(s, cfg, H), oracle);
                out_price = res.price;
                trace = std::move(res.trace);
                break;
            }
            case Setting::kRegularSample:
            case Setting::kMhrSample: {
                const double hint = oracle.draw_hint_sample();
                const SearchParams p = s == Setting::kRegularSample
                                           ? regular_one_sample(hint, cfg.eps, cfg.delta, cfg.C)
                                           : mhr_one_sample(hint, cfg.eps, cfg.delta, cfg.C);
                auto res = run_search(p, oracle);
                out_price = res.price;
                trace = std::move(res.trace);
                break;
            }
        }
        TrialRecord rec;
        rec.output_price = out_price;
        rec.achieved_revenue = revenue(*dist, out_price);
        rec.queries = oracle.ledger().total;
        rec.success = rec.achieved_revenue >= factor * bench.opt_revenue;
        records[t] = rec;
        if (cfg.collect_traces && t == 0 && trace) traces[0] = trace->to_json();
    };

    const int jobs = std::max(1, cfg.jobs);
    if (jobs == 1 || cfg.trials == 1) {
        for (std::uint64_t t = 0; t < cfg.trials; ++t) run_one(t);
    } else {
        std::atomic<std::uint64_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mu;
        std::vector<std::thread> pool;
        const int workers = static_cast<int>(
            std::min<std::uint64_t>(static_cast<std::uint64_t>(jobs), cfg.trials));
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                try {
                    for (std::uint64_t t = next.fetch_add(1); t < cfg.trials;
                         t = next.fetch_add(1)) {
                        run_one(t);
                    }
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mu);
                    if (!failure) failure = std::current_exception();
                    next.store(cfg.trials);  // drain remaining work
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }

    // Aggregate in trial order so the report is identical for any jobs value.
    TrialReport rep;
    rep.trials = cfg.trials;
    rep.success_factor = factor;
    rep.benchmark_revenue = bench.opt_revenue;
    rep.benchmark_price = bench.opt_price;
    rep.theoretical_query_bound = bound;
    rep.queries_min = records[0].queries;
    rep.queries_max = records[0].queries;
    double qsum = 0;
    for (const auto& rec : records) {
        rep.successes += rec.success ? 1 : 0;
        rep.queries_min = std::min(rep.queries_min, rec.queries);
        rep.queries_max = std::max(rep.queries_max, rec.queries);
        qsum += static_cast<double>(rec.queries);
    }
    rep.success_rate = static_cast<double>(rep.successes) / static_cast<double>(rep.trials);
    rep.queries_mean = qsum / static_cast<double>(rep.trials);
    std::tie(rep.wilson_lo, rep.wilson_hi) = wilson_interval(rep.successes, rep.trials);
    if (cfg.keep_per_trial) rep.per_trial = std::move(records);
    if (cfg.collect_traces && !traces.empty() && !traces[0].empty()) {
        rep.first_trial_trace_json = traces[0];  // absent for settings without a round trace
    }

    json cfg_json;
    cfg_json["schema_version"] = kReportSchemaVersion;
    cfg_json["setting"] = cfg.setting;
    cfg_json["distribution"] = json::parse(cfg.distribution_json);
    cfg_json["eps"] = cfg.eps;
    cfg_json["delta"] = cfg.delta;
    cfg_json["C"] = cfg.C;
    cfg_json["trials"] = cfg.trials;
    cfg_json["seed"] = cfg.seed;
    cfg_json["success_factor"] = factor;
    cfg_json["budget_multiplier"] = cfg.budget_multiplier;
    rep.config_json = cfg_json.dump();
    return rep;
}

std::pair<double, double> wilson_interval(std::uint64_t successes, std::uint64_t n) {
    if (n == 0) return {0.0, 1.0};
    constexpr double z = 1.959963984540054;  // 97.5% normal quantile
    const double nn = static_cast<double>(n);
    const double phat = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nn;
    const double center = phat + z2 / (2.0 * nn);
    const double spread = z * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn));
    // At the boundaries the score interval closes exactly; keep it that way
    // despite rounding.
    const double lo = successes == 0 ? 0.0 : std::max(0.0, (center - spread) / denom);
    const double hi = successes == n ? 1.0 : std::min(1.0, (center + spread) / denom);
    return {lo, hi};
}

std::string TrialReport::to_json() const {
    json j;
    j["schema_version"] = kReportSchemaVersion;
    j["config"] = json::parse(config_json);
    j["successes"] = successes;
    j["trials"] = trials;
    j["success_rate"] = success_rate;
    j["wilson_ci_95"] = {wilson_lo, wilson_hi};
    j["queries"] = {{"min", queries_min}, {"mean", queries_mean}, {"max", queries_max}};
    j["theoretical_query_bound"] = theoretical_query_bound;
    j["benchmark"] = {{"opt_price", benchmark_price},
                      {"opt_revenue", benchmark_revenue},
                      {"success_factor", success_factor}};
    if (!per_trial.empty()) {
        auto arr = json::array();
        for (const auto& r : per_trial) {
            arr.push_back({{"output_price", r.output_price},
                           {"achieved_revenue", r.achieved_revenue},
                           {"queries", r.queries},
                           {"success", r.success}});
        }
        j["per_trial"] = arr;
    }
    if (first_trial_trace_json) j["first_trial_trace"] = json::parse(*first_trial_trace_json);
    return j.dump(2);
}

std::string TrialReport::csv_header() {
    return "schema_version,setting,family,eps,delta,C,trials,seed,successes,success_rate,"
           "wilson_lo,wilson_hi,queries_min,queries_mean,queries_max,theoretical_query_bound,"
           "benchmark_revenue,success_factor";
}

std::string TrialReport::to_csv_row() const {
    const json cfg = json::parse(config_json);
    std::ostringstream os;
    os.precision(17);
    os << kReportSchemaVersion << ',' << cfg.at("setting").get<std::string>() << ','
       << cfg.at("distribution").at("family").get<std::string>() << ','
       << cfg.at("eps").get<double>() << ',' << cfg.at("delta").get<double>() << ','
       << cfg.at("C").get<double>() << ',' << trials << ',' << cfg.at("seed").get<std::uint64_t>()
       << ',' << successes << ',' << success_rate << ',' << wilson_lo << ',' << wilson_hi << ','
       << queries_min << ',' << queries_mean << ',' << queries_max << ','
       << theoretical_query_bound << ',' << benchmark_revenue << ',' << success_factor;
    return os.str();
}

namespace {

ExperimentConfig with_value(const ExperimentConfig& base, const std::string& parameter,
                            double value) {
    ExperimentConfig cfg = base;
    if (parameter == "eps") {
        cfg.eps = value;
        cfg.success_factor = base.success_factor;  // recomputed when unset
    } else if (parameter == "delta") {
        cfg.delta = value;
    } else if (parameter == "H") {
        json dist = json::parse(base.distribution_json);
        auto& params = dist["params"];
        if (params.contains("H")) {
            params["H"] = value;
        } else if (params.contains("hi")) {
            params["hi"] = value;
        } else {
            throw std::invalid_argument("H sweep: distribution has no H-like parameter");
        }
        cfg.distribution_json = dist.dump();
    } else {
        throw std::invalid_argument("sweep parameter must be eps, H or delta");
    }
    return cfg;
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() < 2) return 0;
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxx > 0 ? sxy / sxx : 0;
}

}  // namespace

SweepResult sweep(const ExperimentConfig& base, const std::string& parameter,
                  const std::vector<double>& values) {
    SweepResult res;
    res.parameter = parameter;
    res.values = values;
    std::vector<double> lx, ly;
    for (double v : values) {
        res.reports.push_back(run_trials(with_value(base, parameter, v)));
        const double x = parameter == "H" ? v : 1.0 / v;  // eps/delta scale as inverses
        lx.push_back(std::log(x));
        ly.push_back(std::log(res.reports.back().queries_mean));
    }
    res.loglog_slope = fit_slope(lx, ly);
    return res;
}

std::string SweepResult::to_csv() const {
    std::ostringstream os;
    os << "parameter,value," << TrialReport::csv_header() << "\n";
    os.precision(17);
    for (std::size_t i = 0; i < reports.size(); ++i) {
        os << parameter << ',' << values[i] << ',' << reports[i].to_csv_row() << "\n";
    }
    os << "# loglog_slope," << loglog_slope << "\n";
    return os.str();
}

CalibrationResult calibrate_C(const ExperimentConfig& base, std::vector<double> ladder,
                              double target) {
    if (ladder.empty()) throw std::invalid_argument("calibrate_C: empty ladder");
    if (!(target >= 0 && target < 1)) throw std::invalid_argument("calibrate_C: target in [0,1)");
    std::sort(ladder.begin(), ladder.end());
    CalibrationResult res;
    res.ladder = ladder;
    res.target = target;
    for (double c : ladder) {
        ExperimentConfig cfg = base;
        cfg.C = c;
        res.reports.push_back(run_trials(cfg));
        if (!res.chosen_C && res.reports.back().wilson_lo >= target) res.chosen_C = c;
    }
    return res;
}

std::string CalibrationResult::to_csv() const {
    std::ostringstream os;
    os << "C," << TrialReport::csv_header() << "\n";
    os.precision(17);
    for (std::size_t i = 0; i < reports.size(); ++i) {
        os << ladder[i] << ',' << reports[i].to_csv_row() << "\n";
    }
    os << "# target," << target << "\n";
    os << "# chosen_C," << (chosen_C ? std::to_string(*chosen_C) : std::string("none")) << "\n";
    return os.str();
}

}  // namespace pqsim
