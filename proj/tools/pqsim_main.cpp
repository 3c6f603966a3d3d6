// pqsim: pricing-query simulation CLI.
//
//   pqsim run       repeated-trials experiment for one setting/distribution
//   pqsim verify    structural checks for the built-in hard instances
//   pqsim sweep     parameter sweep with a log-log scaling summary
//   pqsim calibrate smallest estimation constant C meeting a success target
//
// Exit codes: 0 ok, 2 usage/config error, 3 internal-invariant violation.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pqsim/checks.hpp"
#include "pqsim/harness.hpp"
#include "pqsim/hard_instances.hpp"
#include "pqsim/instantiation.hpp"

namespace {

using namespace pqsim;

struct DistFlags {
    std::string spec = "lb-regular-fminus";
    double H = -1, eps = -1, rate = -1, value = -1;
    int k = -1;
};

std::string resolve_distribution(const DistFlags& f) {
    // A JSON file path, an inline JSON document, or a builtin name.
    if (!f.spec.empty() && f.spec.front() == '{') return f.spec;
    if (std::filesystem::exists(f.spec)) {
        std::ifstream in(f.spec);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    BuiltinOverrides ov;
    if (f.H > 0) ov.H = f.H;
    if (f.eps > 0) ov.eps = f.eps;
    if (f.rate > 0) ov.rate = f.rate;
    if (f.value > 0) ov.value = f.value;
    if (f.k >= 0) ov.k = f.k;
    return distribution_to_json(make_builtin(f.spec, ov));
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

void add_dist_flags(CLI::App* cmd, DistFlags& f) {
    cmd->add_option("--dist", f.spec,
                    "distribution: builtin name, JSON file path, or inline JSON");
    cmd->add_option("--dist-H", f.H, "override builtin H / upper support");
    cmd->add_option("--dist-eps", f.eps, "override builtin construction eps");
    cmd->add_option("--dist-rate", f.rate, "override trunc-exp rate");
    cmd->add_option("--dist-k", f.k, "general-family member index (0 = base)");
    cmd->add_option("--dist-value", f.value, "override point-mass value");
}

// ---------------------------------------------------------------------------
// verify: expected-vs-computed fact table for the hard instances
// ---------------------------------------------------------------------------

struct FactTable {
    bool all_ok = true;

    void row(const std::string& fact, double expected, double computed, double tol) {
        const bool ok = std::abs(expected - computed) <= tol;
        print(fact, std::to_string(expected), std::to_string(computed), ok);
    }
    void flag(const std::string& fact, bool expected, bool computed) {
        print(fact, expected ? "true" : "false", computed ? "true" : "false",
              expected == computed);
    }
    void holds(const std::string& fact, bool computed) { flag(fact, true, computed); }

    void print(const std::string& fact, const std::string& expected, const std::string& computed,
               bool ok) {
        all_ok &= ok;
        std::cout << (ok ? "  [ok]   " : "  [FAIL] ") << fact << ": expected " << expected
                  << ", computed " << computed << "\n";
    }
};

int verify_regular_pair(double H, double eps, std::size_t grid, double tol) {
    const auto pair = make_regular_pair(H, eps);
    FactTable t;
    const double p_minus = H / 2.0;
    const double p_plus = H * (2.0 + eps) / 3.0;
    t.row("Rev_minus(H/2)", 2.0, revenue(pair.f_minus, p_minus), tol);
    t.row("Rev_plus(H(2+eps)/3)", 2.0 + eps, revenue(pair.f_plus, p_plus), tol);

    const auto opt_m = brute_force_opt(pair.f_minus, grid);
    const auto opt_p = brute_force_opt(pair.f_plus, grid);
    t.row("opt price F-", p_minus, opt_m.opt_price, tol);
    t.row("opt revenue F-", 2.0, opt_m.opt_revenue, tol);
    t.row("opt price F+", p_plus, opt_p.opt_price, tol);
    t.row("opt revenue F+", 2.0 + eps, opt_p.opt_revenue, tol);

    double max_head_gap = 0, max_tail_gap = 0;
    bool tail_band = true;
    for (int i = 0; i <= 2000; ++i) {
        const double p = 1.0 + (H - 1.0) * i / 2000.0;
        const double gap = std::abs(quantile_prob(pair.f_plus, p) - quantile_prob(pair.f_minus, p));
        if (p <= p_minus) {
            max_head_gap = std::max(max_head_gap, gap);
        } else {
            max_tail_gap = std::max(max_tail_gap, gap);
            const double qm = quantile_prob(pair.f_minus, p);
            tail_band &= qm >= 1.0 / H - 1e-12 && qm <= 5.0 / H + 1e-12;
        }
    }
    t.row("max |q+ - q-| on [1, H/2]", 0.0, max_head_gap, 1e-12);
    t.holds("|q+ - q-| <= 14 eps/H above H/2", max_tail_gap <= 14.0 * eps / H + 1e-12);
    t.holds("q- in [1/H, 5/H] above H/2", tail_band);

    t.flag("check_regular(F-)", true, static_cast<bool>(check_regular(pair.f_minus, 10000, 1e-9)));
    // Concavity of F+ in quantile space holds exactly when eps <= 1/(H-4);
    // the kink at H/2 turns convex beyond that.
    t.flag("check_regular(F+)", eps <= 1.0 / (H - 4.0),
           static_cast<bool>(check_regular(pair.f_plus, 10000, 1e-9)));
    t.flag("check_mhr(F-)", false, static_cast<bool>(check_mhr(pair.f_minus, 2000, 1e-6)));

    const auto sep = separation_check(pair, 1.0 - 0.01 * eps, grid);
    t.holds("near-optimal sets disjoint at 1-0.01eps", sep.disjoint);
    if (sep.witness_threshold) {
        t.holds("witness threshold in (p-, p+)", *sep.witness_threshold > pair.p_minus_threshold() &&
                                                     *sep.witness_threshold < pair.p_plus_threshold());
        std::cout << "  separating threshold t = " << *sep.witness_threshold << " in ("
                  << pair.p_minus_threshold() << ", " << pair.p_plus_threshold() << ")\n";
    }
    return t.all_ok ? 0 : 1;
}

int verify_mhr_pair(double eps, std::size_t grid, double tol) {
    const auto pair = make_mhr_pair(eps);
    FactTable t;
    const double alpha = pair.alpha;
    t.row("Pr_f0[v in [1,1.5)]", 0.2, cdf(pair.f0, 1.5), tol);
    t.row("Pr_f1[v in [1,1.5)]", 0.2, cdf(pair.f1, 1.5), tol);

    const auto opt0 = brute_force_opt(pair.f0, grid);
    const auto opt1 = brute_force_opt(pair.f1, grid);
    t.row("opt price F0", 1.5, opt0.opt_price, tol);
    t.row("opt revenue F0", 1.2, opt0.opt_revenue, tol);
    t.row("opt price F1", 1.5 + alpha, opt1.opt_price, tol);
    t.row("opt revenue F1", 1.2 + 0.2 * alpha - 0.4 * alpha * alpha, opt1.opt_revenue, tol);

    t.holds("check_mhr(F0)", static_cast<bool>(check_mhr(pair.f0, 2000, 1e-6)));
    t.holds("check_mhr(F1)", static_cast<bool>(check_mhr(pair.f1, 2000, 1e-6)));
    t.holds("check_regular(F0)", static_cast<bool>(check_regular(pair.f0, 10000, 1e-9)));
    t.holds("check_regular(F1)", static_cast<bool>(check_regular(pair.f1, 10000, 1e-9)));
    t.holds("q0(opt) >= 1/e", quantile_prob(pair.f0, opt0.opt_price) >= 1.0 / std::exp(1.0) - 1e-6);
    t.holds("q1(opt) >= 1/e", quantile_prob(pair.f1, opt1.opt_price) >= 1.0 / std::exp(1.0) - 1e-6);

    bool ratio_ok = true, tail_ok = true;
    for (int i = 0; i <= 2000; ++i) {
        const double p = 1.0 + i / 2000.0;
        const double q0 = quantile_prob(pair.f0, p);
        const double q1 = quantile_prob(pair.f1, p);
        if (q0 > 0) ratio_ok &= q1 / q0 <= 1.0 / (1.0 - 2.0 * alpha) + 1e-12;
        if (p >= 1.5) tail_ok &= 1.0 - q1 >= 0.2 - 1e-12;
    }
    t.holds("q1/q0 <= (1-2a)^-1 on [1,2]", ratio_ok);
    t.holds("1 - q1 >= 0.2 on [1.5,2]", tail_ok);

    const auto sep = separation_check(pair, 1.0 - eps, grid);
    t.holds("near-optimal sets disjoint at 1-eps", sep.disjoint);
    return t.all_ok ? 0 : 1;
}

int verify_general(double H, double eps, std::size_t grid, double tol) {
    const auto fam = make_general_family(H, eps);
    FactTable t;
    bool const_rev = true;
    double worst = 5.0;
    for (double pk : fam.support) {
        const double r = revenue(fam.base, pk);
        if (std::abs(r - 5.0) > std::abs(worst - 5.0)) worst = r;
        const_rev &= std::abs(r - 5.0) <= tol;
    }
    t.row("Rev_F0(p_k) constant over k (worst)", 5.0, worst, tol);
    t.holds("Rev_F0(p_k) = 5 for all k", const_rev);
    t.row("q_F0(p_1) = total grid mass", 10.0 / H, quantile_prob(fam.base, fam.support.front()),
          tol);

    bool window_ok = true;
    for (std::size_t k = 1; k < fam.K; ++k) {
        const double r = revenue(fam.member(k), fam.support[k]);
        window_ok &= r >= 5.0 * (1.0 + eps / 2.0) - tol && r <= 5.0 * (1.0 + eps) + tol;
    }
    t.holds("Rev_Fk(p_{k+1}) in [5(1+eps/2), 5(1+eps)]", window_ok);

    bool quantile_shift_ok = true;
    for (std::size_t k = 1; k < fam.K; ++k) {
        const double mid = 0.5 * (fam.support[k - 1] + fam.support[k]);
        quantile_shift_ok &=
            std::abs(quantile_prob(fam.member(k), mid) - 5.0 / fam.support[k - 1]) <= tol;
        quantile_shift_ok &=
            std::abs(quantile_prob(fam.base, mid) - 5.0 / fam.support[k]) <= tol;
    }
    t.holds("mass shift visible in (p_k, p_{k+1}]", quantile_shift_ok);

    const auto sep = separation_check(fam, 1.0 - eps / 4.0, grid);
    t.holds("K-1 near-optimal sets pairwise disjoint at 1-eps/4", sep.disjoint);
    return t.all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pricing-query learning simulator"};
    app.require_subcommand(1);

    // ---- run ----
    auto* run_cmd = app.add_subcommand("run", "run repeated trials for one setting");
    std::string setting;
    DistFlags dist;
    double eps = 0.1, delta = 0.1, C = 20, budget_mult = 10, success_factor = 0;
    std::uint64_t trials = 100, seed = 0;
    int jobs = 1;
    bool trace = false;
    std::string out_dir = ".";
    run_cmd->add_option("--setting", setting,
                        "regular-range|mhr-range|regular-sample|mhr-sample|general-range")
        ->required();
    add_dist_flags(run_cmd, dist);
    run_cmd->add_option("--eps", eps, "error parameter");
    run_cmd->add_option("--delta", delta, "failure probability");
    run_cmd->add_option("--trials", trials, "number of independent trials");
    run_cmd->add_option("--seed", seed, "master seed");
    run_cmd->add_option("--C", C, "estimation constant");
    run_cmd->add_option("--budget-mult", budget_mult, "oracle budget = mult x bound (0 = off)");
    run_cmd->add_option("--success-factor", success_factor,
                        "override the success factor (default: per-setting guarantee factor)");
    run_cmd->add_option("--jobs", jobs, "worker threads");
    run_cmd->add_flag("--trace", trace, "write first trial's trace to <out>/trace.json");
    run_cmd->add_option("--out", out_dir, "output directory");

    // ---- verify ----
    auto* verify_cmd = app.add_subcommand("verify", "check a built-in hard instance");
    std::string instance;
    double v_H = 20, v_eps = 0.1, v_tol = 1e-9;
    std::size_t v_grid = 200000;
    verify_cmd->add_option("--instance", instance, "lb-regular-pair|lb-mhr-pair|lb-general")
        ->required();
    verify_cmd->add_option("--H", v_H, "value-range upper bound");
    verify_cmd->add_option("--eps", v_eps, "construction eps");
    verify_cmd->add_option("--grid", v_grid, "scan grid points");
    verify_cmd->add_option("--tol", v_tol, "value tolerance");

    // ---- sweep ----
    auto* sweep_cmd = app.add_subcommand("sweep", "sweep eps, H or delta");
    std::string sweep_param;
    std::vector<double> sweep_values;
    sweep_cmd->add_option("--param", sweep_param, "eps|H|delta")->required();
    sweep_cmd->add_option("--values", sweep_values, "sweep values")->required()->expected(-1);
    std::string s_setting;
    DistFlags s_dist;
    double s_eps = 0.1, s_delta = 0.1, s_C = 20, s_factor = 0;
    std::uint64_t s_trials = 50, s_seed = 0;
    int s_jobs = 1;
    std::string s_out = ".";
    sweep_cmd->add_option("--setting", s_setting)->required();
    add_dist_flags(sweep_cmd, s_dist);
    sweep_cmd->add_option("--eps", s_eps);
    sweep_cmd->add_option("--delta", s_delta);
    sweep_cmd->add_option("--trials", s_trials);
    sweep_cmd->add_option("--seed", s_seed);
    sweep_cmd->add_option("--C", s_C);
    sweep_cmd->add_option("--success-factor", s_factor,
                          "fixed judging factor across the sweep (default: per-setting)");
    sweep_cmd->add_option("--jobs", s_jobs);
    sweep_cmd->add_option("--out", s_out);

    // ---- calibrate ----
    auto* cal_cmd = app.add_subcommand("calibrate", "find the smallest adequate C");
    std::vector<double> ladder = {1, 2, 5, 10, 20, 50};
    double target = 0.9;
    std::string c_setting;
    DistFlags c_dist;
    double c_eps = 0.1, c_delta = 0.1;
    std::uint64_t c_trials = 50, c_seed = 0;
    int c_jobs = 1;
    std::string c_out = ".";
    cal_cmd->add_option("--ladder", ladder, "candidate C values")->expected(-1);
    cal_cmd->add_option("--target", target, "required Wilson lower bound on success");
    cal_cmd->add_option("--setting", c_setting)->required();
    add_dist_flags(cal_cmd, c_dist);
    cal_cmd->add_option("--eps", c_eps);
    cal_cmd->add_option("--delta", c_delta);
    cal_cmd->add_option("--trials", c_trials);
    cal_cmd->add_option("--seed", c_seed);
    cal_cmd->add_option("--jobs", c_jobs);
    cal_cmd->add_option("--out", c_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*run_cmd) {
            ExperimentConfig cfg;
            cfg.setting = setting;
            cfg.distribution_json = resolve_distribution(dist);
            cfg.eps = eps;
            cfg.delta = delta;
            cfg.C = C;
            cfg.trials = trials;
            cfg.seed = seed;
            cfg.success_factor = success_factor;
            cfg.budget_multiplier = budget_mult;
            cfg.jobs = jobs;
            cfg.collect_traces = trace;
            const TrialReport rep = run_trials(cfg);

            std::filesystem::create_directories(out_dir);
            write_file(std::filesystem::path(out_dir) / "report.json", rep.to_json() + "\n");
            write_file(std::filesystem::path(out_dir) / "report.csv",
                       TrialReport::csv_header() + "\n" + rep.to_csv_row() + "\n");
            if (trace && rep.first_trial_trace_json) {
                write_file(std::filesystem::path(out_dir) / "trace.json",
                           *rep.first_trial_trace_json + "\n");
            }
            std::cout << "success_rate " << rep.success_rate << " (wilson95 [" << rep.wilson_lo
                      << ", " << rep.wilson_hi << "]), mean queries " << rep.queries_mean << "\n";
            return 0;
        }
        if (*verify_cmd) {
            int rc = 0;
            std::cout << "verify " << instance << "\n";
            if (instance == "lb-regular-pair") {
                rc = verify_regular_pair(v_H, v_eps, v_grid, v_tol);
            } else if (instance == "lb-mhr-pair") {
                rc = verify_mhr_pair(v_eps, v_grid, v_tol);
            } else if (instance == "lb-general") {
                rc = verify_general(v_H, v_eps, v_grid, v_tol);
            } else {
                std::cerr << "unknown instance: " << instance << "\n";
                return 2;
            }
            std::cout << (rc == 0 ? "PASS" : "FAIL") << "\n";
            return rc == 0 ? 0 : 1;
        }
        if (*sweep_cmd) {
            ExperimentConfig base;
            base.setting = s_setting;
            base.distribution_json = resolve_distribution(s_dist);
            base.eps = s_eps;
            base.delta = s_delta;
            base.C = s_C;
            base.trials = s_trials;
            base.seed = s_seed;
            base.success_factor = s_factor;
            base.jobs = s_jobs;
            base.keep_per_trial = false;
            const SweepResult res = sweep(base, sweep_param, sweep_values);
            std::filesystem::create_directories(s_out);
            write_file(std::filesystem::path(s_out) / "sweep.csv", res.to_csv());
            std::cout << "loglog_slope " << res.loglog_slope << "\n";
            return 0;
        }
        if (*cal_cmd) {
            ExperimentConfig base;
            base.setting = c_setting;
            base.distribution_json = resolve_distribution(c_dist);
            base.eps = c_eps;
            base.delta = c_delta;
            base.trials = c_trials;
            base.seed = c_seed;
            base.jobs = c_jobs;
            base.keep_per_trial = false;
            const CalibrationResult res = calibrate_C(base, ladder, target);
            std::filesystem::create_directories(c_out);
            write_file(std::filesystem::path(c_out) / "calibration.csv", res.to_csv());
            if (res.chosen_C) {
                std::cout << "chosen C = " << *res.chosen_C << "\n";
            } else {
                std::cout << "no ladder entry met the target\n";
            }
            return 0;
        }
    } catch (const InternalInvariantError& e) {
        std::cerr << "internal invariant violated: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
