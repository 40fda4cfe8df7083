// trapwalk experiment CLI: every acceptance-style computation is a named
// subcommand writing a deterministic CSV plus a JSON metadata sidecar.
//
// Exit codes: 0 ok / verdict pass, 1 verdict fail, 2 usage error,
// 3 invalid parameters, 4 certification failure.

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include <CLI11.hpp>

#include "experiment.hpp"
#include "trapwalk/field_stats.hpp"
#include "trapwalk/hitting.hpp"
#include "trapwalk/kernels.hpp"
#include "trapwalk/mc.hpp"
#include "trapwalk/pam.hpp"
#include "trapwalk/pascal.hpp"
#include "trapwalk/passage.hpp"
#include "trapwalk/special.hpp"
#include "trapwalk/stats.hpp"
#include "trapwalk/volterra.hpp"

using namespace trapwalk;
using expt::fmt;
using expt::json;
using expt::ResultTable;

namespace {

constexpr int kOk = 0, kVerdictFail = 1, kUsage = 2, kBadParams = 3, kCertification = 4;

double parse_gamma(const json& g) {
    if (g.is_string()) {
        std::string s = g.get<std::string>();
        if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
        try {
            size_t pos = 0;
            double v = std::stod(s, &pos);
            if (pos == s.size()) return v;
        } catch (const std::exception&) {
        }
        throw std::invalid_argument("gamma must be a number or 'inf': " + s);
    }
    return g.get<double>();
}

ModelParams params_from(const json& cfg) {
    ModelParams p;
    p.d = cfg.at("d").get<int>();
    p.kappa = cfg.value("kappa", 0.0);
    p.rho = cfg.at("rho").get<double>();
    p.nu = cfg.at("nu").get<double>();
    p.gamma = parse_gamma(cfg.at("gamma"));
    p.validate();
    return p;
}

TrapFieldRealization field_from(const json& cfg, const ModelParams& p) {
    std::string file = cfg.value("field_file", std::string{});
    if (!file.empty()) return load_field(file);
    TrapFieldConfig fc;
    fc.params = p;
    fc.obs_radius = cfg.at("obs_radius").get<int>();
    fc.horizon = cfg.at("horizon").get<double>();
    fc.epsilon_window = cfg.value("epsilon_window", 1e-8);
    fc.seed = cfg.at("field_seed").get<uint64_t>();
    fc.validate();
    return sample_field(fc);
}

std::string empty_or(double v, bool present) { return present ? fmt(v) : std::string{}; }

DiscretePath path_from_id(long id, int n) {
    std::vector<int> steps;
    long rem = id;
    for (int i = 0; i < n; ++i) {
        steps.push_back(static_cast<int>(rem % 3) - 1);
        rem /= 3;
    }
    return DiscretePath::from_steps_1d(steps);
}

// ---------------------------------------------------------------- commands

int cmd_annealed_exact(const json& cfg) {
    ModelParams p;
    p.d = cfg.at("d").get<int>();
    p.kappa = 0.0;
    p.rho = cfg.at("rho").get<double>();
    p.nu = cfg.at("nu").get<double>();
    p.gamma = parse_gamma(cfg.at("gamma"));
    p.validate();
    double h = cfg.at("h").get<double>();
    double tol = cfg.value("tol", 1e-10);
    int paths = cfg.value("paths", 0);
    json extra;

    if (paths > 0) {
        // sampled-trajectory comparison against the motionless walker
        if (p.gamma_infinite()) throw std::invalid_argument("paths mode needs finite gamma");
        double path_t = cfg.at("path_t").get<double>();
        double path_kappa = cfg.at("path_kappa").get<double>();
        uint64_t seed = cfg.at("seed").get<uint64_t>();
        double slack = 5.0 * (h * h + 1e-10);
        ModelParams pw = p;
        pw.kappa = path_kappa;
        double pinned = annealed_survival_pinned(path_t, h, p);
        ResultTable table({"path_id", "jumps", "survival_given", "survival_pinned", "ratio", "ok"});
        bool all_ok = true;
        for (int i = 0; i < paths; ++i) {
            Rng rng = derive_stream(seed, {50, static_cast<uint64_t>(i)});
            WalkPath wp = sample_walk(pw, path_t, rng);
            double surv = annealed_survival_given_path(wp, path_t, h, pw);
            bool ok = surv <= pinned * (1.0 + slack);
            all_ok = all_ok && ok;
            table.add(i, wp.jump_times.size(), surv, pinned, surv / pinned, ok);
        }
        extra["solver_slack"] = slack;
        expt::write_outputs(cfg.at("out").get<std::string>(), "annealed-exact", cfg, table, extra);
        return all_ok ? kOk : kVerdictFail;
    }

    std::vector<double> times = cfg.at("t").get<std::vector<double>>();
    if (times.empty()) throw std::invalid_argument("need at least one time");
    ResultTable table({"t", "minus_log_ez", "rate", "v0", "phi_e1", "asym_ref", "ratio"});

    auto asym_ref = [&](double t) -> double {
        if (p.d == 1) return p.nu * std::sqrt(8.0 * p.rho * t / M_PI);
        if (p.d >= 3) return lyapunov_annealed_pinned(p).value * t;
        return std::numeric_limits<double>::quiet_NaN();
    };

    if (p.gamma_infinite()) {
        for (double t : times) {
            int radius = std::max(1, min_radius_for_exit_bound(p.rho, t, p.d, tol));
            HittingSolution sol = solve_hitting(t, p, radius, tol);
            double ml = p.nu * p.rho * sol.integral_value();
            double ref = asym_ref(t);
            table.add(t, ml, ml / t, "", fmt(sol.value()), empty_or(ref, p.d != 2),
                      empty_or(ml / ref, p.d != 2));
        }
    } else {
        double tmax = *std::max_element(times.begin(), times.end());
        PathSurvivalSolution sol = solve_v0(tmax, h, p);
        for (double t : times) {
            auto idx = static_cast<size_t>(std::llround(t / sol.h));
            if (idx >= sol.integral.size() || std::abs(static_cast<double>(idx) * sol.h - t) > 1e-9 * std::max(1.0, t))
                throw std::invalid_argument("time does not align with the solver grid: " + fmt(t));
            double ml = p.nu * p.gamma * sol.integral[idx];
            double ref = asym_ref(t);
            table.add(t, ml, ml / t, fmt(sol.m[idx]), "", empty_or(ref, p.d != 2), empty_or(ml / ref, p.d != 2));
        }
    }
    if (p.d == 2)
        extra["d2_note"] =
            "d=2 leading constants (nu pi rho t / log t) converge at log speed and are not reproduced at desk "
            "scale; only qualitative outputs are reported";
    expt::write_outputs(cfg.at("out").get<std::string>(), "annealed-exact", cfg, table, extra);
    return kOk;
}

int cmd_annealed_mc(const json& cfg) {
    ModelParams p = params_from(cfg);
    double t = cfg.at("t").get<double>();
    auto n_fields = cfg.at("n_fields").get<uint64_t>();
    auto n_paths = cfg.at("n_paths").get<uint64_t>();
    auto seed = cfg.at("seed").get<uint64_t>();
    int workers = cfg.value("workers", 1);
    double eps = cfg.value("epsilon_window", 1e-8);
    double h = cfg.value("h", 0.01);

    McEstimate est = annealed_survival_mc(p, t, n_fields, n_paths, seed, eps, workers);

    double ref;
    std::string ref_kind;
    bool ok;
    ModelParams pinned = p;
    pinned.kappa = 0.0;
    double pinned_value = p.gamma_infinite() ? annealed_survival_infinite_gamma(t, pinned)
                                             : annealed_survival_pinned(t, h, pinned);
    double z = (est.mean - pinned_value) / est.stderror;
    if (p.kappa == 0.0) {
        ref = pinned_value;
        ref_kind = "exact_pinned";
        ok = std::abs(z) <= 3.0;
    } else {
        ref = pinned_value;
        ref_kind = "pinned_upper_bound";
        ok = z <= 3.0;
    }

    ResultTable table({"t", "mean", "stderr", "n_fields", "n_paths", "reference", "ref_kind", "z", "ok"});
    table.add(t, est.mean, est.stderror, n_fields, n_paths, ref, ref_kind, z, ok);
    expt::write_outputs(cfg.at("out").get<std::string>(), "annealed-mc", cfg, table);
    return ok ? kOk : kVerdictFail;
}

int cmd_quenched_mc(const json& cfg) {
    ModelParams p = params_from(cfg);
    TrapFieldRealization field = field_from(cfg, p);
    double t = cfg.at("t").get<double>();
    auto n = cfg.at("n").get<uint64_t>();
    auto seed = cfg.at("seed").get<uint64_t>();
    double threshold = cfg.value("exclusion_threshold", 0.05);

    McEstimate est = quenched_survival_mc(field, p, t, n, seed, threshold);
    ResultTable table({"t", "mean", "stderr", "n", "excluded", "bias_bound", "field_seed"});
    table.add(t, est.mean, est.stderror, est.n, est.excluded, est.bias_bound, field.config.seed);
    expt::write_outputs(cfg.at("out").get<std::string>(), "quenched-mc", cfg, table);
    return kOk;
}

int cmd_quenched_pde(const json& cfg) {
    ModelParams p = params_from(cfg);
    TrapFieldRealization field = field_from(cfg, p);
    double t = cfg.at("t").get<double>();
    int box_radius = cfg.at("box_radius").get<int>();
    double h = cfg.at("h").get<double>();
    int mc_cross = cfg.value("mc_cross", 0);

    double value = quenched_survival_pde(field, p, t, box_radius, h);
    bool ok = true;
    std::string mc_mean, mc_stderr, zs;
    if (mc_cross > 0) {
        auto seed = cfg.at("seed").get<uint64_t>();
        McEstimate est = quenched_survival_mc(field, p, t, static_cast<uint64_t>(mc_cross), seed);
        double z = (value - est.mean) / est.stderror;
        ok = std::abs(z) <= 3.0;
        mc_mean = fmt(est.mean);
        mc_stderr = fmt(est.stderror);
        zs = fmt(z);
    }
    ResultTable table({"t", "value", "box_radius", "h", "mc_mean", "mc_stderr", "z", "ok"});
    table.add(t, value, box_radius, h, mc_mean, mc_stderr, zs, ok);
    expt::write_outputs(cfg.at("out").get<std::string>(), "quenched-pde", cfg, table);
    return ok ? kOk : kVerdictFail;
}

int cmd_pascal_sweep(const json& cfg) {
    int n = cfg.at("n").get<int>();
    auto qs = cfg.at("q").get<std::vector<double>>();
    double stay = cfg.value("stay", 0.5);
    double axis = cfg.value("axis", 0.25);
    LazyWalkKernel kernel{1, stay, {axis}};

    ResultTable table({"path_id", "n", "q", "s_moving", "s_pinned", "margin", "brute_diff", "min_induction_residual"});
    bool all_ok = true;
    long total = 1;
    for (int i = 0; i < n; ++i) total *= 3;
    for (double q : qs) {
        double s_pinned = trapping_sum(kernel, DiscretePath::constant(1, n), n, q);
        for (long id = 0; id < total; ++id) {
            DiscretePath path = path_from_id(id, n);
            double s = trapping_sum(kernel, path, n, q);
            double margin = s - s_pinned;
            double brute = brute_force_oracle(kernel, path, n, q);
            auto residuals = induction_gap(kernel, path, n, q);
            double min_res = residuals.empty() ? 0.0 : *std::min_element(residuals.begin(), residuals.end());
            bool ok = margin >= -1e-12 && std::abs(s - brute) <= 1e-12 && min_res >= -1e-12;
            all_ok = all_ok && ok;
            table.add(id, n, q, s, s_pinned, margin, s - brute, min_res);
        }
    }
    expt::write_outputs(cfg.at("out").get<std::string>(), "pascal-sweep", cfg, table);
    return all_ok ? kOk : kVerdictFail;
}

int cmd_range_sweep(const json& cfg) {
    int n = cfg.at("n").get<int>();
    double stay = cfg.value("stay", 0.5);
    double axis = cfg.value("axis", 0.25);
    LazyWalkKernel kernel{1, stay, {axis}};

    double pinned = expected_range(kernel, DiscretePath::constant(1, n), n);
    ResultTable table({"path_id", "n", "range_moving", "range_pinned", "margin"});
    bool all_ok = true;
    long total = 1;
    for (int i = 0; i < n; ++i) total *= 3;
    for (long id = 0; id < total; ++id) {
        double moving = expected_range(kernel, path_from_id(id, n), n);
        double margin = moving - pinned;
        all_ok = all_ok && margin >= -1e-12;
        table.add(id, n, moving, pinned, margin);
    }
    expt::write_outputs(cfg.at("out").get<std::string>(), "range-sweep", cfg, table);
    return all_ok ? kOk : kVerdictFail;
}

int cmd_hitting(const json& cfg) {
    ModelParams p;
    p.d = cfg.at("d").get<int>();
    p.kappa = 0.0;
    p.rho = cfg.at("rho").get<double>();
    p.nu = cfg.value("nu", 1.0);
    p.gamma = std::numeric_limits<double>::infinity();
    p.validate();
    double t = cfg.at("t").get<double>();
    double tol = cfg.value("tol", 1e-10);

    int required = std::max(1, min_radius_for_exit_bound(p.rho, t, p.d, tol));
    int box_radius = cfg.value("box_radius", 0);
    if (box_radius == 0) box_radius = 2 * required;
    int inner = cfg.value("inner_radius", 0);
    if (inner == 0) inner = required;

    HittingSolution sol = solve_hitting(t, p, box_radius, tol);
    ResultTable table({"time", "phi_e1", "integral"});
    for (size_t i = 0; i < sol.times.size(); ++i) table.add(sol.times[i], sol.phi_e1[i], sol.integral[i]);

    double sum_psi = sol.sum_psi_final(inner);
    double rhs = p.rho * sol.integral_value();
    json extra;
    extra["exit_bound"] = sol.exit_bound;
    extra["inner_radius"] = inner;
    extra["sum_psi"] = sum_psi;
    extra["rho_times_integral"] = rhs;
    extra["identity_rel_residual"] = std::abs(sum_psi - rhs) / std::max(1e-300, rhs);
    extra["minus_log_annealed_survival"] = p.nu * p.rho * sol.integral_value();
    expt::write_outputs(cfg.at("out").get<std::string>(), "hitting", cfg, table, extra);
    return kOk;
}

int cmd_lyapunov_table(const json& cfg) {
    ModelParams p = params_from(cfg);
    auto horizons = cfg.at("horizons").get<std::vector<double>>();
    auto replicates = cfg.at("replicates").get<uint64_t>();
    auto seed = cfg.at("seed").get<uint64_t>();
    double h = cfg.value("h", 0.01);

    auto rows = lyapunov_quenched_estimate(p, horizons, replicates, seed, h);
    ResultTable table({"t", "estimate", "stderr", "n", "envelope", "env_ok", "positivity_ok"});
    bool all_ok = true;
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        bool env_ok = r.estimate <= r.envelope + 3.0 * r.stderror;
        bool pos_ok = r.estimate - 3.0 * r.stderror > 0.0;
        if (!env_ok) all_ok = false;
        if (i + 1 == rows.size() && !pos_ok) all_ok = false;
        table.add(r.t, r.estimate, r.stderror, r.replicates, r.envelope, env_ok, pos_ok);
    }
    expt::write_outputs(cfg.at("out").get<std::string>(), "lyapunov-table", cfg, table);
    return all_ok ? kOk : kVerdictFail;
}

int cmd_shape_profile(const json& cfg) {
    ModelParams p = params_from(cfg);
    TrapFieldRealization field = field_from(cfg, p);
    double t = cfg.at("t").get<double>();
    auto speeds = cfg.at("speeds").get<std::vector<double>>();
    int box_radius = cfg.at("box_radius").get<int>();
    double h = cfg.at("h").get<double>();

    ShapeProfile prof = shape_profile(field, p, t, speeds, box_radius, h);
    ResultTable table({"speed", "alpha"});
    for (size_t i = 0; i < prof.speeds.size(); ++i) table.add(prof.speeds[i], prof.alpha[i]);
    json extra;
    extra["max_symmetry_residual"] = prof.max_symmetry_residual;
    extra["max_convexity_residual"] = prof.max_convexity_residual;
    extra["exit_bound"] = prof.exit_bound;
    extra["field_seed"] = field.config.seed;
    expt::write_outputs(cfg.at("out").get<std::string>(), "shape-profile", cfg, table, extra);
    return kOk;
}

int cmd_triangle_check(const json& cfg) {
    ModelParams p = params_from(cfg);
    TrapFieldRealization field = field_from(cfg, p);
    double t_max = cfg.at("t_max").get<double>();
    int box_radius = cfg.at("box_radius").get<int>();
    int point_radius = cfg.at("point_radius").get<int>();
    double h = cfg.at("h").get<double>();
    int instances = cfg.at("instances").get<int>();
    auto seed = cfg.at("seed").get<uint64_t>();

    TriangleCheckResult res = triangle_check(field, p, t_max, box_radius, point_radius, h, instances, seed);
    ResultTable table({"kind", "id", "t1", "t2", "t3", "lhs", "rhs", "margin", "tolerance", "ok"});
    for (size_t i = 0; i < res.instances.size(); ++i) {
        const auto& ti = res.instances[i];
        table.add("triangle", i, ti.s, ti.r, ti.t, ti.direct, ti.via, ti.margin, 5.0 * ti.tolerance,
                  ti.margin >= -5.0 * ti.tolerance);
    }

    bool sub_ok = true;
    if (!p.gamma_infinite()) {
        auto sub_times = cfg.at("subadd_times").get<std::vector<double>>();
        double sub_h = cfg.value("subadd_h", 0.01);
        ModelParams p0 = p;
        p0.kappa = 0.0;
        SubadditivityResult sub = subadditivity_annealed_check(p0, sub_times, sub_h);
        double tol = 1e-10 * std::max(1.0, std::abs(sub.rows.back().rhs));
        for (size_t i = 0; i < sub.rows.size(); ++i) {
            const auto& r = sub.rows[i];
            table.add("subadditivity", i, r.t1, r.t2, r.t1 + r.t2, r.lhs, r.rhs, r.margin, tol, r.margin >= -tol);
        }
        sub_ok = sub.verdict;
    }

    json extra;
    extra["min_triangle_margin"] = res.min_margin;
    extra["field_seed"] = field.config.seed;
    expt::write_outputs(cfg.at("out").get<std::string>(), "triangle-check", cfg, table, extra);
    return (res.verdict && sub_ok) ? kOk : kVerdictFail;
}

int cmd_kernels_selftest(const json& cfg) {
    auto seed = cfg.at("seed").get<uint64_t>();
    ResultTable table({"check", "value", "reference", "residual", "tol", "pass"});
    bool all_ok = true;
    auto check = [&](const std::string& name, double value, double reference, double tol) {
        double residual = std::abs(value - reference);
        bool ok = residual <= tol;
        all_ok = all_ok && ok;
        table.add(name, value, reference, residual, tol, ok);
    };

    // Bessel and kernel point values
    check("bessel_i0_at_0", bessel_i(0, 0.0), 1.0, 1e-14);
    check("bessel_i1_at_0", bessel_i(1, 0.0), 0.0, 1e-14);
    check("bessel_i0_at_1", bessel_i(0, 1.0), 1.266065877752, 1e-9);
    check("p_t0_origin", transition_prob(0.0, origin(1), 1.0, 1), 1.0, 0.0);
    check("p_t1_origin_d1", transition_prob(1.0, origin(1), 1.0, 1), 0.465759607594, 1e-9);
    check("kernel_symmetry", transition_prob(3.0, {2}, 1.0, 1), transition_prob(3.0, {-2}, 1.0, 1), 1e-15);

    // normalization over certified boxes; monotonicity at the origin
    for (int d : {1, 2, 3}) {
        for (double t : {1.0, 10.0}) {
            int radius = std::max(1, min_radius_for_exit_bound(1.0, t, d, 1e-12));
            Box box{d, radius};
            double total = 0.0, peak = transition_prob(t, origin(d), 1.0, d);
            bool mono = true;
            for (size_t i = 0; i < box.size(); ++i) {
                double v = transition_prob(t, box.point(i), 1.0, d);
                total += v;
                if (v > peak + 1e-15) mono = false;
            }
            check("normalization_d" + std::to_string(d) + "_t" + fmt(t), total, 1.0, 1e-10);
            check("peak_monotone_d" + std::to_string(d) + "_t" + fmt(t), mono ? 1.0 : 0.0, 1.0, 0.0);
        }
    }

    // Chapman-Kolmogorov, d=1, s=t=1
    for (int x : {0, 1, 5}) {
        double conv = 0.0;
        for (int z = -45; z <= 45; ++z)
            conv += transition_prob(1.0, {z}, 1.0, 1) * transition_prob(1.0, {x - z}, 1.0, 1);
        check("chapman_kolmogorov_x" + std::to_string(x), conv, transition_prob(2.0, {x}, 1.0, 1), 1e-10);
    }

    // Green function values and ordering
    double g3 = green_function(3, 1e-10);
    check("green_d3", g3, 1.516386059, 1e-6);
    check("green_tol_contract", green_function(3, 1e-6), g3, 1e-6);
    double g4 = green_function(4, 1e-10), g5 = green_function(5, 1e-10);
    check("green_ordering", (g5 < g4 && g4 < g3) ? 1.0 : 0.0, 1.0, 0.0);

    // Laplace transform limits
    check("laplace_d1_small", laplace_p(1e-4, 1) * std::sqrt(2e-4), 1.0, 0.02);
    check("laplace_d3_small", laplace_p(1e-6, 3), g3, 0.01 * g3);
    check("laplace_large", 1e3 * laplace_p(1e3, 1), 1.0, 2e-3);

    // closed-form transform of the pinned equation vs the time-domain solve
    {
        ModelParams p1{1, 0.0, 1.0, 1.0, 1.0};
        PathSurvivalSolution sol = solve_v0(60.0, 0.005, p1);
        for (double lambda : {0.5, 1.0, 2.0}) {
            double hat = 0.0;
            for (size_t k = 0; k + 1 < sol.m.size(); ++k) {
                double t0 = static_cast<double>(k) * sol.h, t1 = t0 + sol.h;
                hat += 0.5 * sol.h * (std::exp(-lambda * t0) * sol.m[k] + std::exp(-lambda * t1) * sol.m[k + 1]);
            }
            hat += std::exp(-lambda * 60.0) * sol.m.back() / lambda;  // decaying-tail bound
            double ref = hat_v0(lambda, p1);
            check("hat_v0_lambda" + fmt(lambda), hat / ref, 1.0, 1e-4);
        }

        // Tauberian normalization of v0 at large t
        PathSurvivalSolution tail = solve_v0(1e4, 0.25, p1);
        check("tauberian_v0", tail.value() * std::sqrt(M_PI * 1e4 / 2.0), 1.0, 0.05);
    }

    // local CLT against the exact kernel on the mid-deviation grid
    {
        double worst = 0.0;
        for (int x = -100; x <= 100; ++x) {
            double ratio = lclt_approx(200.0, {x}, 1.0, 1) / transition_prob(200.0, {x}, 1.0, 1);
            worst = std::max(worst, std::abs(ratio - 1.0));
        }
        check("lclt_grid_t200", worst, 0.0, 0.05);
        check("rate_j_at_1", rate_j(1.0), 0.4671603, 1e-6);
        check("rate_J_origin", rate_function_J({0.0}, 1.0, 1), 0.0, 0.0);
        double mid = rate_function_J({0.5}, 1.0, 1);
        double ends = 0.5 * (rate_function_J({0.2}, 1.0, 1) + rate_function_J({0.8}, 1.0, 1));
        check("rate_J_convexity", std::max(0.0, mid - ends), 0.0, 1e-14);
    }

    // trap-field law: Poisson fit at three slices, reversal symmetry
    {
        TrapFieldConfig base;
        base.params = ModelParams{1, 0.0, 1.0, 1.0, 1.0};
        base.obs_radius = 200;
        base.horizon = 10.0;
        base.seed = 0;
        auto fits = field_poisson_chi_square(base, {0.0, 5.0, 10.0}, 12, seed);
        for (const auto& f : fits) {
            bool ok = f.pvalue >= 0.01;
            all_ok = all_ok && ok;
            table.add("field_poisson_t" + fmt(f.time), f.pvalue, 0.01, 0.01 - f.pvalue, 0.0, ok);
        }
        TrapFieldConfig small = base;
        small.obs_radius = 8;
        small.horizon = 5.0;
        auto rev = field_reversal_covariance(small, 5.0, {0}, {3}, 4000, seed);
        check("field_reversal_z", std::max(0.0, std::abs(rev.z) - 3.0), 0.0, 0.0);
    }

    expt::write_outputs(cfg.at("out").get<std::string>(), "kernels-selftest", cfg, table);
    return all_ok ? kOk : kVerdictFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"trapwalk: survival of a random walk among moving traps, experiment runner"};
    app.require_subcommand(1);

    json cfg;
    std::string config_file;
    int (*run)(const json&) = nullptr;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_file, "JSON config file; its keys override flags");
    };

    // annealed-exact
    {
        auto* s = app.add_subcommand("annealed-exact", "pinned annealed survival: Volterra (finite gamma) or hitting (gamma=inf)");
        static int d = 1, paths = 0;
        static double rho = 1.0, nu = 1.0, h = 0.1, tol = 1e-10, path_t = 10.0, path_kappa = 1.0;
        static std::string gamma = "1", out;
        static std::vector<double> times{100.0, 1000.0, 10000.0};
        static uint64_t seed = 0;
        s->add_option("--d", d, "dimension");
        s->add_option("--gamma", gamma, "coupling, number or 'inf'");
        s->add_option("--rho", rho, "trap jump rate");
        s->add_option("--nu", nu, "trap density");
        s->add_option("--step", h, "Volterra step");
        s->add_option("--tol", tol, "hitting-box certification tolerance");
        s->add_option("--t", times, "horizons")->delimiter(',');
        s->add_option("--paths", paths, "sample this many walker paths and compare to pinned");
        s->add_option("--path-t", path_t, "horizon for sampled paths");
        s->add_option("--path-kappa", path_kappa, "walker rate for sampled paths");
        auto* seed_opt = s->add_option("--seed", seed, "path-sampling seed (required with --paths)");
        s->add_option("--out", out, "output CSV path");
        add_common(s);
        s->parse_complete_callback([&, seed_opt] {
            cfg = json{{"d", d},           {"gamma", gamma},   {"rho", rho},   {"nu", nu},
                       {"h", h},           {"tol", tol},       {"t", times},   {"paths", paths},
                       {"path_t", path_t}, {"path_kappa", path_kappa}};
            if (paths > 0 && seed_opt->count() == 0) throw CLI::ValidationError("--seed is required with --paths");
            if (seed_opt->count()) cfg["seed"] = seed;
            if (!out.empty()) cfg["out"] = out;
            run = cmd_annealed_exact;
        });
    }

    // annealed-mc
    {
        auto* s = app.add_subcommand("annealed-mc", "annealed survival by Monte Carlo over fields and paths");
        static int d = 1, workers = 1;
        static double kappa = 0.0, rho = 1.0, nu = 1.0, t = 10.0, eps = 1e-8, h = 0.01;
        static std::string gamma = "1", out;
        static uint64_t n_fields = 1000, n_paths = 100, seed = 0;
        s->add_option("--d", d, "dimension");
        s->add_option("--kappa", kappa, "walker jump rate");
        s->add_option("--gamma", gamma, "coupling, number or 'inf'");
        s->add_option("--rho", rho, "trap jump rate");
        s->add_option("--nu", nu, "trap density");
        s->add_option("--t", t, "horizon");
        s->add_option("--n-fields", n_fields, "field replicates");
        s->add_option("--n-paths", n_paths, "paths per field");
        s->add_option("--workers", workers, "worker threads (result-invariant)");
        s->add_option("--epsilon-window", eps, "field truncation budget");
        s->add_option("--step", h, "step for the exact reference");
        s->add_option("--seed", seed, "master seed")->required();
        s->add_option("--out", out, "output CSV path");
        add_common(s);
        s->parse_complete_callback([&] {
            cfg = json{{"d", d},         {"kappa", kappa},       {"gamma", gamma},     {"rho", rho},
                       {"nu", nu},       {"t", t},               {"n_fields", n_fields}, {"n_paths", n_paths},
                       {"workers", workers}, {"epsilon_window", eps}, {"h", h},         {"seed", seed}};
            if (!out.empty()) cfg["out"] = out;
            run = cmd_annealed_mc;
        });
    }

    // quenched-mc / quenched-pde share field flags
    auto add_field_flags = [&](CLI::App* s, int& d, double& kappa, double& rho, double& nu, std::string& gamma,
                               int& obs_radius, double& horizon, double& eps, uint64_t& field_seed,
                               std::string& field_file) {
        s->add_option("--d", d, "dimension");
        s->add_option("--kappa", kappa, "walker jump rate");
        s->add_option("--gamma", gamma, "coupling, number or 'inf'");
        s->add_option("--rho", rho, "trap jump rate");
        s->add_option("--nu", nu, "trap density");
        s->add_option("--obs-radius", obs_radius, "observation box radius");
        s->add_option("--horizon", horizon, "field horizon");
        s->add_option("--epsilon-window", eps, "field truncation budget");
        s->add_option("--field-seed", field_seed, "field realization seed");
        s->add_option("--field-file", field_file, "load a serialized field instead of sampling");
    };

    {
        auto* s = app.add_subcommand("quenched-mc", "quenched survival on one field by path sampling");
        static int d = 1, obs_radius = 60;
        static double kappa = 1.0, rho = 1.0, nu = 1.0, t = 10.0, horizon = 10.0, eps = 1e-8, threshold = 0.05;
        static std::string gamma = "1", out, field_file;
        static uint64_t n = 100000, seed = 0, field_seed = 1;
        add_field_flags(s, d, kappa, rho, nu, gamma, obs_radius, horizon, eps, field_seed, field_file);
        s->add_option("--t", t, "horizon for the survival");
        s->add_option("--n", n, "path replicates");
        s->add_option("--exclusion-threshold", threshold, "abort fraction tolerated");
        s->add_option("--seed", seed, "path seed")->required();
        s->add_option("--out", out, "output CSV path");
        add_common(s);
        s->parse_complete_callback([&] {
            cfg = json{{"d", d},           {"kappa", kappa},   {"gamma", gamma},         {"rho", rho},
                       {"nu", nu},         {"obs_radius", obs_radius}, {"horizon", horizon}, {"epsilon_window", eps},
                       {"field_seed", field_seed}, {"field_file", field_file}, {"t", t},  {"n", n},
                       {"exclusion_threshold", threshold}, {"seed", seed}};
            if (!out.empty()) cfg["out"] = out;
            run = cmd_quenched_mc;
        });
    }

    {
        auto* s = app.add_subcommand("quenched-pde", "quenched survival on one field by the lattice solver");
        static int d = 1, obs_radius = 60, box_radius = 40, mc_cross = 0;
        static double kappa = 1.0, rho = 1.0, nu = 1.0, t = 10.0, horizon = 10.0, eps = 1e-8, h = 0.02;
        static std::string gamma = "1", out, field_file;
        static uint64_t seed = 0, field_seed = 1;
        add_field_flags(s, d, kappa, rho, nu, gamma, obs_radius, horizon, eps, field_seed, field_file);
        s->add_option("--t", t, "horizon for the survival");
        s->add_option("--box-radius", box_radius, "solver box radius");
        s->add_option("--step", h, "splitting step");
        s->add_option("--mc-cross", mc_cross, "cross-check with this many sampled paths");
        auto* seed_opt = s->add_option("--seed", seed, "path seed (required with --mc-cross)");
        s->add_option("--out", out, "output CSV path");
        add_common(s);
        s->parse_complete_callback([&, seed_opt] {
            cfg = json{{"d", d},           {"kappa", kappa}, {"gamma", gamma},         {"rho", rho},
                       {"nu", nu},         {"obs_radius", obs_radius}, {"horizon", horizon}, {"epsilon_window", eps},
                       {"field_seed", field_seed}, {"field_file", field_file}, {"t", t},
                       {"box_radius", box_radius}, {"h", h}, {"mc_cross", mc_cross}};
            if (mc_cross > 0 && seed_opt->count() == 0)
                throw CLI::ValidationError("--seed is required with --mc-cross");
            if (seed_opt->count()) cfg["seed"] = seed;
            if (!out.empty()) cfg["out"] = out;
            run = cmd_quenched_pde;
        });
    }

    {
        auto* s = app.add_subcommand("pascal-sweep", "exhaustive discrete Pascal sweep over all 3^n paths (d=1)");
        static int n = 5;
        static double stay = 0.5, axis = 0.25;
        static std::vector<double> qs{0.3, 1.0};
        static std::string out;
        s->add_option("--n", n, "steps");
        s->add_option("--q", qs, "trapping probabilities")->delimiter(',');
        s->add_option("--stay", stay, "kernel stay probability");
        s->add_option("--axis", axis, "kernel per-direction probability");
        s->add_option("--out", out, "output CSV path");
        add_common(s);
        s->parse_complete_callback([&] {
            cfg = json{{"n", n}, {"q", qs}, {"stay", stay}, {"axis", axis}};
            if (!out.empty()) cfg["out"] = out;
            run = cmd_pascal_sweep;
        });
    }

    {
        auto* s = app.add_subcommand("range-sweep", "expected-range comparison over all 3^n paths (d=1)");
        static int n = 5;
        static double stay = 0.5, axis = 0.25;
        static std::string out;
        s->add_option("--n", n, "steps");
        s->add_option("--stay", stay, "kernel stay probability");
        s->add_option("--axis", axis, "kernel per-direction probability");
        s->add_option("--out", out, "output CSV path");
        add_common(s);
        s->parse_complete_callback([&] {
            cfg = json{{"n", n}, {"stay", stay}, {"axis", axis}};
            if (!out.empty()) cfg["out"] = out;
            run = cmd_range_sweep;
        });
    }

    {
        auto* s = app.add_subcommand("hitting", "no-hit probability of the origin for the trap walk, plus its time integral");
        static int d = 1, box_radius = 0, inner_radius = 0;
        static double rho = 1.0, nu = 1.0, t = 100.0, tol = 1e-10;
        static std::string out;
        s->add_option("--d", d, "dimension");
        s->add_option("--rho", rho, "trap jump rate");
        s->add_option("--nu", nu, "trap density (for the survival column)");
        s->add_option("--t", t, "horizon");
        s->add_option("--box-radius", box_radius, "solver box radius (0 = auto)");
        s->add_option("--inner-radius", inner_radius, "radius for the psi-sum identity (0 = auto)");
        s->add_option("--tol", tol, "certification tolerance");
        s->add_option("--out", out, "output CSV path");
        add_common(s);
        s->parse_complete_callback([&] {
            cfg = json{{"d", d},   {"rho", rho},              {"nu", nu},
                       {"t", t},   {"box_radius", box_radius}, {"inner_radius", inner_radius},
                       {"tol", tol}};
            if (!out.empty()) cfg["out"] = out;
            run = cmd_hitting;
        });
    }

    {
        auto* s = app.add_subcommand("lyapunov-table", "quenched decay-rate table over horizons (PDE on fresh fields)");
        static int d = 1;
        static double kappa = 1.0, rho = 1.0, nu = 1.0, h = 0.01;
        static std::string gamma = "1", out;
        static std::vector<double> horizons{10.0, 20.0, 50.0};
        static uint64_t replicates = 16, seed = 0;
        s->add_option("--d", d, "dimension");
        s->add_option("--kappa", kappa, "walker jump rate");
        s->add_option("--gamma", gamma, "coupling (finite)");
        s->add_option("--rho", rho, "trap jump rate");
        s->add_option("--nu", nu, "trap density");
        s->add_option("--horizons", horizons, "horizons")->delimiter(',');
        s->add_option("--replicates", replicates, "fields per horizon");
        s->add_option("--step", h, "splitting step");
        s->add_option("--seed", seed, "master seed")->required();
        s->add_option("--out", out, "output CSV path");
        add_common(s);
        s->parse_complete_callback([&] {
            cfg = json{{"d", d},       {"kappa", kappa}, {"gamma", gamma}, {"rho", rho},
                       {"nu", nu},     {"horizons", horizons}, {"replicates", replicates},
                       {"h", h},       {"seed", seed}};
            if (!out.empty()) cfg["out"] = out;
            run = cmd_lyapunov_table;
        });
    }

    {
        auto* s = app.add_subcommand("shape-profile", "passage-weight profile -log u / t along the first axis");
        static int d = 1, obs_radius = 120, box_radius = 100;
        static double kappa = 1.0, rho = 1.0, nu = 0.5, t = 50.0, horizon = 50.0, eps = 1e-8, h = 0.05;
        static std::string gamma = "1", out, field_file;
        static std::vector<double> speeds{0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
        static uint64_t field_seed = 1;
        add_field_flags(s, d, kappa, rho, nu, gamma, obs_radius, horizon, eps, field_seed, field_file);
        s->add_option("--t", t, "profile time");
        s->add_option("--speeds", speeds, "speeds v; reads at round(v t) e1")->delimiter(',');
        s->add_option("--box-radius", box_radius, "solver box radius");
        s->add_option("--step", h, "splitting step");
        s->add_option("--out", out, "output CSV path");
        add_common(s);
        s->parse_complete_callback([&] {
            cfg = json{{"d", d},           {"kappa", kappa},   {"gamma", gamma},         {"rho", rho},
                       {"nu", nu},         {"obs_radius", obs_radius}, {"horizon", horizon}, {"epsilon_window", eps},
                       {"field_seed", field_seed}, {"field_file", field_file}, {"t", t},
                       {"speeds", speeds}, {"box_radius", box_radius}, {"h", h}};
            if (!out.empty()) cfg["out"] = out;
            run = cmd_shape_profile;
        });
    }

    {
        auto* s = app.add_subcommand("triangle-check", "passage triangle inequality + annealed subadditivity margins");
        static int d = 1, obs_radius = 40, box_radius = 30, point_radius = 4, instances = 50;
        static double kappa = 1.0, rho = 1.0, nu = 1.0, t_max = 4.0, horizon = 4.0, eps = 1e-8, h = 0.05,
                      subadd_h = 0.01;
        static std::string gamma = "1", out, field_file;
        static std::vector<double> subadd_times{1.0, 2.0, 5.0, 10.0};
        static uint64_t field_seed = 1, seed = 0;
        add_field_flags(s, d, kappa, rho, nu, gamma, obs_radius, horizon, eps, field_seed, field_file);
        s->add_option("--t-max", t_max, "largest time");
        s->add_option("--box-radius", box_radius, "solver box radius");
        s->add_option("--point-radius", point_radius, "points drawn from this sub-box");
        s->add_option("--step", h, "splitting step");
        s->add_option("--instances", instances, "random instances");
        s->add_option("--subadd-times", subadd_times, "grid for the kappa=0 subadditivity rows")->delimiter(',');
        s->add_option("--subadd-h", subadd_h, "Volterra step for subadditivity");
        s->add_option("--seed", seed, "instance-draw seed")->required();
        s->add_option("--out", out, "output CSV path");
        add_common(s);
        s->parse_complete_callback([&] {
            cfg = json{{"d", d},           {"kappa", kappa},   {"gamma", gamma},         {"rho", rho},
                       {"nu", nu},         {"obs_radius", obs_radius}, {"horizon", horizon}, {"epsilon_window", eps},
                       {"field_seed", field_seed}, {"field_file", field_file}, {"t_max", t_max},
                       {"box_radius", box_radius}, {"point_radius", point_radius}, {"h", h},
                       {"instances", instances}, {"subadd_times", subadd_times}, {"subadd_h", subadd_h},
                       {"seed", seed}};
            if (!out.empty()) cfg["out"] = out;
            run = cmd_triangle_check;
        });
    }

    {
        auto* s = app.add_subcommand("kernels-selftest", "kernel identities, transform closures, field-law checks");
        static std::string out;
        static uint64_t seed = 0;
        s->add_option("--seed", seed, "seed for the field-law checks")->required();
        s->add_option("--out", out, "output CSV path");
        add_common(s);
        s->parse_complete_callback([&] {
            cfg = json{{"seed", seed}};
            if (!out.empty()) cfg["out"] = out;
            run = cmd_kernels_selftest;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        expt::apply_config_file(cfg, config_file);
        if (!cfg.contains("out") || cfg["out"].get<std::string>().empty())
            cfg["out"] = app.get_subcommands().front()->get_name() + ".csv";
        return run(cfg);
    } catch (const CertificationError& e) {
        std::cerr << "certification failure: " << e.what() << "\n";
        return kCertification;
    } catch (const OutOfWindowError& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return kBadParams;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return kBadParams;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid parameters: " << e.what() << "\n";
        return kBadParams;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}
