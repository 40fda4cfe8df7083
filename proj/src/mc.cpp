#include "trapwalk/mc.hpp"

#include <cmath>
#include <functional>
#include <thread>

#include "trapwalk/kernels.hpp"
#include "trapwalk/pam.hpp"
#include "trapwalk/rng.hpp"

namespace trapwalk {

namespace {

constexpr uint64_t kPathTag = 3;
constexpr uint64_t kFieldSeedTag = 10;
constexpr uint64_t kFieldPathsTag = 11;
constexpr uint64_t kLyapunovTag = 20;

struct Accumulator {
    double sum = 0.0, sumsq = 0.0;
    uint64_t n = 0;
    void add(double x) {
        sum += x;
        sumsq += x * x;
        ++n;
    }
    double mean() const { return n > 0 ? sum / n : 0.0; }
    double stderror() const {
        if (n < 2) return 0.0;
        double var = (sumsq - sum * sum / n) / (n - 1);
        return std::sqrt(std::max(0.0, var) / n);
    }
};

void parallel_for(uint64_t n, int workers, const std::function<void(uint64_t)>& body) {
    if (workers <= 1) {
        for (uint64_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    uint64_t chunk = (n + workers - 1) / static_cast<uint64_t>(workers);
    for (int w = 0; w < workers; ++w) {
        uint64_t lo = w * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (uint64_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

McEstimate quenched_survival_mc(const TrapFieldRealization& field, const ModelParams& params, double t, uint64_t n,
                                uint64_t seed, double exclusion_threshold) {
    params.validate();
    if (!(t >= 0.0) || t > field.config.horizon)
        throw OutOfWindowError("quenched_survival_mc: t beyond the field horizon");
    if (n == 0) throw std::invalid_argument("quenched_survival_mc: need n >= 1");
    if (params.d != field.config.params.d) throw std::invalid_argument("quenched_survival_mc: dimension mismatch");

    Accumulator acc;
    uint64_t excluded = 0;
    for (uint64_t i = 0; i < n; ++i) {
        Rng rng = derive_stream(seed, {kPathTag, i});
        WalkPath path = sample_trajectory(origin(params.d), params.kappa, params.d, t, rng);
        if (path.max_supnorm() > field.config.obs_radius) {
            ++excluded;
            continue;
        }
        double overlap = field.integrate_along_path(path, 0.0, t);
        double score = params.gamma_infinite() ? (overlap == 0.0 ? 1.0 : 0.0) : std::exp(-params.gamma * overlap);
        acc.add(score);
    }
    if (static_cast<double>(excluded) > exclusion_threshold * static_cast<double>(n)) {
        int suggested = min_radius_for_exit_bound(params.kappa, t, params.d, 0.01 * exclusion_threshold);
        throw CertificationError("quenched_survival_mc: exclusion fraction exceeds threshold; observation box too small",
                                 suggested);
    }
    McEstimate est;
    est.mean = acc.mean();
    est.stderror = acc.stderror();
    est.n = acc.n;
    est.seed = seed;
    est.excluded = excluded;
    est.bias_bound = n > 0 ? static_cast<double>(excluded) / static_cast<double>(n) : 0.0;
    return est;
}

McEstimate annealed_survival_mc(const ModelParams& params, double t, uint64_t n_fields, uint64_t n_paths,
                                uint64_t seed, double epsilon_window, int workers) {
    params.validate();
    if (n_fields == 0 || n_paths == 0) throw std::invalid_argument("annealed_survival_mc: need replicates >= 1");
    TrapFieldConfig cfg;
    cfg.params = params;
    cfg.obs_radius = params.kappa > 0.0 ? min_radius_for_exit_bound(params.kappa, t, params.d, 1e-4) : 0;
    cfg.horizon = t;
    cfg.epsilon_window = epsilon_window;

    std::vector<double> field_mean(n_fields);
    std::vector<uint64_t> field_excluded(n_fields);
    parallel_for(n_fields, workers, [&](uint64_t i) {
        TrapFieldConfig fc = cfg;
        fc.seed = derive_stream(seed, {kFieldSeedTag, i}).next();
        TrapFieldRealization field = sample_field(fc);
        McEstimate inner =
            quenched_survival_mc(field, params, t, n_paths, derive_stream(seed, {kFieldPathsTag, i}).next(), 1.0);
        field_mean[i] = inner.n > 0 ? inner.mean : 0.0;
        field_excluded[i] = inner.excluded;
    });

    Accumulator acc;
    uint64_t excluded = 0;
    for (uint64_t i = 0; i < n_fields; ++i) {
        acc.add(field_mean[i]);
        excluded += field_excluded[i];
    }
    McEstimate est;
    est.mean = acc.mean();
    est.stderror = acc.stderror();
    est.n = n_fields;
    est.seed = seed;
    est.excluded = excluded;
    est.bias_bound = static_cast<double>(excluded) / static_cast<double>(n_fields * n_paths);
    return est;
}

std::vector<QuenchedLyapunovRow> lyapunov_quenched_estimate(const ModelParams& params,
                                                            const std::vector<double>& horizons, uint64_t replicates,
                                                            uint64_t seed, double h) {
    params.validate();
    if (params.gamma_infinite())
        throw std::domain_error("lyapunov_quenched_estimate: needs finite gamma (the envelope gamma nu + kappa)");
    if (!(params.gamma > 0.0)) throw std::domain_error("lyapunov_quenched_estimate: needs gamma > 0");
    if (replicates == 0) throw std::invalid_argument("lyapunov_quenched_estimate: need replicates >= 1");

    std::vector<QuenchedLyapunovRow> rows;
    for (size_t ti = 0; ti < horizons.size(); ++ti) {
        double t = horizons[ti];
        if (!(t > 0.0)) throw std::invalid_argument("lyapunov_quenched_estimate: horizons must be > 0");
        // Box sized so the absorbing-boundary bias is negligible against the
        // smallest plausible survival e^{-(gamma nu + kappa) t}.
        double rate_cap = params.kappa + params.nu * std::min(params.gamma, 5.0) + 2.0;
        double target = std::exp(-rate_cap * t) * 1e-3;
        int radius = params.kappa > 0.0 ? min_radius_for_exit_bound(params.kappa, t, params.d, target) : 0;

        TrapFieldConfig cfg;
        cfg.params = params;
        cfg.obs_radius = radius;
        cfg.horizon = t;

        Accumulator acc;
        for (uint64_t r = 0; r < replicates; ++r) {
            TrapFieldConfig fc = cfg;
            fc.seed = derive_stream(seed, {kLyapunovTag, ti, r}).next();
            TrapFieldRealization field = sample_field(fc);
            double logz = quenched_log_survival_pde(field, params, t, radius, h);
            acc.add(-logz / t);
        }
        QuenchedLyapunovRow row;
        row.t = t;
        row.estimate = acc.mean();
        row.stderror = acc.stderror();
        row.replicates = acc.n;
        row.envelope = params.gamma * params.nu + params.kappa;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace trapwalk
