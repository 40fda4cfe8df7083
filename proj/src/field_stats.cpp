#include "trapwalk/field_stats.hpp"

#include <cmath>
#include <stdexcept>

#include "trapwalk/rng.hpp"
#include "trapwalk/stats.hpp"

namespace trapwalk {

std::vector<SliceFitResult> field_poisson_chi_square(const TrapFieldConfig& base, const std::vector<double>& slices,
                                                     int n_fields, uint64_t seed, double fit_nu) {
    base.validate();
    if (n_fields < 1) throw std::invalid_argument("field_poisson_chi_square: n_fields must be >= 1");
    if (fit_nu < 0.0) throw std::invalid_argument("field_poisson_chi_square: fit_nu must be >= 0");
    for (double t : slices)
        if (!(t >= 0.0 && t <= base.horizon)) throw std::invalid_argument("slice outside [0, horizon]");

    Box box{base.params.d, base.obs_radius};
    long samples = static_cast<long>(box.size()) * n_fields;

    // histogram per slice, counts pooled over fields and sites
    std::vector<std::vector<long>> hist(slices.size(), std::vector<long>(64, 0));
    for (int f = 0; f < n_fields; ++f) {
        TrapFieldConfig cfg = base;
        cfg.seed = derive_stream(seed, {30, static_cast<uint64_t>(f)}).next();
        TrapFieldRealization field = sample_field(cfg);
        for (size_t s = 0; s < slices.size(); ++s) {
            for (size_t i = 0; i < box.size(); ++i) {
                int c = field.occupancy(slices[s], box.point(i));
                hist[s][static_cast<size_t>(std::min(c, 63))] += 1;
            }
        }
    }

    std::vector<SliceFitResult> out;
    double nu = fit_nu > 0.0 ? fit_nu : base.params.nu;
    for (size_t s = 0; s < slices.size(); ++s) {
        // bins 0..B-1 plus a pooled tail, cut where the expectation drops below 5
        double pk = std::exp(-nu);
        int bcut = 0;
        double cum = 0.0;
        for (int k = 0; k < 63; ++k) {
            if (static_cast<double>(samples) * pk < 5.0 && k > 0) break;
            cum += pk;
            bcut = k + 1;
            pk *= nu / (k + 1);
        }
        double stat = 0.0;
        pk = std::exp(-nu);
        long tail_obs = 0;
        for (int k = 0; k < 64; ++k) {
            if (k < bcut) {
                double expd = static_cast<double>(samples) * pk;
                double obs = static_cast<double>(hist[s][static_cast<size_t>(k)]);
                stat += (obs - expd) * (obs - expd) / expd;
                pk *= nu / (k + 1);
            } else {
                tail_obs += hist[s][static_cast<size_t>(k)];
            }
        }
        double tail_exp = static_cast<double>(samples) * (1.0 - cum);
        if (tail_exp > 0.0) stat += (static_cast<double>(tail_obs) - tail_exp) * (static_cast<double>(tail_obs) - tail_exp) / tail_exp;
        int df = bcut;  // bcut + 1 bins, minus one constraint
        SliceFitResult r;
        r.time = slices[s];
        r.stat = stat;
        r.df = df;
        r.pvalue = chi_square_pvalue(stat, df);
        r.samples = samples;
        out.push_back(r);
    }
    return out;
}

ReversalCovarianceResult field_reversal_covariance(const TrapFieldConfig& base, double T, const LatticePoint& x,
                                                   const LatticePoint& y, int n_fields, uint64_t seed) {
    base.validate();
    if (!(T >= 0.0 && T <= base.horizon)) throw std::invalid_argument("field_reversal_covariance: T outside horizon");
    double sum_a = 0.0, sum_b = 0.0, sum_d = 0.0, sum_d2 = 0.0;
    for (int f = 0; f < n_fields; ++f) {
        TrapFieldConfig cfg = base;
        cfg.seed = derive_stream(seed, {31, static_cast<uint64_t>(f)}).next();
        TrapFieldRealization field = sample_field(cfg);
        double a = static_cast<double>(field.occupancy(0.0, x)) * field.occupancy(T, y);
        double b = static_cast<double>(field.occupancy(0.0, y)) * field.occupancy(T, x);
        sum_a += a;
        sum_b += b;
        sum_d += a - b;
        sum_d2 += (a - b) * (a - b);
    }
    ReversalCovarianceResult r;
    r.n = n_fields;
    r.forward = sum_a / n_fields;
    r.reversed = sum_b / n_fields;
    r.diff_mean = sum_d / n_fields;
    double var = (sum_d2 - sum_d * sum_d / n_fields) / (n_fields - 1.0);
    r.diff_stderr = std::sqrt(std::max(0.0, var) / n_fields);
    r.z = r.diff_stderr > 0.0 ? r.diff_mean / r.diff_stderr : 0.0;
    return r;
}

}  // namespace trapwalk
