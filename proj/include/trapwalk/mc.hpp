#pragma once

#include "trapwalk/model.hpp"
#include "trapwalk/trap_field.hpp"
#include "trapwalk/walk.hpp"

namespace trapwalk {

/// Monte Carlo estimate with full seed provenance.  Replicate i always uses
/// the stream derived from (seed, tag, i), so estimates are reproducible and
/// independent of worker count or evaluation order.
struct McEstimate {
    double mean = 0.0;
    double stderror = 0.0;
    uint64_t n = 0;
    uint64_t seed = 0;
    uint64_t excluded = 0;     // replicates dropped (walker left the window)
    double bias_bound = 0.0;   // scores lie in [0,1], so bias <= excluded fraction

    double half_width(double z = 3.0) const { return z * stderror; }
};

/// Quenched survival E_X exp(-gamma int xi(s, X(s)) ds) on a fixed field by
/// path sampling.  gamma = inf scores the indicator of zero overlap.  Paths
/// leaving the observation box abort their replicate with a counted
/// exclusion; an exclusion fraction above `exclusion_threshold` throws.
McEstimate quenched_survival_mc(const TrapFieldRealization& field, const ModelParams& params, double t, uint64_t n,
                                uint64_t seed, double exclusion_threshold = 0.05);

/// Annealed survival: outer average over field replicates (field i drawn
/// from stream (seed, i)), inner quenched estimate with n_paths per field.
/// The standard error is across field replicates.
McEstimate annealed_survival_mc(const ModelParams& params, double t, uint64_t n_fields, uint64_t n_paths,
                                uint64_t seed, double epsilon_window = 1e-8, int workers = 1);

struct QuenchedLyapunovRow {
    double t = 0.0;
    double estimate = 0.0;   // mean of -log(Z)/t over field replicates
    double stderror = 0.0;
    uint64_t replicates = 0;
    double envelope = 0.0;   // gamma nu + kappa upper bound
};

/// PDE-based quenched rate table over a grid of horizons, independent fields
/// per replicate.  Estimates must satisfy 0 < estimate <= gamma nu + kappa
/// up to the reported statistical error.
std::vector<QuenchedLyapunovRow> lyapunov_quenched_estimate(const ModelParams& params,
                                                            const std::vector<double>& horizons, uint64_t replicates,
                                                            uint64_t seed, double h = 0.01);

}  // namespace trapwalk
