#pragma once

#include <vector>

#include "trapwalk/trap_field.hpp"

namespace trapwalk {

/// Chi-square goodness of fit of the site counts at one time slice against
/// i.i.d. Poisson(nu), pooled over n_fields independent realizations so the
/// expected bin counts are healthy.
struct SliceFitResult {
    double time = 0.0;
    double stat = 0.0;
    int df = 0;
    double pvalue = 0.0;
    long samples = 0;
};

/// fit_nu, when nonzero, is the intensity tested against (power checks);
/// by default the fit uses the sampling intensity base.params.nu.
std::vector<SliceFitResult> field_poisson_chi_square(const TrapFieldConfig& base, const std::vector<double>& slices,
                                                     int n_fields, uint64_t seed, double fit_nu = 0.0);

/// Time-reversal symmetry of the two-point function: compares the empirical
/// mean of xi(0,x) xi(T,y) against xi(0,y) xi(T,x) over independent fields.
struct ReversalCovarianceResult {
    double forward = 0.0;
    double reversed = 0.0;
    double diff_mean = 0.0;
    double diff_stderr = 0.0;
    double z = 0.0;
    int n = 0;
};

ReversalCovarianceResult field_reversal_covariance(const TrapFieldConfig& base, double T, const LatticePoint& x,
                                                   const LatticePoint& y, int n_fields, uint64_t seed);

}  // namespace trapwalk
