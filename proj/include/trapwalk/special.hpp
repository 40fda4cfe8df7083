#pragma once

#include <vector>

namespace trapwalk {

/// Exponentially scaled modified Bessel function e^{-x} I_n(x), x >= 0.
/// This is the numerically safe companion used everywhere internally; it
/// stays bounded for arguments up to 1e6 and beyond.
double bessel_i_scaled(int order, double x);

/// e^{-x} I_n(x) for all orders n = 0..nmax at once (Miller backward
/// recurrence normalised by I_0 + 2 sum I_k = e^x).
std::vector<double> bessel_i_scaled_all(int nmax, double x);

/// Modified Bessel function I_n(x).  Overflows to +inf for x beyond ~709;
/// use bessel_i_scaled for large arguments.
double bessel_i(int order, double x);

}  // namespace trapwalk
