#pragma once

#include <unordered_map>

#include "trapwalk/model.hpp"

namespace trapwalk {

/// phi(s, y) = P_y(rate-rho walk does not visit 0 before s), solved as the
/// heat flow with site 0 absorbing on a certified box, by uniformization of
/// the time-independent generator.  The evolution is exact up to the Poisson
/// series tail and the box truncation; phi, psi = 1 - phi and the running
/// integral of phi(., e1) are one-sided within exit_bound.
///
/// The flow is invariant under coordinate permutations and sign flips, so it
/// is evolved on the orbit space (sorted absolute coordinates), which makes
/// d = 3 boxes of radius ~100 cheap.
struct HittingSolution {
    int box_radius = 0;
    double exit_bound = 0.0;            // certified P(walk leaves the box by t)
    double series_tol = 0.0;            // total Poisson tail truncation budget
    std::vector<double> times;          // quadrature grid (quadratic spacing)
    std::vector<double> phi_e1;         // phi(times[j], e1)
    std::vector<double> integral;       // int_0^{times[j]} phi(s, e1) ds

    double value() const { return phi_e1.back(); }
    double integral_value() const { return integral.back(); }

    /// phi at the final time for any box point (orbit lookup).
    double phi_final(const LatticePoint& y) const;
    /// sum over 0 < |y|_inf <= inner_radius of psi(final, y) = 1 - phi(final, y),
    /// with orbit multiplicities; equals rho * integral_value() up to truncation
    /// when inner_radius covers the spread of psi and box_radius - inner_radius
    /// keeps the outer-wall contamination small.
    double sum_psi_final(int inner_radius) const;

    // orbit-space internals (kept for lookups)
    int d = 1;
    std::vector<double> phi_final_orbits;
    std::vector<double> orbit_multiplicity;
    std::unordered_map<uint64_t, int32_t> orbit_index;
    size_t origin_orbit = 0;
};

/// Solve up to time t on [-box_radius, box_radius]^d.  Throws
/// CertificationError (with the smallest workable radius) if the box cannot
/// certify exit probability <= tol.
HittingSolution solve_hitting(double t, const ModelParams& params, int box_radius, double tol = 1e-10);

/// Annealed survival of the hard-trap (gamma = inf) pinned walk:
/// exp(-nu rho int_0^t phi(s, e1) ds), with the box chosen automatically.
double annealed_survival_infinite_gamma(double t, const ModelParams& params, double tol = 1e-10);

}  // namespace trapwalk
