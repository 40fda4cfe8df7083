#pragma once

#include <string>
#include <vector>

#include "trapwalk/model.hpp"
#include "trapwalk/walk.hpp"

namespace trapwalk {

/// Configuration for one trap-field realisation.  Queries are only valid
/// inside the observation box [-obs_radius, obs_radius]^d and up to the
/// horizon; the field is sampled on a certified larger window so that the
/// probability of an unsampled trap reaching the observation box before the
/// horizon is at most epsilon_window.
struct TrapFieldConfig {
    ModelParams params;
    int obs_radius = 0;
    double horizon = 0.0;
    double epsilon_window = 1e-8;
    uint64_t seed = 0;

    void validate() const {
        params.validate();
        if (obs_radius < 0) throw std::invalid_argument("TrapFieldConfig: obs_radius must be >= 0");
        if (!(horizon >= 0.0)) throw std::invalid_argument("TrapFieldConfig: horizon must be >= 0");
        if (!(epsilon_window > 0.0 && epsilon_window < 1.0))
            throw std::invalid_argument("TrapFieldConfig: epsilon_window must be in (0,1)");
    }
};

/// Smallest window radius such that the expected number of traps started
/// outside it that reach the observation box before the horizon is at most
/// epsilon (Poisson jump-count Chernoff bound summed over shells).
int window_radius(const ModelParams& params, int obs_radius, double horizon, double epsilon);

/// A sampled Poisson system of independently walking traps.
struct TrapFieldRealization {
    TrapFieldConfig config;
    int window = 0;
    std::vector<TrapTrajectory> trajectories;

    /// Number of traps at site x at time t.  Out-of-window queries throw.
    int occupancy(double t, const LatticePoint& x) const;

    /// Exact int_{t0}^{t1} xi(s, path(s)) ds along a stored path (both the
    /// path and the traps are piecewise constant, so the overlap is a finite
    /// sum of interval lengths).
    double integrate_along_path(const WalkPath& path, double t0, double t1) const;

    void check_in_window(double t, const LatticePoint& x) const;
};

/// Draw the field for the given configuration.  Trap counts and individual
/// trajectories use streams keyed by (seed, site index, trap index), so the
/// realisation is independent of traversal order and worker count.
TrapFieldRealization sample_field(const TrapFieldConfig& config);

/// Versioned JSON serialisation.  The file stores the configuration (seed
/// included) plus a digest; loading resamples and verifies bit-exactness.
std::string field_to_json(const TrapFieldRealization& field);
TrapFieldRealization field_from_json(const std::string& text);
void save_field(const TrapFieldRealization& field, const std::string& path);
TrapFieldRealization load_field(const std::string& path);

}  // namespace trapwalk
