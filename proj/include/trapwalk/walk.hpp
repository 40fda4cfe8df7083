#pragma once

#include <vector>

#include "trapwalk/model.hpp"
#include "trapwalk/rng.hpp"

namespace trapwalk {

/// Cadlag nearest-neighbour trajectory on [0, horizon]: position is the
/// start plus all steps with jump time <= t.
struct JumpTrajectory {
    LatticePoint start;
    std::vector<double> jump_times;   // strictly increasing, within (0, horizon]
    std::vector<uint8_t> steps;       // direction codes, see apply_step
    double horizon = 0.0;

    std::vector<LatticePoint> positions;  // start and position after each jump

    void build_positions() {
        positions.clear();
        positions.reserve(steps.size() + 1);
        positions.push_back(start);
        LatticePoint cur = start;
        for (uint8_t s : steps) {
            apply_step(cur, s);
            positions.push_back(cur);
        }
    }

    size_t segment_at(double t) const {
        size_t lo = 0, hi = jump_times.size();
        while (lo < hi) {
            size_t mid = (lo + hi) / 2;
            if (jump_times[mid] <= t)
                lo = mid + 1;
            else
                hi = mid;
        }
        return lo;
    }

    const LatticePoint& position_at(double t) const { return positions[segment_at(t)]; }

    int max_supnorm() const {
        int m = 0;
        for (const auto& p : positions) m = std::max(m, supnorm(p));
        return m;
    }
};

using WalkPath = JumpTrajectory;
using TrapTrajectory = JumpTrajectory;

/// Sample the walk: rate-kappa jumps, uniform over the 2d unit steps,
/// started at the origin.
WalkPath sample_walk(const ModelParams& params, double horizon, Rng& rng);

/// Same core sampler for a trap started at `start` with jump rate `rate`.
JumpTrajectory sample_trajectory(const LatticePoint& start, double rate, int d, double horizon, Rng& rng);

}  // namespace trapwalk
