#include "trapwalk/walk.hpp"

namespace trapwalk {

JumpTrajectory sample_trajectory(const LatticePoint& start, double rate, int d, double horizon, Rng& rng) {
    if (!(horizon >= 0.0)) throw std::invalid_argument("sample_trajectory: horizon must be >= 0");
    JumpTrajectory traj;
    traj.start = start;
    traj.horizon = horizon;
    if (rate > 0.0) {
        double t = rng.exponential(rate);
        while (t <= horizon) {
            traj.jump_times.push_back(t);
            traj.steps.push_back(static_cast<uint8_t>(rng.uniform_int(static_cast<uint64_t>(2 * d))));
            t += rng.exponential(rate);
        }
    }
    traj.build_positions();
    return traj;
}

WalkPath sample_walk(const ModelParams& params, double horizon, Rng& rng) {
    params.validate();
    return sample_trajectory(origin(params.d), params.kappa, params.d, horizon, rng);
}

}  // namespace trapwalk
