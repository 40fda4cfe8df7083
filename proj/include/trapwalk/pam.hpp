#pragma once

#include "trapwalk/model.hpp"
#include "trapwalk/trap_field.hpp"

namespace trapwalk {

/// Direction in which the solver reads the trap field.  `forward` evolves
/// against xi(s, .); `reversed` against xi(s0 + t - s, .), which by the
/// Feynman-Kac time reversal turns unit initial data into the quenched
/// survival probability read at the origin.
enum class TimeOrder { forward, reversed };

struct PamSnapshot {
    double time = 0.0;
    std::vector<double> values;
    double log_offset = 0.0;  // true u = values * exp(log_offset)
};

/// Splitting solution of du/dt = kappa Laplacian u - gamma xi u on a box
/// with absorbing boundary (a certified lower bound on survival mass).
struct PamGrid {
    Box box;
    double h = 0.0;            // actual step
    double start_time = 0.0;
    double end_time = 0.0;
    TimeOrder order = TimeOrder::forward;
    double exit_bound = 0.0;   // walker box-exit probability bound
    std::vector<double> values;  // u(end_time, .) over the box
    double log_offset = 0.0;
    std::vector<PamSnapshot> snapshots;

    double value_at(const LatticePoint& x) const { return values[box.index(x)] * std::exp(log_offset); }
    double log_total_mass() const;
};

std::vector<double> initial_ones(const Box& box);
std::vector<double> initial_delta(const Box& box, const LatticePoint& x);

/// Strang splitting: half-step potential, full diffusion step
/// (uniformization of kappa Laplacian, exact in h), half-step potential.
/// The diagonal factor uses the exact integral of the piecewise-constant
/// occupancy over each half step, so kappa = 0 evolution is exact and
/// gamma = inf kills every site the field touches during the half step.
PamGrid pam_solve(const TrapFieldRealization& field, const ModelParams& params, double start_time, double end_time,
                  int box_radius, double h, std::vector<double> initial, TimeOrder order,
                  const std::vector<double>& snapshot_times = {});

inline PamGrid pam_solve(const TrapFieldRealization& field, const ModelParams& params, double t, int box_radius,
                         double h, std::vector<double> initial, TimeOrder order,
                         const std::vector<double>& snapshot_times = {}) {
    return pam_solve(field, params, 0.0, t, box_radius, h, std::move(initial), order, snapshot_times);
}

/// log of the quenched survival probability: delta_0 initial mass propagated
/// in forward time order and summed over the box.
double quenched_log_survival_pde(const TrapFieldRealization& field, const ModelParams& params, double t,
                                 int box_radius, double h);

double quenched_survival_pde(const TrapFieldRealization& field, const ModelParams& params, double t, int box_radius,
                             double h);

}  // namespace trapwalk
