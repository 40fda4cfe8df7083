#pragma once

#include "trapwalk/model.hpp"
#include "trapwalk/walk.hpp"

namespace trapwalk {

/// Solution of the pinned survival kernel m(t) = E exp(-gamma * local time
/// of a rate-rho trap started at the walk's endpoint, run against the
/// time-reversed walk).  m solves the second-kind Volterra equation
///   m(t) = 1 - gamma int_0^t p_{rho (t-s)}(X(t) - X(s)) m(s) ds
/// discretised by the product trapezoid rule on a uniform grid.
struct PathSurvivalSolution {
    double h = 0.0;                    // actual grid step (t / n_steps)
    std::vector<double> m;             // m(k h), k = 0..N
    std::vector<double> integral;      // int_0^{k h} m(s) ds, trapezoid
    ModelParams params;

    double value() const { return m.back(); }
    double integral_value() const { return integral.back(); }
};

/// X == 0 case: m(t) = v_0(t, 0), the annealed one-point survival kernel.
PathSurvivalSolution solve_v0(double t, double h, const ModelParams& params);

/// General deterministic path (the path must cover [0, t]).
PathSurvivalSolution solve_m_along_path(const WalkPath& path, double t, double h, const ModelParams& params);

/// E^xi exp(-gamma int_0^t xi(s, X(s)) ds) for a fixed path:
/// exp(-nu gamma int_0^t m).
double annealed_survival_given_path(const WalkPath& path, double t, double h, const ModelParams& params);

/// Annealed survival of the kappa = 0 walk: exp(-nu gamma int_0^t v_0).
double annealed_survival_pinned(double t, double h, const ModelParams& params);

/// Annealed Lyapunov exponent of the pinned (kappa = 0) problem:
/// nu gamma rho / (rho + gamma G_d(0)) in d >= 3 (nu rho / G_d(0) for
/// gamma = inf); 0 with exponential = false in d <= 2, where the decay is
/// subexponential.
struct AnnealedLyapunov {
    double value = 0.0;
    bool exponential = false;
};
AnnealedLyapunov lyapunov_annealed_pinned(const ModelParams& params, double green_tol = 1e-10);

}  // namespace trapwalk
