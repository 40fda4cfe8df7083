#pragma once

#include "trapwalk/model.hpp"

namespace trapwalk {

/// Transition probability p_t(x) of the continuous-time simple random walk
/// on Z^d with total jump rate `rate` (each jump uniform over the 2d unit
/// steps).  Coordinates are independent rate/d one-dimensional walks, so
/// p_t(x) factorises into scaled Bessel terms.  rate = 0 degenerates to the
/// Kronecker delta.
double transition_prob(double t, const LatticePoint& x, double rate, int d);

/// p_t(0) for the same walk.
double return_prob(double t, double rate, int d);

/// Green function G_d(0) = int_0^inf p_t(0) dt of the rate-1 walk, d >= 3.
/// Deterministic quadrature on [0, T*] plus an analytic tail correction;
/// T* is chosen so the certified tail error is below tol/2.
double green_function(int d, double tol = 1e-10);

/// Laplace transform int_0^inf e^{-lambda t} p_t(0) dt of the rate-1 walk.
/// Requires lambda > 0 (the integral diverges at 0 for d <= 2; for d >= 3
/// the lambda = 0 value is green_function).
double laplace_p(double lambda, int d);

/// Laplace transform of t -> v_0(t, 0):  (1/lambda) rho / (rho + gamma
/// phat(lambda / rho)).  Requires finite gamma.
double hat_v0(double lambda, const ModelParams& params);

/// One-dimensional large-deviation rate j(y) = y asinh(y) - sqrt(y^2+1) + 1
/// of the rate-1 walk.  Even and convex with j(0) = 0.
double rate_j(double y);

/// Large-deviation rate of the rate-kappa walk on Z^d at velocity v:
/// J(v) = sum_i (kappa/d) j(d v_i / kappa).  kappa = 0 gives +inf off v = 0.
double rate_function_J(const std::vector<double>& v, double kappa, int d);

/// Sharp local-limit approximation of p_t(x) for the rate-kappa walk:
/// exp(-J(x/t) t) / ((2 pi t)^{d/2} prod_i (x_i^2/t^2 + kappa^2/d^2)^{1/4}).
double lclt_approx(double t, const LatticePoint& x, double kappa, int d);

/// Upper bound on P(sup_{s <= t} |X(s)|_inf > R) for the rate `rate` walk
/// (per-coordinate reflection + Chernoff with the rate function j).
double exit_prob_bound(double rate, double t, int d, int R);

/// Smallest radius whose exit bound is <= eps.
int min_radius_for_exit_bound(double rate, double t, int d, double eps);

/// Upper bound on the probability that a Poisson(mean) count is >= k.
double poisson_tail_bound(double mean, int k);

}  // namespace trapwalk
