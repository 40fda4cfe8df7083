"""End-to-end smoke test of the python bindings (stdlib only, run by ctest)."""

import math

import trapwalk as tw


def close(a, b, tol):
    return abs(a - b) <= tol


# kernels
g3 = tw.green_function(3)
assert close(g3, 1.516386059, 1e-6)
assert close(tw.laplace_p(1.0, 1), 1.0 / math.sqrt(3.0), 1e-9)
assert close(tw.transition_prob(0.0, [0], 1.0, 1), 1.0, 0.0)
assert tw.rate_j(0.0) == 0.0

# pinned survival and its transform
p = tw.ModelParams(d=1, kappa=0.0, rho=1.0, nu=1.0, gamma=1.0)
sol = tw.solve_v0(8.0, 0.01, p)
assert sol.m[0] == 1.0
assert 0.0 < sol.value() < 1.0
assert close(tw.annealed_survival_pinned(8.0, 0.01, p), math.exp(-sol.integral_value()), 1e-12)

# annealed rate in transient dimension, hard traps as float('inf')
hard = tw.ModelParams(d=3, kappa=0.0, rho=1.0, nu=1.0, gamma=float("inf"))
assert hard.gamma_infinite()
lam = tw.lyapunov_annealed_pinned(hard)
assert lam.exponential and close(lam.value, 1.0 / g3, 1e-9)

# a quenched field: PDE vs Monte Carlo on the same realization
params = tw.ModelParams(d=1, kappa=1.0, rho=1.0, nu=1.0, gamma=1.0)
cfg = tw.TrapFieldConfig(params, obs_radius=16, horizon=3.0, seed=3)
field = tw.sample_field(cfg)
assert field.window >= cfg.obs_radius
z = tw.quenched_survival_pde(field, params, 3.0, 12, 0.02)
est = tw.quenched_survival_mc(field, params, 3.0, 8000, 7)
assert abs(z - est.mean) <= 3.0 * est.stderror + 1e-3

# determinism of the field through the seed
again = tw.sample_field(cfg)
assert again.occupancy(1.5, [2]) == field.occupancy(1.5, [2])

# out-of-window queries are hard errors
try:
    field.occupancy(2.0, [10 * field.window])
except tw.OutOfWindowError:
    pass
else:
    raise AssertionError("out-of-window occupancy must raise")

# degenerate parameters are rejected
try:
    tw.ModelParams(d=1, gamma=0.0)
except ValueError:
    pass
else:
    raise AssertionError("gamma = 0 must be rejected")

# discrete comparison against the still path
kernel = tw.LazyWalkKernel(1, 0.5, [0.25])
res = tw.pascal_check(kernel, tw.DiscretePath.from_steps_1d([1, 1, -1]), 3, 1.0)
assert res.verdict and res.margin >= -1e-12
assert close(tw.expected_range(kernel, tw.DiscretePath.constant(1, 1), 1), 1.5, 1e-12)

# sampled walk drives the path-level annealed survival
rng = tw.Rng(5)
path = tw.sample_walk(params, 4.0, rng)
surv = tw.annealed_survival_given_path(path, 4.0, 0.02, params)
pinned = tw.annealed_survival_pinned(4.0, 0.02, p)
assert 0.0 < surv <= pinned * (1.0 + 5e-3)

print("python smoke ok, version", tw.__version__)
