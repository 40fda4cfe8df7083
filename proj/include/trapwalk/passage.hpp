#pragma once

#include <vector>

#include "trapwalk/pam.hpp"
#include "trapwalk/trap_field.hpp"
#include "trapwalk/volterra.hpp"

namespace trapwalk {

/// Point-to-point passage weight a(s,t;x,y) = -log u(s,t;x,y), where u is the
/// survival-weighted transition density of the walk through the trap field.
/// Computed from a delta start at x evolved forward from s to t on an
/// absorbing box, so the reported value is an upper bound whose slack is
/// controlled by exit_bound.
struct PassageSample {
    double s = 0.0, t = 0.0;
    LatticePoint x, y;
    double value = 0.0;  // -log u; +inf when the mass at y is exactly zero
    bool finite = true;
    double exit_bound = 0.0;        // certified absorbing-boundary loss
    double solver_tolerance = 0.0;  // rounding-scale slack for composition identities
    uint64_t field_seed = 0;
};

PassageSample passage(const TrapFieldRealization& field, const ModelParams& params, double s, double t,
                      const LatticePoint& x, const LatticePoint& y, int box_radius, double h);

/// Check of a(s,t;x,z) <= a(s,r;x,y) + a(r,t;y,z). The three solves share
/// the step grid, so the inequality holds for the discrete scheme itself up
/// to rounding.
struct TriangleInstance {
    double s = 0.0, r = 0.0, t = 0.0;
    LatticePoint x, y, z;
    double direct = 0.0, via = 0.0;
    double margin = 0.0;     // via - direct, >= 0 up to rounding
    double tolerance = 0.0;  // max solver_tolerance of the three legs
};

/// Single instance; requires s <= r <= t, all three grid-aligned with h.
TriangleInstance triangle_margin(const TrapFieldRealization& field, const ModelParams& params, double s, double r,
                                 double t, const LatticePoint& x, const LatticePoint& y, const LatticePoint& z,
                                 int box_radius, double h);

struct TriangleCheckResult {
    std::vector<TriangleInstance> instances;
    double min_margin = 0.0;
    bool verdict = false;
};

TriangleCheckResult triangle_check(const TrapFieldRealization& field, const ModelParams& params, double t_max,
                                   int box_radius, int point_radius, double h, int n_instances, uint64_t seed);

/// Radial profile of the passage weight from the origin along the first
/// axis: alpha(v) = -log u(0,t;0,round(v t) e1) / t at the requested speeds,
/// from a single delta-start solve, plus symmetry and midpoint convexity
/// diagnostics over the whole covered integer range.
struct ShapeProfile {
    double t = 0.0;
    double h = 0.0;
    int box_radius = 0;
    double exit_bound = 0.0;
    std::vector<double> speeds;  // as requested
    std::vector<double> alpha;   // +inf where the mass is exactly zero
    double max_symmetry_residual = 0.0;   // max_k |alpha at +k vs -k|
    double max_convexity_residual = 0.0;  // max_k positive part of midpoint violation
};

ShapeProfile shape_profile(const TrapFieldRealization& field, const ModelParams& params, double t,
                           const std::vector<double>& speeds, int box_radius, double h);

/// For a motionless walker the annealed weight a(t) = -log E[Z](t) =
/// nu*gamma*Int_0^t v0(s,0) ds is subadditive: a(t1+t2) <= a(t1)+a(t2).
/// Checked on a grid of pairs from a single cumulative solve.
struct SubadditivityRow {
    double t1 = 0.0, t2 = 0.0;
    double lhs = 0.0, rhs = 0.0;
    double margin = 0.0;  // rhs - lhs
};

struct SubadditivityResult {
    std::vector<SubadditivityRow> rows;
    double min_margin = 0.0;
    bool verdict = false;
};

SubadditivityResult subadditivity_annealed_check(const ModelParams& params, const std::vector<double>& times,
                                                 double h);

}  // namespace trapwalk
