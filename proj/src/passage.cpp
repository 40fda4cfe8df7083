#include "trapwalk/passage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "trapwalk/rng.hpp"

namespace trapwalk {

namespace {

double neg_log_mass(const PamGrid& grid, const LatticePoint& y) {
    double v = grid.value_at(y);
    if (v <= 0.0) return std::numeric_limits<double>::infinity();
    return -(std::log(v) + grid.log_offset);
}

}  // namespace

PassageSample passage(const TrapFieldRealization& field, const ModelParams& params, double s, double t,
                      const LatticePoint& x, const LatticePoint& y, int box_radius, double h) {
    if (!(s <= t)) throw std::invalid_argument("passage: need s <= t");
    PamGrid grid = pam_solve(field, params, s, t, box_radius, h, initial_delta(Box{params.d, box_radius}, x),
                             TimeOrder::forward);
    PassageSample out;
    out.s = s;
    out.t = t;
    out.x = x;
    out.y = y;
    out.exit_bound = grid.exit_bound;
    out.field_seed = field.config.seed;
    double a = neg_log_mass(grid, y);
    out.finite = std::isfinite(a);
    out.value = a;
    out.solver_tolerance = out.finite ? 1e-10 * std::max(1.0, std::abs(a)) : 0.0;
    return out;
}

TriangleInstance triangle_margin(const TrapFieldRealization& field, const ModelParams& params, double s, double r,
                                 double t, const LatticePoint& x, const LatticePoint& y, const LatticePoint& z,
                                 int box_radius, double h) {
    if (!(s <= r && r <= t)) throw std::invalid_argument("triangle_margin: need s <= r <= t");
    TriangleInstance ti;
    ti.s = s;
    ti.r = r;
    ti.t = t;
    ti.x = x;
    ti.y = y;
    ti.z = z;
    PassageSample direct = passage(field, params, s, t, x, z, box_radius, h);
    PassageSample leg1 = passage(field, params, s, r, x, y, box_radius, h);
    PassageSample leg2 = passage(field, params, r, t, y, z, box_radius, h);
    ti.direct = direct.value;
    ti.via = leg1.value + leg2.value;
    ti.tolerance = std::max({direct.solver_tolerance, leg1.solver_tolerance, leg2.solver_tolerance, 1e-12});
    if (std::isinf(ti.via) && std::isinf(ti.direct))
        ti.margin = 0.0;
    else
        ti.margin = ti.via - ti.direct;
    return ti;
}

TriangleCheckResult triangle_check(const TrapFieldRealization& field, const ModelParams& params, double t_max,
                                   int box_radius, int point_radius, double h, int n_instances, uint64_t seed) {
    if (point_radius > box_radius) throw std::invalid_argument("triangle_check: point_radius > box_radius");
    long n_steps = std::lround(t_max / h);
    if (n_steps < 2) throw std::invalid_argument("triangle_check: need at least two steps in [0, t_max]");

    Rng rng = derive_stream(seed, {40});
    auto draw_point = [&](LatticePoint& p) {
        p = origin(params.d);
        for (int i = 0; i < params.d; ++i)
            p[static_cast<size_t>(i)] = static_cast<int>(rng.uniform_int(2 * point_radius + 1)) - point_radius;
    };

    TriangleCheckResult res;
    res.min_margin = std::numeric_limits<double>::infinity();
    for (int inst = 0; inst < n_instances; ++inst) {
        // step indices i0 < i1 < i2 so all three solves share grid points
        long i0 = static_cast<long>(rng.uniform_int(static_cast<uint64_t>(n_steps - 1)));
        long i1 = i0 + 1 + static_cast<long>(rng.uniform_int(static_cast<uint64_t>(n_steps - i0 - 1)));
        long i2 = i1 + 1 + static_cast<long>(rng.uniform_int(static_cast<uint64_t>(n_steps - i1)));
        i2 = std::min(i2, n_steps);

        LatticePoint x, y, z;
        draw_point(x);
        draw_point(y);
        draw_point(z);
        TriangleInstance ti = triangle_margin(field, params, h * static_cast<double>(i0), h * static_cast<double>(i1),
                                              h * static_cast<double>(i2), x, y, z, box_radius, h);
        res.min_margin = std::min(res.min_margin, ti.margin);
        res.instances.push_back(std::move(ti));
    }
    res.verdict = true;
    for (const auto& ti : res.instances)
        if (!(ti.margin >= -5.0 * ti.tolerance)) res.verdict = false;
    return res;
}

ShapeProfile shape_profile(const TrapFieldRealization& field, const ModelParams& params, double t,
                           const std::vector<double>& speeds, int box_radius, double h) {
    int k_max = 0;
    for (double v : speeds) k_max = std::max(k_max, static_cast<int>(std::abs(std::llround(v * t))));
    if (k_max > box_radius) throw std::invalid_argument("shape_profile: a requested speed leaves the box");
    Box box{params.d, box_radius};
    PamGrid grid = pam_solve(field, params, 0.0, t, box_radius, h, initial_delta(box, origin(params.d)),
                             TimeOrder::forward);

    ShapeProfile out;
    out.t = t;
    out.h = h;
    out.box_radius = box_radius;
    out.exit_bound = grid.exit_bound;

    auto axis_value = [&](int k) {
        LatticePoint p = origin(params.d);
        p[0] = k;
        return neg_log_mass(grid, p) / t;
    };

    out.speeds = speeds;
    for (double v : speeds) out.alpha.push_back(axis_value(static_cast<int>(std::llround(v * t))));
    for (int k = 1; k <= k_max; ++k) {
        double fwd = axis_value(k), bwd = axis_value(-k);
        if (std::isfinite(fwd) && std::isfinite(bwd))
            out.max_symmetry_residual = std::max(out.max_symmetry_residual, std::abs(fwd - bwd));
    }
    for (int k = -k_max + 1; k + 1 <= k_max; ++k) {
        double a = axis_value(k - 1), b = axis_value(k), c = axis_value(k + 1);
        if (std::isfinite(a) && std::isfinite(b) && std::isfinite(c))
            out.max_convexity_residual = std::max(out.max_convexity_residual, b - 0.5 * (a + c));
    }
    return out;
}

SubadditivityResult subadditivity_annealed_check(const ModelParams& params, const std::vector<double>& times,
                                                 double h) {
    if (params.kappa != 0.0)
        throw std::invalid_argument("subadditivity_annealed_check: pinned identity needs kappa = 0");
    if (times.empty()) throw std::invalid_argument("subadditivity_annealed_check: empty time grid");
    double t_top = 2.0 * *std::max_element(times.begin(), times.end());
    PathSurvivalSolution sol = solve_v0(t_top, h, params);

    auto weight_at = [&](double t) {
        size_t idx = static_cast<size_t>(std::llround(t / (t_top / static_cast<double>(sol.integral.size() - 1))));
        return params.nu * params.gamma * sol.integral[std::min(idx, sol.integral.size() - 1)];
    };

    SubadditivityResult res;
    res.min_margin = std::numeric_limits<double>::infinity();
    for (double t1 : times) {
        for (double t2 : times) {
            SubadditivityRow row;
            row.t1 = t1;
            row.t2 = t2;
            row.lhs = weight_at(t1 + t2);
            row.rhs = weight_at(t1) + weight_at(t2);
            row.margin = row.rhs - row.lhs;
            res.min_margin = std::min(res.min_margin, row.margin);
            res.rows.push_back(row);
        }
    }
    res.verdict = res.min_margin >= -1e-10 * std::max(1.0, std::abs(res.rows.back().rhs));
    return res;
}

}  // namespace trapwalk
