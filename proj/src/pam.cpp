#include "trapwalk/pam.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "trapwalk/kernels.hpp"

namespace trapwalk {

namespace {

/// Piecewise-constant occupancy of the box as a function of solver time,
/// with exact interval integrals.  For reversed order the trap jumps are
/// mirrored (tau = start + end - sigma) with the jump direction swapped.
struct PotentialCursor {
    Box box;
    std::vector<double> evt_time;
    std::vector<int32_t> evt_site;
    std::vector<int8_t> evt_delta;
    std::vector<int32_t> occ;
    std::vector<double> since;
    size_t ptr = 0;
    double cur = 0.0;

    PotentialCursor(const TrapFieldRealization& field, const Box& b, double s0, double s1, TimeOrder order)
        : box(b) {
        occ.assign(box.size(), 0);
        since.assign(box.size(), s0);
        cur = s0;
        std::vector<std::tuple<double, int32_t, int8_t>> evts;
        double init_query = order == TimeOrder::forward ? s0 : s1;
        for (const auto& traj : field.trajectories) {
            const auto& p0 = traj.position_at(init_query);
            if (box.contains(p0)) occ[box.index(p0)]++;
            for (size_t k = 0; k < traj.jump_times.size(); ++k) {
                double tau = traj.jump_times[k];
                if (tau <= s0 || tau > s1) continue;
                const auto& before = traj.positions[k];
                const auto& after = traj.positions[k + 1];
                if (order == TimeOrder::forward) {
                    if (box.contains(before)) evts.emplace_back(tau, static_cast<int32_t>(box.index(before)), -1);
                    if (box.contains(after)) evts.emplace_back(tau, static_cast<int32_t>(box.index(after)), +1);
                } else {
                    double sigma = s0 + s1 - tau;
                    if (box.contains(after)) evts.emplace_back(sigma, static_cast<int32_t>(box.index(after)), -1);
                    if (box.contains(before)) evts.emplace_back(sigma, static_cast<int32_t>(box.index(before)), +1);
                }
            }
        }
        std::sort(evts.begin(), evts.end(),
                  [](const auto& a, const auto& b) { return std::get<0>(a) < std::get<0>(b); });
        evt_time.reserve(evts.size());
        evt_site.reserve(evts.size());
        evt_delta.reserve(evts.size());
        for (const auto& [t, s, dl] : evts) {
            evt_time.push_back(t);
            evt_site.push_back(s);
            evt_delta.push_back(dl);
        }
    }

    /// Advance to `to`, adding the exact per-site occupancy integral over
    /// (cur, to] into acc (acc must be zeroed by the caller).
    void advance_accumulate(double to, std::vector<double>& acc) {
        while (ptr < evt_time.size() && evt_time[ptr] <= to) {
            int32_t s = evt_site[ptr];
            double from = std::max(since[static_cast<size_t>(s)], cur);
            acc[static_cast<size_t>(s)] += occ[static_cast<size_t>(s)] * (evt_time[ptr] - from);
            since[static_cast<size_t>(s)] = evt_time[ptr];
            occ[static_cast<size_t>(s)] += evt_delta[ptr];
            ++ptr;
        }
        for (size_t s = 0; s < occ.size(); ++s) {
            if (occ[s] != 0) acc[s] += occ[s] * (to - std::max(since[s], cur));
        }
        cur = to;
    }
};

struct BoxLaplacian {
    int deg;
    std::vector<int32_t> nbr;

    explicit BoxLaplacian(const Box& box) : deg(2 * box.d) {
        nbr.assign(box.size() * static_cast<size_t>(deg), -1);
        for (size_t i = 0; i < box.size(); ++i) {
            LatticePoint x = box.point(i);
            for (int dir = 0; dir < deg; ++dir) {
                LatticePoint y = x;
                apply_step(y, dir);
                if (box.contains(y)) nbr[i * static_cast<size_t>(deg) + static_cast<size_t>(dir)] =
                    static_cast<int32_t>(box.index(y));
            }
        }
    }

    void apply(const std::vector<double>& in, std::vector<double>& out) const {
        const double w = 1.0 / deg;
        for (size_t i = 0; i < in.size(); ++i) {
            double a = 0.0;
            const int32_t* nb = nbr.data() + i * static_cast<size_t>(deg);
            for (int k = 0; k < deg; ++k)
                if (nb[k] >= 0) a += in[static_cast<size_t>(nb[k])];
            out[i] = w * a;
        }
    }
};

/// u <- exp(mu (A - I)) u with absorbing boundary, Poisson tail below eps.
void diffuse(const BoxLaplacian& lap, std::vector<double>& u, double mu, double eps, std::vector<double>& acc,
             std::vector<double>& tmp) {
    if (mu == 0.0) return;
    double w = std::exp(-mu), cum = w;
    for (size_t i = 0; i < u.size(); ++i) acc[i] = w * u[i];
    int kmax = static_cast<int>(mu + 12.0 * std::sqrt(mu + 1.0) + 60.0);
    for (int k = 1; k <= kmax && cum < 1.0 - eps; ++k) {
        lap.apply(u, tmp);
        std::swap(u, tmp);
        w *= mu / k;
        cum += w;
        for (size_t i = 0; i < u.size(); ++i) acc[i] += w * u[i];
    }
    std::swap(u, acc);
}

}  // namespace

double PamGrid::log_total_mass() const {
    double s = std::accumulate(values.begin(), values.end(), 0.0);
    if (s <= 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(s) + log_offset;
}

std::vector<double> initial_ones(const Box& box) { return std::vector<double>(box.size(), 1.0); }

std::vector<double> initial_delta(const Box& box, const LatticePoint& x) {
    std::vector<double> u(box.size(), 0.0);
    u[box.index(x)] = 1.0;
    return u;
}

PamGrid pam_solve(const TrapFieldRealization& field, const ModelParams& params, double start_time, double end_time,
                  int box_radius, double h, std::vector<double> initial, TimeOrder order,
                  const std::vector<double>& snapshot_times) {
    params.validate();
    if (!(start_time >= 0.0) || !(end_time >= start_time))
        throw std::invalid_argument("pam_solve: need 0 <= start_time <= end_time");
    if (end_time > field.config.horizon) throw OutOfWindowError("pam_solve: end_time beyond the field horizon");
    if (box_radius > field.config.obs_radius)
        throw OutOfWindowError("pam_solve: solver box exceeds the certified observation box");
    if (!(h > 0.0)) throw std::invalid_argument("pam_solve: h must be > 0");

    PamGrid grid;
    grid.box = Box(params.d, box_radius);
    grid.start_time = start_time;
    grid.end_time = end_time;
    grid.order = order;
    if (initial.size() != grid.box.size()) throw std::invalid_argument("pam_solve: initial data size mismatch");
    grid.exit_bound = exit_prob_bound(params.kappa, end_time - start_time, params.d, box_radius);

    double span = end_time - start_time;
    int n = span > 0.0 ? std::max<int>(1, static_cast<int>(std::llround(span / h))) : 0;
    grid.h = n > 0 ? span / n : h;

    PotentialCursor cursor(field, grid.box, start_time, end_time, order);
    BoxLaplacian lap(grid.box);
    std::vector<double> u = std::move(initial);
    std::vector<double> acc(u.size()), tmp(u.size()), vint(u.size());
    const bool hard = params.gamma_infinite();
    const double series_eps = 1e-14;

    auto half_potential = [&](double to) {
        std::fill(vint.begin(), vint.end(), 0.0);
        cursor.advance_accumulate(to, vint);
        if (hard) {
            for (size_t i = 0; i < u.size(); ++i)
                if (vint[i] > 0.0) u[i] = 0.0;
        } else {
            for (size_t i = 0; i < u.size(); ++i)
                if (vint[i] != 0.0) u[i] *= std::exp(-params.gamma * vint[i]);
        }
    };

    size_t next_snap = 0;
    std::vector<double> snaps = snapshot_times;
    std::sort(snaps.begin(), snaps.end());

    for (int k = 0; k < n; ++k) {
        double s_lo = start_time + span * k / n;
        double s_hi = start_time + span * (k + 1) / n;
        double s_mid = 0.5 * (s_lo + s_hi);
        half_potential(s_mid);
        diffuse(lap, u, params.kappa * (s_hi - s_lo), series_eps, acc, tmp);
        half_potential(s_hi);
        double peak = 0.0;
        for (double v : u) peak = std::max(peak, v);
        if (peak > 0.0 && peak < 1e-250) {
            for (auto& v : u) v *= 1e250;
            grid.log_offset -= std::log(1e250);
        }
        while (next_snap < snaps.size() && snaps[next_snap] <= s_hi + 1e-12 * std::max(1.0, s_hi)) {
            grid.snapshots.push_back({s_hi, u, grid.log_offset});
            ++next_snap;
        }
    }

    grid.values = std::move(u);
    return grid;
}

double quenched_log_survival_pde(const TrapFieldRealization& field, const ModelParams& params, double t,
                                 int box_radius, double h) {
    auto grid = pam_solve(field, params, 0.0, t, box_radius, h, initial_delta(Box(params.d, box_radius), origin(params.d)),
                          TimeOrder::forward);
    return grid.log_total_mass();
}

double quenched_survival_pde(const TrapFieldRealization& field, const ModelParams& params, double t, int box_radius,
                             double h) {
    return std::exp(quenched_log_survival_pde(field, params, t, box_radius, h));
}

}  // namespace trapwalk
