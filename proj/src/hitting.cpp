#include "trapwalk/hitting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "trapwalk/kernels.hpp"

namespace trapwalk {

namespace {

uint64_t pack_orbit(const std::vector<int>& sorted_abs) {
    uint64_t key = 0;
    for (int a : sorted_abs) key = (key << 12) | static_cast<uint64_t>(a);
    return key;
}

std::vector<int> orbit_of(const LatticePoint& x) {
    std::vector<int> a(x.size());
    for (size_t i = 0; i < x.size(); ++i) a[i] = std::abs(x[i]);
    std::sort(a.begin(), a.end());
    return a;
}

double multiplicity_of(const std::vector<int>& orbit) {
    // lattice points with these absolute coordinates: permutations of the
    // multiset times a sign per nonzero coordinate
    double perms = 1.0;
    for (size_t i = 0; i < orbit.size(); ++i) perms *= static_cast<double>(i + 1);
    size_t i = 0;
    while (i < orbit.size()) {
        size_t j = i;
        double run = 1.0;
        while (j < orbit.size() && orbit[j] == orbit[i]) {
            run *= static_cast<double>(j - i + 1);
            ++j;
        }
        perms /= run;
        i = j;
    }
    int nonzero = 0;
    for (int a : orbit)
        if (a != 0) ++nonzero;
    return perms * std::pow(2.0, nonzero);
}

struct OrbitSpace {
    int d, radius;
    std::vector<std::vector<int>> reps;
    std::unordered_map<uint64_t, int32_t> index;
    std::vector<int32_t> nbr;  // 2d entries per orbit, -1 = outside box
    size_t origin = 0;

    OrbitSpace(int d_, int radius_) : d(d_), radius(radius_) {
        if (radius >= (1 << 12)) throw std::invalid_argument("solve_hitting: box radius too large");
        std::vector<int> cur(static_cast<size_t>(d), 0);
        enumerate(cur, 0, 0);
        origin = static_cast<size_t>(index.at(pack_orbit(std::vector<int>(static_cast<size_t>(d), 0))));
        nbr.assign(reps.size() * static_cast<size_t>(2 * d), -1);
        for (size_t i = 0; i < reps.size(); ++i) {
            LatticePoint x(reps[i].begin(), reps[i].end());
            for (int axis = 0; axis < d; ++axis) {
                for (int sgn = 0; sgn < 2; ++sgn) {
                    LatticePoint y = x;
                    y[static_cast<size_t>(axis)] += sgn ? 1 : -1;
                    int32_t target = -1;
                    if (supnorm(y) <= radius) target = index.at(pack_orbit(orbit_of(y)));
                    nbr[i * static_cast<size_t>(2 * d) + static_cast<size_t>(2 * axis + sgn)] = target;
                }
            }
        }
    }

    void enumerate(std::vector<int>& cur, size_t pos, int lo) {
        if (pos == cur.size()) {
            index.emplace(pack_orbit(cur), static_cast<int32_t>(reps.size()));
            reps.push_back(cur);
            return;
        }
        for (int a = lo; a <= radius; ++a) {
            cur[pos] = a;
            enumerate(cur, pos + 1, a);
        }
    }

    /// one application of the absorbed jump-chain matrix
    void apply(const std::vector<double>& in, std::vector<double>& out) const {
        const double w = 1.0 / (2.0 * d);
        const size_t deg = static_cast<size_t>(2 * d);
        for (size_t i = 0; i < in.size(); ++i) {
            double acc = 0.0;
            const int32_t* nb = nbr.data() + i * deg;
            for (size_t k = 0; k < deg; ++k)
                if (nb[k] >= 0) acc += in[static_cast<size_t>(nb[k])];
            out[i] = w * acc;
        }
        out[origin] = 0.0;
    }
};

/// phi <- exp(mu (A - I)) phi, truncating the Poisson series at eps.
void uniformization_step(const OrbitSpace& space, std::vector<double>& phi, double mu, double eps,
                         std::vector<double>& acc, std::vector<double>& tmp) {
    while (mu > 256.0) {
        uniformization_step(space, phi, mu / 2, eps / 2, acc, tmp);
        mu /= 2;
        eps /= 2;
    }
    double w = std::exp(-mu), cum = w;
    for (size_t i = 0; i < phi.size(); ++i) acc[i] = w * phi[i];
    int kmax = static_cast<int>(mu + 12.0 * std::sqrt(mu + 1.0) + 60.0);
    for (int k = 1; k <= kmax && cum < 1.0 - eps; ++k) {
        space.apply(phi, tmp);
        std::swap(phi, tmp);
        w *= mu / k;
        cum += w;
        for (size_t i = 0; i < phi.size(); ++i) acc[i] += w * phi[i];
    }
    std::swap(phi, acc);
}

}  // namespace

double HittingSolution::phi_final(const LatticePoint& y) const {
    if (static_cast<int>(y.size()) != d) throw std::invalid_argument("phi_final: dimension mismatch");
    if (supnorm(y) > box_radius) throw std::invalid_argument("phi_final: point outside the solved box");
    auto it = orbit_index.find(pack_orbit(orbit_of(y)));
    return phi_final_orbits[static_cast<size_t>(it->second)];
}

double HittingSolution::sum_psi_final(int inner_radius) const {
    if (inner_radius > box_radius) throw std::invalid_argument("sum_psi_final: inner_radius > box_radius");
    double s = 0.0;
    // the low 12 bits of the packed orbit key hold the largest |coordinate|
    for (const auto& [key, idx] : orbit_index) {
        if (static_cast<size_t>(idx) == origin_orbit) continue;
        if (static_cast<int>(key & 0xFFFu) > inner_radius) continue;
        s += orbit_multiplicity[static_cast<size_t>(idx)] * (1.0 - phi_final_orbits[static_cast<size_t>(idx)]);
    }
    return s;
}

HittingSolution solve_hitting(double t, const ModelParams& params, int box_radius, double tol) {
    params.validate();
    if (!(t >= 0.0)) throw std::invalid_argument("solve_hitting: t must be >= 0");
    if (!(tol > 0.0)) throw std::invalid_argument("solve_hitting: tol must be > 0");
    int required = std::max(1, min_radius_for_exit_bound(params.rho, t, params.d, tol));
    if (box_radius < required) {
        char tol_str[32];
        std::snprintf(tol_str, sizeof tol_str, "%g", tol);
        throw CertificationError("solve_hitting: box radius " + std::to_string(box_radius) +
                                     " cannot certify exit probability <= " + tol_str + "; need at least " +
                                     std::to_string(required),
                                 required);
    }

    OrbitSpace space(params.d, box_radius);
    HittingSolution sol;
    sol.d = params.d;
    sol.box_radius = box_radius;
    sol.exit_bound = exit_prob_bound(params.rho, t, params.d, box_radius);

    std::vector<double> phi(space.reps.size(), 1.0);
    phi[space.origin] = 0.0;
    size_t e1 = static_cast<size_t>([&] {
        std::vector<int> o(static_cast<size_t>(params.d), 0);
        o.back() = 1;
        return space.index.at(pack_orbit(o));
    }());

    int m = std::max<int>(64, std::min<int>(400, 4 * static_cast<int>(std::ceil(std::sqrt(params.rho * t + 1.0)))));
    double series_budget = 1e-12;
    sol.series_tol = series_budget;

    sol.times.push_back(0.0);
    sol.phi_e1.push_back(1.0);
    sol.integral.push_back(0.0);
    if (t > 0.0) {
        std::vector<double> acc(phi.size()), tmp(phi.size());
        double umax = std::sqrt(t), uprev = 0.0, gprev = 0.0;  // g(u) = 2 u phi(u^2)
        for (int j = 1; j <= m; ++j) {
            double u = umax * j / m;
            double s = u * u;
            double mu = params.rho * (s - uprev * uprev);
            uniformization_step(space, phi, mu, series_budget / m, acc, tmp);
            double g = 2.0 * u * phi[e1];
            sol.times.push_back(s);
            sol.phi_e1.push_back(phi[e1]);
            sol.integral.push_back(sol.integral.back() + 0.5 * (u - uprev) * (gprev + g));
            uprev = u;
            gprev = g;
        }
        sol.phi_final_orbits = phi;
    } else {
        sol.phi_final_orbits = phi;
    }

    sol.orbit_multiplicity.resize(space.reps.size());
    for (size_t i = 0; i < space.reps.size(); ++i) sol.orbit_multiplicity[i] = multiplicity_of(space.reps[i]);
    sol.orbit_index = std::move(space.index);
    sol.origin_orbit = space.origin;
    return sol;
}

double annealed_survival_infinite_gamma(double t, const ModelParams& params, double tol) {
    params.validate();
    if (!params.gamma_infinite())
        throw std::domain_error("annealed_survival_infinite_gamma: gamma must be +inf");
    int radius = std::max(1, min_radius_for_exit_bound(params.rho, t, params.d, tol));
    auto sol = solve_hitting(t, params, radius, tol);
    return std::exp(-params.nu * params.rho * sol.integral_value());
}

}  // namespace trapwalk
