#include "trapwalk/volterra.hpp"

#include <cmath>

#include "trapwalk/kernels.hpp"
#include "trapwalk/special.hpp"

namespace trapwalk {

namespace {

struct GridSpec {
    int n;
    double h;
};

GridSpec make_grid(double t, double h) {
    if (!(t >= 0.0)) throw std::invalid_argument("volterra: t must be >= 0");
    if (!(h > 0.0)) throw std::invalid_argument("volterra: h must be > 0");
    int n = std::max<int>(1, static_cast<int>(std::llround(t / h)));
    if (t == 0.0) n = 1;
    return {n, t > 0.0 ? t / n : h};
}

void cumulative_trapezoid(PathSurvivalSolution& sol) {
    sol.integral.assign(sol.m.size(), 0.0);
    for (size_t k = 1; k < sol.m.size(); ++k)
        sol.integral[k] = sol.integral[k - 1] + 0.5 * sol.h * (sol.m[k - 1] + sol.m[k]);
}

}  // namespace

PathSurvivalSolution solve_v0(double t, double h, const ModelParams& params) {
    params.validate();
    if (params.gamma_infinite()) throw std::domain_error("solve_v0: gamma must be finite");
    auto [n, he] = make_grid(t, h);
    PathSurvivalSolution sol;
    sol.params = params;
    sol.h = he;

    std::vector<double> kern(static_cast<size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) kern[static_cast<size_t>(j)] = return_prob(j * he, params.rho, params.d);

    sol.m.assign(static_cast<size_t>(n) + 1, 1.0);
    double denom = 1.0 + 0.5 * params.gamma * he;
    for (int k = 1; k <= n; ++k) {
        double acc = 0.5 * kern[static_cast<size_t>(k)];
        const double* kb = kern.data() + k;
        const double* mb = sol.m.data();
        for (int j = 1; j < k; ++j) acc += kb[-j] * mb[j];
        sol.m[static_cast<size_t>(k)] = (1.0 - params.gamma * he * acc) / denom;
    }
    cumulative_trapezoid(sol);
    return sol;
}

PathSurvivalSolution solve_m_along_path(const WalkPath& path, double t, double h, const ModelParams& params) {
    params.validate();
    if (params.gamma_infinite()) throw std::domain_error("solve_m_along_path: gamma must be finite");
    if (path.horizon < t) throw std::invalid_argument("solve_m_along_path: path does not cover [0, t]");
    auto [n, he] = make_grid(t, h);
    PathSurvivalSolution sol;
    sol.params = params;
    sol.h = he;

    int d = params.d;
    std::vector<LatticePoint> pos(static_cast<size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) pos[static_cast<size_t>(k)] = path.position_at(std::min(k * he, t));

    int max_order = 0;
    for (int i = 0; i < d; ++i) {
        int lo = pos[0][static_cast<size_t>(i)], hi = lo;
        for (const auto& p : pos) {
            lo = std::min(lo, p[static_cast<size_t>(i)]);
            hi = std::max(hi, p[static_cast<size_t>(i)]);
        }
        max_order = std::max(max_order, hi - lo);
    }

    // Scaled Bessel table per lag: kernel(k, j) = prod_i e^{-u} I_{|dx_i|}(u)
    // with u = rho (k - j) he / d.
    std::vector<std::vector<double>> table(static_cast<size_t>(n) + 1);
    for (int lag = 0; lag <= n; ++lag)
        table[static_cast<size_t>(lag)] = bessel_i_scaled_all(max_order, params.rho * lag * he / d);

    sol.m.assign(static_cast<size_t>(n) + 1, 1.0);
    double denom = 1.0 + 0.5 * params.gamma * he;
    for (int k = 1; k <= n; ++k) {
        double acc = 0.0;
        for (int j = 0; j < k; ++j) {
            const auto& row = table[static_cast<size_t>(k - j)];
            double kern = 1.0;
            for (int i = 0; i < d; ++i)
                kern *= row[static_cast<size_t>(
                    std::abs(pos[static_cast<size_t>(k)][static_cast<size_t>(i)] -
                             pos[static_cast<size_t>(j)][static_cast<size_t>(i)]))];
            acc += (j == 0 ? 0.5 : 1.0) * kern * sol.m[static_cast<size_t>(j)];
        }
        sol.m[static_cast<size_t>(k)] = (1.0 - params.gamma * he * acc) / denom;
    }
    cumulative_trapezoid(sol);
    return sol;
}

double annealed_survival_given_path(const WalkPath& path, double t, double h, const ModelParams& params) {
    auto sol = solve_m_along_path(path, t, h, params);
    return std::exp(-params.nu * params.gamma * sol.integral_value());
}

double annealed_survival_pinned(double t, double h, const ModelParams& params) {
    auto sol = solve_v0(t, h, params);
    return std::exp(-params.nu * params.gamma * sol.integral_value());
}

AnnealedLyapunov lyapunov_annealed_pinned(const ModelParams& params, double green_tol) {
    params.validate();
    AnnealedLyapunov out;
    if (params.d <= 2) return out;  // subexponential decay, rate 0
    double g = green_function(params.d, green_tol);
    out.exponential = true;
    if (params.gamma_infinite())
        out.value = params.nu * params.rho / g;
    else
        out.value = params.nu * params.gamma * params.rho / (params.rho + params.gamma * g);
    return out;
}

}  // namespace trapwalk
