#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "trapwalk/kernels.hpp"
#include "trapwalk/rng.hpp"
#include "trapwalk/volterra.hpp"

using namespace trapwalk;

namespace {

WalkPath single_jump_path(double when, double horizon) {
    WalkPath p;
    p.start = {0};
    p.jump_times = {when};
    p.steps = {1};  // +e1
    p.horizon = horizon;
    p.build_positions();
    return p;
}

}  // namespace

TEST_CASE("pinned solution starts at one and decreases into (0,1]") {
    ModelParams p{1, 0.0, 1.0, 1.0, 2.0};
    auto sol = solve_v0(8.0, 0.01, p);
    CHECK(sol.m.front() == 1.0);
    for (size_t k = 1; k < sol.m.size(); ++k) {
        CHECK(sol.m[k] > 0.0);
        CHECK(sol.m[k] <= sol.m[k - 1] + 1e-14);
    }
    CHECK(sol.integral_value() > 0.0);
}

TEST_CASE("negative gamma gives m >= 1 (catalytic direction)") {
    ModelParams p{1, 0.0, 1.0, 1.0, -0.5};
    auto sol = solve_v0(4.0, 0.01, p);
    for (double v : sol.m) CHECK(v >= 1.0 - 1e-14);
}

TEST_CASE("solver converges at second order") {
    ModelParams p{1, 0.0, 1.0, 1.0, 1.0};
    double ref = solve_v0(5.0, 0.00125, p).integral_value();
    double e1 = std::abs(solve_v0(5.0, 0.02, p).integral_value() - ref);
    double e2 = std::abs(solve_v0(5.0, 0.01, p).integral_value() - ref);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("transform of the pinned solve matches the algebraic transform") {
    ModelParams p{1, 0.0, 1.0, 1.0, 1.0};
    auto sol = solve_v0(60.0, 0.005, p);
    double lambda = 1.0;
    double hat = 0.0;
    for (size_t k = 0; k + 1 < sol.m.size(); ++k) {
        double t0 = static_cast<double>(k) * sol.h;
        hat += 0.5 * sol.h * (std::exp(-lambda * t0) * sol.m[k] + std::exp(-lambda * (t0 + sol.h)) * sol.m[k + 1]);
    }
    hat += std::exp(-lambda * 60.0) * sol.m.back() / lambda;
    CHECK(hat == doctest::Approx(hat_v0(lambda, p)).epsilon(1e-4));
}

TEST_CASE("zero path reproduces the pinned solution exactly") {
    ModelParams p{1, 0.0, 1.3, 0.7, 1.1};
    WalkPath still;
    still.start = {0};
    still.horizon = 6.0;
    still.build_positions();
    auto moving = solve_m_along_path(still, 6.0, 0.02, p);
    auto pinned = solve_v0(6.0, 0.02, p);
    REQUIRE(moving.m.size() == pinned.m.size());
    for (size_t k = 0; k < moving.m.size(); ++k) CHECK(moving.m[k] == doctest::Approx(pinned.m[k]).epsilon(1e-13));
}

TEST_CASE("path solution matches a Monte Carlo meeting-time oracle") {
    // m(t) for a moving walker equals the expected survival weight of a
    // rate-rho trap released at X(t) against the time-reversed walker.
    ModelParams p{1, 0.0, 1.3, 1.0, 0.7};
    double t = 2.0;
    WalkPath path = single_jump_path(1.0, t);
    double solved = solve_m_along_path(path, t, 0.002, p).value();

    Rng rng = derive_stream(123, {77});
    const int n = 400000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        JumpTrajectory trap = sample_trajectory(path.position_at(t), p.rho, 1, t, rng);
        // overlap of trap(s) with the reversed path X(t-s)
        double overlap = 0.0;
        std::vector<double> cuts;
        for (double tau : trap.jump_times) cuts.push_back(tau);
        for (double tau : path.jump_times) cuts.push_back(t - tau);
        cuts.push_back(0.0);
        cuts.push_back(t);
        std::sort(cuts.begin(), cuts.end());
        for (size_t j = 0; j + 1 < cuts.size(); ++j) {
            double a = cuts[j], b = cuts[j + 1];
            if (b <= a) continue;
            double mid = 0.5 * (a + b);
            if (trap.position_at(mid) == path.position_at(t - mid)) overlap += b - a;
        }
        double w = std::exp(-p.gamma * overlap);
        sum += w;
        sumsq += w * w;
    }
    double mean = sum / n;
    double se = std::sqrt((sumsq / n - mean * mean) / n);
    CHECK(std::abs(solved - mean) < 3.0 * se + 1e-5);
}

TEST_CASE("annealed survival given the zero path equals the pinned value") {
    ModelParams p{1, 0.0, 1.0, 1.0, 1.0};
    WalkPath still;
    still.start = {0};
    still.horizon = 5.0;
    still.build_positions();
    CHECK(annealed_survival_given_path(still, 5.0, 0.01, p) ==
          doctest::Approx(annealed_survival_pinned(5.0, 0.01, p)).epsilon(1e-13));
}

TEST_CASE("annealed exponential rate in transient dimensions") {
    ModelParams p{3, 0.0, 1.0, 1.0, 1.0};
    auto lam = lyapunov_annealed_pinned(p);
    CHECK(lam.exponential);
    CHECK(lam.value == doctest::Approx(1.0 / (1.0 + green_function(3))).epsilon(1e-9));

    ModelParams hard = p;
    hard.gamma = std::numeric_limits<double>::infinity();
    CHECK(lyapunov_annealed_pinned(hard).value == doctest::Approx(1.0 / green_function(3)).epsilon(1e-9));

    ModelParams low{1, 0.0, 1.0, 1.0, 1.0};
    auto sub = lyapunov_annealed_pinned(low);
    CHECK_FALSE(sub.exponential);
    CHECK(sub.value == 0.0);
}

TEST_CASE("rate parameters scale the pinned solution by time change") {
    // v_0 for trap rate rho at time t equals v_0 for rate 1 at time rho t
    // when gamma is rescaled to gamma/rho.
    ModelParams fast{1, 0.0, 2.0, 1.0, 1.0};
    ModelParams slow{1, 0.0, 1.0, 1.0, 0.5};
    double a = solve_v0(3.0, 0.001, fast).value();
    double b = solve_v0(6.0, 0.001, slow).value();
    CHECK(a == doctest::Approx(b).epsilon(1e-6));
}
