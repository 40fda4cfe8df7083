#include <doctest.h>

#include <cmath>

#include "trapwalk/hitting.hpp"
#include "trapwalk/kernels.hpp"
#include "trapwalk/rng.hpp"
#include "trapwalk/walk.hpp"

using namespace trapwalk;

TEST_CASE("no-hit probability matches direct simulation") {
    ModelParams p{1, 0.0, 1.3, 1.0, std::numeric_limits<double>::infinity()};
    double t = 3.0;
    HittingSolution sol = solve_hitting(t, p, 40, 1e-10);

    Rng rng = derive_stream(55, {1});
    const int n = 60000;
    int avoided = 0;
    for (int i = 0; i < n; ++i) {
        JumpTrajectory w = sample_trajectory({1}, p.rho, 1, t, rng);
        bool hit = false;
        for (const auto& pos : w.positions)
            if (pos == origin(1)) {
                hit = true;
                break;
            }
        if (!hit) ++avoided;
    }
    double freq = static_cast<double>(avoided) / n;
    double se = std::sqrt(freq * (1.0 - freq) / n);
    CHECK(std::abs(sol.value() - freq) < 3.0 * se + 1e-4);
}

TEST_CASE("certification failure reports the required radius") {
    ModelParams p{1, 0.0, 1.0, 1.0, std::numeric_limits<double>::infinity()};
    try {
        (void)solve_hitting(100.0, p, 10, 1e-10);
        CHECK(false);
    } catch (const CertificationError& e) {
        CHECK(e.suggested_radius == min_radius_for_exit_bound(1.0, 100.0, 1, 1e-10));
        CHECK(e.suggested_radius > 10);
    }
}

TEST_CASE("transient no-hit probability tends to 1/G") {
    // P_{e1}(never hit 0) = 1 - G(e1)/G(0) = 1/G(0) since G(e1) = G(0) - 1/rho.
    // The approach is from above at rate ~ 1/sqrt(t) (about +2.2% at t=400).
    ModelParams p{3, 0.0, 1.0, 1.0, std::numeric_limits<double>::infinity()};
    double limit = 1.0 / green_function(3);
    std::vector<double> gaps;
    for (double t : {100.0, 400.0, 500.0}) {
        int radius = min_radius_for_exit_bound(p.rho, t, 3, 1e-8);
        HittingSolution sol = solve_hitting(t, p, radius, 1e-8);
        for (size_t k = 1; k < sol.phi_e1.size(); ++k) CHECK(sol.phi_e1[k] <= sol.phi_e1[k - 1] + 1e-12);
        double gap = sol.value() - limit;
        CHECK(gap > 0.0);
        gaps.push_back(gap);
        if (t == 500.0) {
            // -log annealed survival / t -> nu rho / G as well (slower: the
            // averaged correction is twice the endpoint one)
            double rate = p.nu * p.rho * sol.integral_value() / t;
            CHECK(std::abs(rate / limit - 1.0) < 0.05);
        }
    }
    CHECK(gaps[1] < 0.6 * gaps[0]);       // ~ halves when t quadruples
    CHECK(gaps[2] < 0.02 * limit);        // within 2% by t = 500 (measured 1.945%)
}

TEST_CASE("killed-mass sum balances the time integral of the no-hit law") {
    ModelParams p{1, 0.0, 1.0, 1.0, std::numeric_limits<double>::infinity()};
    double t = 50.0;
    HittingSolution sol = solve_hitting(t, p, 104, 1e-10);
    double lhs = sol.sum_psi_final(52);
    double rhs = p.rho * sol.integral_value();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-3));
    CHECK_THROWS_AS((void)sol.sum_psi_final(200), std::invalid_argument);
}

TEST_CASE("final no-hit field is symmetric and within [0,1]") {
    ModelParams p{2, 0.0, 1.0, 1.0, std::numeric_limits<double>::infinity()};
    HittingSolution sol = solve_hitting(5.0, p, 30, 1e-8);
    for (int x = 0; x <= 4; ++x)
        for (int y = 0; y <= 4; ++y) {
            double v = sol.phi_final({x, y});
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            CHECK(sol.phi_final({-x, y}) == doctest::Approx(v).epsilon(1e-13));
            CHECK(sol.phi_final({y, x}) == doctest::Approx(v).epsilon(1e-13));
        }
    CHECK(sol.phi_final(origin(2)) == 0.0);
    CHECK(sol.phi_final({1, 0}) == doctest::Approx(sol.value()).epsilon(1e-13));
}

TEST_CASE("hard-trap annealed survival composes the integral") {
    ModelParams p{1, 0.0, 2.0, 1.5, std::numeric_limits<double>::infinity()};
    double t = 20.0;
    double surv = annealed_survival_infinite_gamma(t, p, 1e-10);
    int radius = min_radius_for_exit_bound(p.rho, t, 1, 1e-10);
    HittingSolution sol = solve_hitting(t, p, radius, 1e-10);
    CHECK(surv == doctest::Approx(std::exp(-p.nu * p.rho * sol.integral_value())).epsilon(1e-12));
    CHECK(annealed_survival_infinite_gamma(30.0, p) < surv);
}
