#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "trapwalk/kernels.hpp"
#include "trapwalk/pascal.hpp"
#include "trapwalk/volterra.hpp"

using namespace trapwalk;

namespace {

DiscretePath path_1d(std::vector<int> steps) { return DiscretePath::from_steps_1d(steps); }

const LazyWalkKernel kLazy{1, 0.5, {0.25}};

}  // namespace

TEST_CASE("hand values at small n") {
    // n = 0: only the starting site can trap, S = q
    for (double q : {0.2, 1.0}) CHECK(trapping_sum(kLazy, DiscretePath::constant(1, 0), 0, q) == doctest::Approx(q));
    // n = 1, q = 1 for the (1/2,1/4,1/4) kernel: S = 1 + 2 * 1/4 = 1.5
    CHECK(trapping_sum(kLazy, DiscretePath::constant(1, 1), 1, 1.0) == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(expected_range(kLazy, DiscretePath::constant(1, 1), 1) == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("still path minimizes the trapping sum over every path and horizon") {
    for (double q : {0.3, 1.0}) {
        for (int n = 0; n <= 4; ++n) {
            double pinned = trapping_sum(kLazy, DiscretePath::constant(1, n), n, q);
            long total = 1;
            for (int i = 0; i < n; ++i) total *= 3;
            for (long id = 0; id < total; ++id) {
                std::vector<int> steps;
                long rem = id;
                for (int i = 0; i < n; ++i) {
                    steps.push_back(static_cast<int>(rem % 3) - 1);
                    rem /= 3;
                }
                DiscretePath path = path_1d(steps);
                auto res = pascal_check(kLazy, path, n, q);
                CHECK(res.verdict);
                CHECK(res.moving >= res.pinned - 1e-12);
                CHECK(res.pinned == doctest::Approx(pinned).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("dynamic program equals brute force enumeration") {
    for (double q : {0.37, 1.0}) {
        for (auto steps : {std::vector<int>{}, {1}, {1, 1, -1}, {0, 1, 0, -1}, {1, 1, 1, 1}}) {
            int n = static_cast<int>(steps.size());
            DiscretePath path = path_1d(steps);
            CHECK(trapping_sum(kLazy, path, n, q) ==
                  doctest::Approx(brute_force_oracle(kLazy, path, n, q)).epsilon(1e-12));
        }
    }
}

TEST_CASE("brute force refuses unenumerable state spaces") {
    CHECK_THROWS_AS((void)brute_force_oracle(kLazy, DiscretePath::constant(1, 40), 40, 1.0), std::invalid_argument);
}

TEST_CASE("induction inequality holds with exact return weights") {
    for (auto steps : {std::vector<int>{1, -1, 1}, {1, 1, 0, -1}, {0, 0, 1, 1, 1}}) {
        int n = static_cast<int>(steps.size());
        auto residuals = induction_gap(kLazy, path_1d(steps), n, 1.0);
        REQUIRE(residuals.size() == static_cast<size_t>(n));
        for (double r : residuals) CHECK(r >= -1e-12);
    }
}

TEST_CASE("laziness is the real hypothesis: stay below 1/2 breaks monotonicity") {
    LazyWalkKernel eager{1, 0.2, {0.4}};
    auto mono = kernel_monotonicity_check(eager, 6);
    CHECK_FALSE(mono.time_ok);
    CHECK(mono.first_violation_step == 1);
    CHECK_THROWS_AS((void)pascal_check(eager, path_1d({1, -1}), 2, 0.5), std::domain_error);

    auto lazy_mono = kernel_monotonicity_check(kLazy, 8);
    CHECK(lazy_mono.space_ok);
    CHECK(lazy_mono.time_ok);
}

TEST_CASE("trapping probabilities out of range are rejected") {
    CHECK_THROWS_AS((void)trapping_sum(kLazy, DiscretePath::constant(1, 2), 2, 1.5), std::invalid_argument);
    CHECK_THROWS_AS((void)trapping_sum(kLazy, DiscretePath::constant(1, 2), 2, -0.1), std::invalid_argument);
}

TEST_CASE("discrete sums bridge to the continuous pinned formula") {
    // killed lazy chain with stay = p_tau(0) embeds the continuous model:
    // q = gamma t / n against nu gamma int v_0 as n grows
    ModelParams p{1, 0.0, 1.0, 1.0, 1.0};
    double t = 2.0;
    int n = 1 << 10;
    double tau = t / n;
    double stay = return_prob(tau, p.rho, 1);
    double axis = 0.5 * (1.0 - stay);
    LazyWalkKernel embedded{1, stay, {axis}};
    double q = p.gamma * tau;
    double discrete = trapping_sum(embedded, DiscretePath::constant(1, n), n, q);
    double continuous = p.gamma * solve_v0(t, t / 4096.0, p).integral_value();
    CHECK(discrete == doctest::Approx(continuous).epsilon(0.02));
}
