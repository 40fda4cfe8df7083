#include <doctest.h>

#include <cmath>

#include "trapwalk/field_stats.hpp"
#include "trapwalk/stats.hpp"

using namespace trapwalk;

TEST_CASE("regularized incomplete gamma identities") {
    for (double a : {0.5, 2.0, 7.5}) {
        for (double x : {0.1, 1.0, 5.0, 20.0}) {
            CHECK(gamma_p(a, x) + gamma_q(a, x) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(gamma_p(a, x) >= 0.0);
            CHECK(gamma_p(a, x) <= 1.0);
        }
        CHECK(gamma_p(a, 0.0) == 0.0);
        CHECK(gamma_p(a, 1e4) == doctest::Approx(1.0).epsilon(1e-12));
    }
    // a = 1: P(1, x) = 1 - e^{-x}
    CHECK(gamma_p(1.0, 2.0) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-13));
}

TEST_CASE("chi-square tail has its df = 2 closed form") {
    for (double s : {0.5, 2.0, 7.0}) CHECK(chi_square_pvalue(s, 2) == doctest::Approx(std::exp(-0.5 * s)).epsilon(1e-12));
    CHECK(chi_square_pvalue(0.0, 5) == doctest::Approx(1.0));
    CHECK(chi_square_pvalue(100.0, 3) < 1e-15);
}

TEST_CASE("slice fits accept a genuine Poisson field across seeds") {
    TrapFieldConfig base;
    base.params = ModelParams{1, 0.0, 1.0, 1.0, 1.0};
    base.obs_radius = 120;
    base.horizon = 4.0;
    base.seed = 0;
    int rejections = 0, total = 0;
    for (uint64_t seed : {1ull, 2ull, 3ull}) {
        auto fits = field_poisson_chi_square(base, {0.0, 2.0, 4.0}, 8, seed);
        REQUIRE(fits.size() == 3);
        for (const auto& f : fits) {
            ++total;
            CHECK(f.samples == 8 * 241);
            CHECK(f.df >= 2);
            CHECK(f.pvalue >= 0.0);
            CHECK(f.pvalue <= 1.0);
            if (f.pvalue < 0.01) ++rejections;
        }
    }
    CHECK(rejections <= 1);  // nine independent fits at the 1% level
    (void)total;
}

TEST_CASE("slice fit rejects a deliberately skewed intensity") {
    // doubling nu while fitting against the base intensity must reject
    TrapFieldConfig base;
    base.params = ModelParams{1, 0.0, 1.0, 2.0, 1.0};
    base.obs_radius = 120;
    base.horizon = 1.0;
    base.seed = 0;
    auto fits = field_poisson_chi_square(base, {0.0}, 8, 5, /*fit_nu=*/1.0);
    CHECK(fits[0].pvalue < 1e-6);
}

TEST_CASE("time-reversal covariance symmetry holds at pinned seeds") {
    TrapFieldConfig base;
    base.params = ModelParams{1, 0.0, 1.0, 1.0, 1.0};
    base.obs_radius = 8;
    base.horizon = 5.0;
    base.seed = 0;
    auto rev = field_reversal_covariance(base, 5.0, {0}, {3}, 3000, 1);
    CHECK(rev.n == 3000);
    CHECK(std::abs(rev.z) <= 3.0);
    CHECK(rev.forward > 0.0);
    CHECK(rev.reversed > 0.0);
}
