#include <doctest.h>

#include <cmath>

#include "trapwalk/special.hpp"

using namespace trapwalk;

namespace {

// power series I_n(x) = sum_k (x/2)^{n+2k} / (k! (n+k)!), usable for small x
double bessel_series(int n, double x) {
    double term = std::pow(0.5 * x, n);
    for (int j = 1; j <= n; ++j) term /= j;
    double sum = term;
    for (int k = 1; k < 200; ++k) {
        term *= 0.25 * x * x / (k * (n + k));
        sum += term;
        if (term < 1e-18 * sum) break;
    }
    return sum;
}

}  // namespace

TEST_CASE("scaled Bessel matches the power series") {
    for (int n : {0, 1, 2, 5, 8}) {
        for (double x : {0.1, 1.0, 5.0, 20.0}) {
            double want = std::exp(-x) * bessel_series(n, x);
            CHECK(bessel_i_scaled(n, x) == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("unscaled accessor is consistent with the scaled one") {
    for (double x : {0.5, 2.0, 10.0})
        CHECK(bessel_i(3, x) == doctest::Approx(std::exp(x) * bessel_i_scaled(3, x)).epsilon(1e-13));
}

TEST_CASE("three-term recurrence holds") {
    for (double x : {0.5, 3.0, 15.0, 80.0}) {
        for (int n : {1, 2, 6}) {
            double lhs = bessel_i_scaled(n - 1, x) - bessel_i_scaled(n + 1, x);
            double rhs = (2.0 * n / x) * bessel_i_scaled(n, x);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
        }
    }
}

TEST_CASE("orders decrease and batch agrees with single evaluations") {
    double x = 7.0;
    auto all = bessel_i_scaled_all(10, x);
    REQUIRE(all.size() == 11);
    for (int n = 0; n <= 10; ++n) CHECK(all[n] == doctest::Approx(bessel_i_scaled(n, x)).epsilon(1e-13));
    for (int n = 0; n < 10; ++n) CHECK(all[n] > all[n + 1]);
}

TEST_CASE("large-argument values stay finite and normalized") {
    // e^{-x} I_0(x) ~ 1/sqrt(2 pi x)
    for (double x : {1e3, 1e5, 1e7}) {
        double v = bessel_i_scaled(0, x);
        CHECK(v == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI * x)).epsilon(1e-3));
    }
}
