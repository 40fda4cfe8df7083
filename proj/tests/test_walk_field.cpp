#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <map>

#include "trapwalk/trap_field.hpp"
#include "trapwalk/walk.hpp"

using namespace trapwalk;

TEST_CASE("trajectory bookkeeping is consistent") {
    Rng rng = derive_stream(3, {1});
    JumpTrajectory w = sample_trajectory({2, -1}, 1.7, 2, 9.0, rng);
    REQUIRE(w.positions.size() == w.jump_times.size() + 1);
    CHECK(w.position_at(0.0) == LatticePoint{2, -1});
    for (size_t i = 0; i < w.jump_times.size(); ++i) {
        REQUIRE(w.jump_times[i] <= w.horizon);
        if (i > 0) REQUIRE(w.jump_times[i] > w.jump_times[i - 1]);
        // each jump moves one step along one axis
        int dist = 0;
        for (int c : sub(w.positions[i + 1], w.positions[i])) dist += std::abs(c);
        CHECK(dist == 1);
        CHECK(w.position_at(w.jump_times[i]) == w.positions[i + 1]);
    }
    int sup = 0;
    for (const auto& pos : w.positions) sup = std::max(sup, supnorm(pos));
    CHECK(w.max_supnorm() == sup);
}

TEST_CASE("jump counts match the rate") {
    Rng rng = derive_stream(5, {2});
    double rate = 2.0, t = 6.0;
    const int n = 30000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += static_cast<double>(sample_trajectory(origin(1), rate, 1, t, rng).jump_times.size());
    CHECK(std::abs(sum / n - rate * t) < 3.0 * std::sqrt(rate * t / n));
}

TEST_CASE("field is reproducible per site and conserves traps") {
    TrapFieldConfig cfg;
    cfg.params = ModelParams{2, 0.0, 1.0, 1.5, 1.0};
    cfg.obs_radius = 5;
    cfg.horizon = 2.0;
    cfg.seed = 77;
    TrapFieldRealization f1 = sample_field(cfg);
    TrapFieldRealization f2 = sample_field(cfg);
    REQUIRE(f1.trajectories.size() == f2.trajectories.size());
    CHECK(f1.window == f2.window);

    // start counts: Poisson(nu) per site over the padded window
    double expect = cfg.params.nu * std::pow(2.0 * f1.window + 1.0, 2);
    CHECK(std::abs(static_cast<double>(f1.trajectories.size()) - expect) < 4.0 * std::sqrt(expect));

    for (double t : {0.0, 0.7, 2.0}) {
        std::map<LatticePoint, int> hist;
        for (const auto& traj : f1.trajectories) ++hist[traj.position_at(t)];
        size_t total = 0;
        for (auto& [x, c] : hist) total += static_cast<size_t>(c);
        CHECK(total == f1.trajectories.size());
        for (int x = -cfg.obs_radius; x <= cfg.obs_radius; ++x)
            for (int y = -cfg.obs_radius; y <= cfg.obs_radius; ++y) {
                LatticePoint p{x, y};
                int want = hist.count(p) ? hist[p] : 0;
                CHECK(f1.occupancy(t, p) == want);
            }
    }
}

TEST_CASE("enlarging the window or horizon extends the field without disturbing it") {
    ModelParams params{1, 1.0, 1.0, 1.0, 1.0};
    TrapFieldConfig small;
    small.params = params;
    small.obs_radius = 12;
    small.horizon = 3.0;
    small.seed = 91;
    TrapFieldConfig big = small;
    big.obs_radius = 20;
    big.horizon = 4.5;

    TrapFieldRealization fs = sample_field(small);
    TrapFieldRealization fb = sample_field(big);
    CHECK(fb.trajectories.size() > fs.trajectories.size());
    for (double t : {0.0, 1.3, 3.0})
        for (int x = -12; x <= 12; ++x) CHECK(fs.occupancy(t, {x}) == fb.occupancy(t, {x}));
}

TEST_CASE("queries outside the certified window are hard errors") {
    TrapFieldConfig cfg;
    cfg.params = ModelParams{1, 0.0, 1.0, 1.0, 1.0};
    cfg.obs_radius = 4;
    cfg.horizon = 1.0;
    cfg.seed = 1;
    TrapFieldRealization f = sample_field(cfg);
    CHECK_THROWS_AS((void)f.occupancy(0.5, {5}), OutOfWindowError);
    CHECK_THROWS_AS((void)f.occupancy(1.5, {0}), OutOfWindowError);
    CHECK_NOTHROW((void)f.occupancy(1.0, {4}));
}

TEST_CASE("occupancy integral along a path matches a direct Riemann check") {
    TrapFieldConfig cfg;
    cfg.params = ModelParams{1, 0.0, 2.0, 2.0, 1.0};
    cfg.obs_radius = 6;
    cfg.horizon = 3.0;
    cfg.seed = 13;
    TrapFieldRealization f = sample_field(cfg);

    Rng rng = derive_stream(14, {0});
    WalkPath path = sample_trajectory(origin(1), 1.0, 1, 3.0, rng);
    if (path.max_supnorm() <= 6) {
        double exact = f.integrate_along_path(path, 0.0, 3.0);
        double riemann = 0.0;
        const int steps = 30000;
        double dt = 3.0 / steps;
        for (int i = 0; i < steps; ++i) {
            double t = (i + 0.5) * dt;
            riemann += dt * f.occupancy(t, path.position_at(t));
        }
        CHECK(exact == doctest::Approx(riemann).epsilon(2e-3));
    }
}

TEST_CASE("window radius grows with horizon and shrinking epsilon") {
    ModelParams params{1, 0.0, 1.0, 1.0, 1.0};
    int w1 = window_radius(params, 10, 1.0, 1e-8);
    int w2 = window_radius(params, 10, 5.0, 1e-8);
    int w3 = window_radius(params, 10, 5.0, 1e-12);
    CHECK(w1 >= 10);
    CHECK(w2 > w1);
    CHECK(w3 >= w2);
}

TEST_CASE("serialization round-trips the exact realization") {
    TrapFieldConfig cfg;
    cfg.params = ModelParams{2, 0.5, 1.5, 0.8, 2.0};
    cfg.obs_radius = 3;
    cfg.horizon = 1.5;
    cfg.seed = 2024;
    TrapFieldRealization f = sample_field(cfg);

    std::string path = "field_roundtrip_test.json";
    save_field(f, path);
    TrapFieldRealization g = load_field(path);
    std::remove(path.c_str());

    REQUIRE(g.trajectories.size() == f.trajectories.size());
    CHECK(g.window == f.window);
    for (double t : {0.0, 0.9, 1.5})
        for (int x = -3; x <= 3; ++x)
            for (int y = -3; y <= 3; ++y) CHECK(g.occupancy(t, {x, y}) == f.occupancy(t, {x, y}));
}
