#include <doctest.h>

#include <cmath>

#include "trapwalk/mc.hpp"
#include "trapwalk/pam.hpp"
#include "trapwalk/volterra.hpp"

using namespace trapwalk;

TEST_CASE("quenched sampling agrees with the lattice solver on a shared field") {
    TrapFieldConfig cfg;
    cfg.params = ModelParams{1, 1.0, 1.0, 1.0, 1.0};
    cfg.obs_radius = 30;
    cfg.horizon = 5.0;
    cfg.seed = 3;
    TrapFieldRealization field = sample_field(cfg);

    double t = 5.0;
    double pde = quenched_survival_pde(field, cfg.params, t, 25, 0.02);
    McEstimate mc = quenched_survival_mc(field, cfg.params, t, 20000, 9);
    CHECK(mc.excluded == 0);
    CHECK(std::abs(pde - mc.mean) < 3.0 * mc.stderror);
}

TEST_CASE("sampling is deterministic in the seed") {
    TrapFieldConfig cfg;
    cfg.params = ModelParams{1, 1.0, 1.0, 1.0, 1.0};
    cfg.obs_radius = 20;
    cfg.horizon = 2.0;
    cfg.seed = 4;
    TrapFieldRealization field = sample_field(cfg);
    McEstimate a = quenched_survival_mc(field, cfg.params, 2.0, 2000, 42);
    McEstimate b = quenched_survival_mc(field, cfg.params, 2.0, 2000, 42);
    McEstimate c = quenched_survival_mc(field, cfg.params, 2.0, 2000, 43);
    CHECK(a.mean == b.mean);
    CHECK(a.stderror == b.stderror);
    CHECK(a.mean != c.mean);
}

TEST_CASE("paths leaving a too-small observation box trip the exclusion guard") {
    TrapFieldConfig cfg;
    cfg.params = ModelParams{1, 1.0, 1.0, 1.0, 1.0};
    cfg.obs_radius = 2;
    cfg.horizon = 20.0;
    cfg.seed = 5;
    TrapFieldRealization field = sample_field(cfg);
    CHECK_THROWS_AS((void)quenched_survival_mc(field, cfg.params, 20.0, 500, 7), CertificationError);
}

TEST_CASE("annealed sampling matches the exact pinned value for kappa = 0") {
    ModelParams p{1, 0.0, 1.0, 1.0, 1.0};
    double t = 5.0;
    McEstimate est = annealed_survival_mc(p, t, 4000, 1, 11);
    double exact = annealed_survival_pinned(t, 0.005, p);
    CHECK(std::abs(est.mean - exact) < 3.0 * est.stderror);
}

TEST_CASE("annealed sampling is worker-count invariant") {
    ModelParams p{1, 1.0, 1.0, 1.0, 1.0};
    McEstimate one = annealed_survival_mc(p, 3.0, 300, 4, 13, 1e-8, 1);
    McEstimate four = annealed_survival_mc(p, 3.0, 300, 4, 13, 1e-8, 4);
    CHECK(one.mean == four.mean);
    CHECK(one.stderror == four.stderror);
}

TEST_CASE("moving walker survives no better than the pinned one on average") {
    // annealed Monte Carlo with kappa > 0 stays below the kappa = 0 value
    ModelParams p{1, 1.0, 1.0, 1.0, 1.0};
    double t = 6.0;
    McEstimate est = annealed_survival_mc(p, t, 4000, 2, 17);
    double pinned = annealed_survival_pinned(t, 0.005, p);
    CHECK(est.mean <= pinned + 3.0 * est.stderror);
}

TEST_CASE("quenched decay-rate rows respect the coupling envelope") {
    ModelParams p{1, 1.0, 1.0, 1.0, 1.0};
    auto rows = lyapunov_quenched_estimate(p, {5.0, 15.0}, 8, 19, 0.02);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r.envelope == doctest::Approx(2.0));
        CHECK(r.estimate > 0.0);
        CHECK(r.estimate <= r.envelope + 3.0 * r.stderror);
        CHECK(r.replicates == 8);
    }
}
