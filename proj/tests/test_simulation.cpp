#include <catch2/catch_amalgamated.hpp>

#include "dubins/simulation.hpp"
#include "dubins/sweep.hpp"

using namespace dubins;
using Catch::Approx;

namespace {
ScenarioConfig base(double lambda, ControllerKind k, double duration = 100.0) {
    ScenarioConfig c;
    c.waypoints = {cplx(0, 0), cplx(4000, 0), cplx(4000, -2500), cplx(0, -2500)};
    c.lambda = lambda;
    c.controller = k;
    c.duration = duration;
    c.steady_start = duration / 2;
    return c;
}
}  // namespace

TEST_CASE("nominal vehicle tracks the reference exactly") {
    for (auto k : {ControllerKind::pid, ControllerKind::adaptive, ControllerKind::adaptive_saturated}) {
        const RunResult r = run_scenario(base(1.0, k));
        REQUIRE(r.log.size() == 10001);
        for (const auto& x : r.log) {
            REQUIRE(x.e_r == cplx(0.0, 0.0));
            REQUIRE(x.e_v == cplx(0.0, 0.0));
            REQUIRE(x.theta_hat == 1.0);
            REQUIRE(x.delta_sat == 0.0);
        }
        CHECK(r.full.cross_track.mean == 0.0);
    }
}

TEST_CASE("log has one row per step plus the initial sample") {
    ScenarioConfig c = base(0.75, ControllerKind::pid, 4.0);
    const RunResult r = run_scenario(c);
    CHECK(r.log.size() == 401);
    CHECK(r.log.front().t == 0.0);
    CHECK(r.log.back().t == Approx(4.0));
    c.duration = 0.0;
    c.steady_start = 0.0;
    CHECK(run_scenario(c).log.size() == 1);
}

TEST_CASE("applied command never exceeds the turn-rate limit") {
    for (double lam : {0.75, 0.25})
        for (auto k : {ControllerKind::pid, ControllerKind::adaptive, ControllerKind::adaptive_saturated}) {
            const RunResult r = run_scenario(base(lam, k));
            for (const auto& x : r.log) {
                REQUIRE(std::abs(x.u2_sat) <= r.psi_dot_max);
                REQUIRE(x.delta_sat == x.u2_sat - x.u2);
            }
        }
}

TEST_CASE("estimates stay inside the projection box") {
    const RunResult r = run_scenario(base(0.25, ControllerKind::adaptive_saturated, 200.0));
    for (const auto& x : r.log) {
        REQUIRE(x.theta_hat >= 1.0);
        REQUIRE(x.theta_hat <= 20.0);
        REQUIRE(x.lambda_hat >= 0.05);
        REQUIRE(x.lambda_hat <= 1.0);
    }
}

TEST_CASE("pid degrades with loss of effectiveness, adaptive recovers") {
    const RunResult pid = run_scenario(base(0.5, ControllerKind::pid, 200.0));
    const RunResult ad = run_scenario(base(0.5, ControllerKind::adaptive, 200.0));
    CHECK(pid.full.cross_track.mean > 10.0);
    CHECK(ad.steady.position.mean < 0.1);
    CHECK(ad.log.back().theta_hat == Approx(2.0).margin(0.05));
}

TEST_CASE("perfect knowledge fixes the estimates") {
    ScenarioConfig c = base(0.5, ControllerKind::adaptive_saturated);
    c.perfect_knowledge = true;
    const RunResult r = run_scenario(c);
    for (const auto& x : r.log) {
        REQUIRE(x.theta_hat == 2.0);
        REQUIRE(x.lambda_hat == 0.5);
    }
    CHECK(r.steady.position.mean < 0.1);
}

TEST_CASE("Lyapunov audit is recorded every step") {
    const RunResult r = run_scenario(base(0.75, ControllerKind::adaptive));
    REQUIRE(r.decrement.size() == r.log.size());
    CHECK(r.decrement.front().qe_integral == 0.0);
    for (std::size_t i = 1; i < r.decrement.size(); ++i) REQUIRE(r.decrement[i].qe_integral >= r.decrement[i - 1].qe_integral);
    const auto rep = lyap_decrement_check(r.decrement, 1e-6);
    CHECK(rep.steps == r.log.size() - 1);
    CHECK(rep.max_imag_residue < 1e-14);
}

TEST_CASE("runs are deterministic") {
    const RunResult a = run_scenario(base(0.25, ControllerKind::adaptive_saturated));
    const RunResult b = run_scenario(base(0.25, ControllerKind::adaptive_saturated));
    REQUIRE(a.log.size() == b.log.size());
    for (std::size_t i = 0; i < a.log.size(); ++i) {
        REQUIRE(a.log[i].x == b.log[i].x);
        REQUIRE(a.log[i].lambda_hat == b.log[i].lambda_hat);
    }
    CHECK(a.config_hash == b.config_hash);
}

TEST_CASE("nearest-point cross-track") {
    ScenarioConfig c = base(0.75, ControllerKind::pid);
    const RunResult proj = run_scenario(c);
    c.cross_track = CrossTrackMode::nearest;
    const RunResult near = run_scenario(c);
    CHECK(near.full.cross_track.mean > 0.0);
    CHECK(near.full.cross_track.mean <= near.full.position.mean);
    CHECK(near.full.position.mean == proj.full.position.mean);
}

TEST_CASE("initial offset is pulled in") {
    ScenarioConfig c = base(1.0, ControllerKind::pid, 150.0);
    c.initial_position = cplx(0.0, 50.0);
    c.initial_heading_deg = 10.0;
    const RunResult r = run_scenario(c);
    CHECK(std::abs(r.log.front().e_r) == Approx(50.0));
    CHECK(std::abs(r.log.back().e_r) < 5.0);
}

TEST_CASE("sweep order and results do not depend on threading") {
    ScenarioConfig c = base(1.0, ControllerKind::pid, 20.0);
    const auto one = run_sweep(c, {0.25, 1.0, 0.5}, {ControllerKind::adaptive_saturated, ControllerKind::pid}, 1);
    const auto many = run_sweep(c, {0.5, 0.25, 1.0}, {ControllerKind::pid, ControllerKind::adaptive_saturated}, 4);
    REQUIRE(one.size() == 6);
    REQUIRE(many.size() == 6);
    CHECK(one[0].cfg.lambda == 1.0);
    CHECK(one[0].cfg.controller == ControllerKind::pid);
    CHECK(one[5].cfg.lambda == 0.25);
    CHECK(one[5].cfg.controller == ControllerKind::adaptive_saturated);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(one[i].config_hash == many[i].config_hash);
        CHECK(one[i].full.cross_track.mean == many[i].full.cross_track.mean);
    }
    // Nominal column: pid and adaptive agree.
    CHECK(std::abs(one[0].full.position.mean - one[1].full.position.mean) < 1e-9);
}

TEST_CASE("bad geometry surfaces as a configuration error") {
    ScenarioConfig c = base(1.0, ControllerKind::pid);
    c.waypoints = {cplx(0, 0), cplx(600, 0), cplx(600, -600)};
    c.closed = true;
    CHECK_THROWS_AS(run_scenario(c), ConfigError);
}
