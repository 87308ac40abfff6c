#include <catch2/catch_amalgamated.hpp>

#include "dubins/scenario.hpp"

using namespace dubins;
using Catch::Approx;

namespace {
const char* kRect = R"(
# comment
[path]
waypoints = 0,0; 4000,0; 4000,-2500; 0,-2500
closed = true
[vehicle]
lambda = 0.5
[controller]
type = pid
Q = 1, 1, 1
)";
}

TEST_CASE("parse a sectioned config with defaults") {
    const ScenarioConfig c = parse_config(std::string(kRect));
    REQUIRE(c.waypoints.size() == 4);
    CHECK(c.waypoints[2] == cplx(4000, -2500));
    CHECK(c.closed);
    CHECK(c.lambda == 0.5);
    CHECK(c.controller == ControllerKind::pid);
    CHECK(c.Q == Mat3::Identity());
    CHECK(c.V_a == 60.0);
    CHECK(c.R_min == 134.2);
    CHECK(c.dt == 0.01);
    CHECK(c.duration == 400.0);
    CHECK_NOTHROW(validate(c));
    CHECK(step_count(c) == 40000);
}

TEST_CASE("full Q matrix form") {
    const auto c = parse_config(std::string("[path]\nwaypoints=0,0;5000,0\nclosed=false\n[controller]\nQ=2,0.5,0, 0.5,1,0, 0,0,1\n"));
    CHECK(c.Q(0, 1) == 0.5);
    CHECK(c.Q(1, 0) == 0.5);
    CHECK_NOTHROW(validate(c));
}

TEST_CASE("config errors name the problem") {
    auto bad = [](const std::string& extra) {
        return parse_config("[path]\nwaypoints = 0,0; 4000,0; 4000,-2500; 0,-2500\n" + extra);
    };
    CHECK_THROWS_WITH(bad("[vehicle]\nspeed = 3\n"), Catch::Matchers::ContainsSubstring("unknown key 'speed'"));
    CHECK_THROWS_WITH(bad("[plane]\nx = 1\n"), Catch::Matchers::ContainsSubstring("unknown section"));
    CHECK_THROWS_WITH(bad("[vehicle]\nlambda = fast\n"), Catch::Matchers::ContainsSubstring("not a number"));
    CHECK_THROWS_WITH(bad("[controller]\ntype = lqr\n"), Catch::Matchers::ContainsSubstring("unknown controller"));
    CHECK_THROWS_AS(bad("[controller]\nQ = 1, 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(std::string("[vehicle]\nlambda = 1\n")), ConfigError);
    CHECK_THROWS_AS(parse_config(std::string("[path]\nwaypoints = 0,0; 1\n")), ConfigError);
    CHECK_THROWS_AS(parse_config(std::string("[path\nwaypoints = 0,0\n")), ConfigError);

    auto invalid = [&](const std::string& extra) { validate(bad(extra)); };
    CHECK_THROWS_AS(invalid("[vehicle]\nlambda = 0\n"), ConfigError);
    CHECK_THROWS_AS(invalid("[vehicle]\nlambda = 1.5\n"), ConfigError);
    CHECK_THROWS_AS(invalid("[controller]\nzeta = 0\n"), ConfigError);
    CHECK_THROWS_AS(invalid("[controller]\nQ = 1, -1, 1\n"), ConfigError);
    CHECK_THROWS_AS(invalid("[simulation]\ndt = 0\n"), ConfigError);
    CHECK_THROWS_AS(invalid("[simulation]\nduration = 400.005\n"), ConfigError);
    CHECK_THROWS_AS(invalid("[simulation]\nsteady_start = 500\n"), ConfigError);
    CHECK_THROWS_AS(invalid("[reference]\nlambda_min = 0.1\n"), ConfigError);
    CHECK_THROWS_AS(validate(parse_config(std::string("[path]\nwaypoints = 0,0; 900,0; 900,-900; 0,-900\n"))),
                    ConfigError);
}

TEST_CASE("load_config reports missing files as I/O errors") {
    CHECK_THROWS_AS(load_config("/nonexistent/dir/none.cfg"), IoError);
}

TEST_CASE("config hash is stable and sensitive") {
    const ScenarioConfig a = parse_config(std::string(kRect));
    ScenarioConfig b = a;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    b.lambda = 0.5000000000000001;
    CHECK(config_hash(a) != config_hash(b));
    b = a;
    b.controller = ControllerKind::adaptive;
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("turn-radius identity mismatch is a warning, not an error") {
    const ScenarioConfig c = parse_config(std::string(kRect));
    const auto w = config_warnings(c);
    REQUIRE(w.size() == 1);
    CHECK_THAT(w[0], Catch::Matchers::ContainsSubstring("111.8"));
}

TEST_CASE("controller names round-trip") {
    for (auto k : {ControllerKind::pid, ControllerKind::adaptive, ControllerKind::adaptive_saturated})
        CHECK(parse_controller(to_string(k)) == k);
}
