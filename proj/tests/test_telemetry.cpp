#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dubins/svg.hpp"
#include "dubins/telemetry.hpp"

using namespace dubins;

namespace {
ScenarioConfig small(double lambda) {
    ScenarioConfig c;
    c.waypoints = {cplx(0, 0), cplx(4000, 0), cplx(4000, -2500), cplx(0, -2500)};
    c.lambda = lambda;
    c.duration = 80.0;
    c.steady_start = 40.0;
    return c;
}
}  // namespace

TEST_CASE("CSV round-trips every value exactly") {
    const RunResult r = run_scenario(small(0.25));
    std::stringstream ss;
    write_csv(r.log, ss);
    const auto back = read_csv(ss);
    REQUIRE(back.size() == r.log.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        const auto a = detail::record_fields(r.log[i]), b = detail::record_fields(back[i]);
        for (std::size_t j = 0; j < a.size(); ++j) REQUIRE(a[j] == b[j]);
    }
}

TEST_CASE("CSV layout") {
    std::vector<TrajectoryRecord> log(1);
    log[0].t = 0.1;
    log[0].u2 = -1.0 / 3.0;
    std::stringstream ss;
    write_csv(log, ss);
    std::string header, row;
    std::getline(ss, header);
    std::getline(ss, row);
    CHECK(header.rfind("t,x,y,x_ref,y_ref,psi,psi_ref,u2,u2_sat,delta_sat,theta_hat,lambda_hat,", 0) == 0);
    CHECK(std::count(header.begin(), header.end(), ',') == 19);
    CHECK(std::count(row.begin(), row.end(), ',') == 19);
    CHECK(row.find("-0.33333333333333331") != std::string::npos);

    std::stringstream empty;
    write_csv({}, empty);
    CHECK(empty.str() == header + "\n");
}

TEST_CASE("CSV errors") {
    CHECK_THROWS_AS(emit_csv({}, "/nonexistent/dir/x.csv"), IoError);
    CHECK_THROWS_AS(read_csv("/nonexistent/dir/x.csv"), IoError);
    std::stringstream wrong("a,b\n1,2\n");
    CHECK_THROWS_AS(read_csv(wrong), IoError);
}

TEST_CASE("SVG plots") {
    std::vector<RunResult> runs = {run_scenario(small(1.0)), run_scenario(small(0.75)), run_scenario(small(0.5)),
                                   run_scenario(small(0.25))};
    for (auto k : {PlotKind::trajectory, PlotKind::cross_track, PlotKind::control, PlotKind::estimates}) {
        const std::string s = render_svg(runs, k);
        CHECK(s.rfind("<svg", 0) == 0);
        CHECK(s.find("</svg>") != std::string::npos);
        for (const char* c : kPalette) CHECK(s.find(c) != std::string::npos);
    }
    const std::string ctl = render_svg(runs, PlotKind::control);
    CHECK(ctl.find("stroke-dasharray") != std::string::npos);
    std::size_t dashed = 0;
    for (auto pos = ctl.find("stroke-dasharray=\"6,4\""); pos != std::string::npos; pos = ctl.find("stroke-dasharray=\"6,4\"", pos + 1)) ++dashed;
    CHECK(dashed == 2);
    CHECK_THROWS_AS(parse_plot_kind("histogram"), ConfigError);
    CHECK_THROWS_AS(emit_svg(runs, PlotKind::trajectory, "/nonexistent/dir/x.svg"), IoError);

    const auto dir = std::filesystem::temp_directory_path() / "dubins_svg_test";
    std::filesystem::create_directories(dir);
    emit_svg(runs, PlotKind::estimates, (dir / "e.svg").string());
    CHECK(std::filesystem::file_size(dir / "e.svg") > 1000);
    std::filesystem::remove_all(dir);
}
