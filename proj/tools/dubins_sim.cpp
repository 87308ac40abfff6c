// Command-line driver: simulate one scenario, sweep lambda x controller, or
// check a configuration.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dubins/dubins.hpp"

namespace fs = std::filesystem;
using namespace dubins;

namespace {

enum Exit { kOk = 0, kConfig = 1, kNumeric = 2, kIo = 3 };

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::string tok;
    std::istringstream in(s);
    while (std::getline(in, tok, ','))
        if (!tok.empty()) out.push_back(tok);
    return out;
}

void ensure_dir(const std::string& d) {
    std::error_code ec;
    fs::create_directories(d, ec);
    if (ec) throw IoError("cannot create '" + d + "': " + ec.message());
}

std::string run_stem(const RunResult& r) {
    char b[96];
    std::snprintf(b, sizeof b, "%s_lambda%.4g", to_string(r.cfg.controller), r.cfg.lambda);
    return b;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << text;
    if (!out.flush()) throw IoError("write to '" + path + "' failed");
}

void emit_outputs(const std::vector<RunResult>& runs, const std::string& out_dir, bool csv,
                  const std::string& svg_kinds) {
    if (csv)
        for (const auto& r : runs) emit_csv(r.log, (fs::path(out_dir) / (run_stem(r) + ".csv")).string());
    for (const auto& k : split(svg_kinds)) {
        const PlotKind kind = parse_plot_kind(k);
        emit_svg(runs, kind, (fs::path(out_dir) / (std::string(to_string(kind)) + ".svg")).string());
    }
}

void warn(const ScenarioConfig& c) {
    for (const auto& w : config_warnings(c)) std::cerr << "warning: " << w << '\n';
}

int cmd_check(const std::string& file) {
    const ScenarioConfig c = load_config(file);
    warn(c);
    const VehicleParams vp = vehicle_params(c);
    const ReferenceParams rp = reference_params(c);
    const Gains k = gains(c);
    const LyapunovPair lp = make_lyapunov_pair(k, c.Q);
    const auto ev = eigenvalues(lp.A_e);
    std::printf("config            %s (%s)\n", c.name.c_str(), config_hash(c).c_str());
    std::printf("psi_dot_max       %.6f rad/s (%.4f deg/s)\n", vp.psi_dot_max(), rad2deg(vp.psi_dot_max()));
    std::printf("R_ref             %.4f ft, reference turn rate %.6f rad/s\n", rp.R_ref, rp.turn_rate());
    std::printf("gains             k_I = %.6g, k_P = %.6g, k_D = %.6g\n", k.k_I, k.k_P, k.k_D);
    std::printf("A_e eigenvalues  ");
    for (const auto& e : ev) std::printf(" %.6g%+.6gi", e.real(), e.imag());
    std::printf("\nHurwitz           %s\n", is_hurwitz(lp.A_e) ? "yes" : "no");
    std::printf("Lyapunov residual %.3e\n", lp.residual());
    std::printf("min eig(P)        %.6g\n", Eigen::SelfAdjointEigenSolver<Mat3>(lp.P).eigenvalues().minCoeff());
    const WaypointPath path = waypoint_path(c);
    for (std::size_t i = 0; i < path.num_legs(); ++i)
        std::printf("leg %-3zu           length %.2f ft, course %.2f deg, turn %.2f deg\n", i, path.leg_length(i),
                    rad2deg(course_angle(path, i)), rad2deg(turn_angle(path, i)));
    if (path.closed()) std::printf("lap period        %.2f s\n", lap_period(path, rp, c.dt));
    return kOk;
}

int cmd_simulate(const std::string& file, const std::string& controller, double lambda, const std::string& out,
                 bool csv, const std::string& svg) {
    ScenarioConfig c = load_config(file);
    if (!controller.empty()) c.controller = parse_controller(controller);
    if (lambda > 0.0) c.lambda = lambda;
    validate(c);
    warn(c);
    std::vector<RunResult> runs{run_scenario(c)};
    const RunResult& r = runs.front();
    std::ostringstream table;
    write_summary_table(runs, false, table);
    table << '\n';
    write_summary_table(runs, true, table);
    std::cout << run_stem(r) << "  config " << r.config_hash << "\n\n" << table.str();
    if (csv || !svg.empty()) {
        ensure_dir(out);
        emit_outputs(runs, out, csv, svg);
    }
    return kOk;
}

int cmd_sweep(const std::string& file, const std::string& lambdas, const std::string& controllers,
              const std::string& out, bool csv, const std::string& svg, unsigned threads) {
    const ScenarioConfig c = load_config(file);
    warn(c);
    std::vector<double> ls;
    for (const auto& s : split(lambdas)) ls.push_back(detail::parse_number(s, "--lambdas"));
    std::vector<ControllerKind> cs;
    for (const auto& s : split(controllers)) cs.push_back(parse_controller(s));
    if (ls.empty() || cs.empty()) throw ConfigError("sweep needs at least one lambda and one controller");
    const auto runs = run_sweep(c, ls, cs, threads);

    ensure_dir(out);
    std::ostringstream csvs, table;
    write_summary_csv(runs, csvs);
    write_summary_table(runs, false, table);
    table << '\n';
    write_summary_table(runs, true, table);
    write_text((fs::path(out) / "summary.csv").string(), csvs.str());
    write_text((fs::path(out) / "summary.txt").string(), table.str());
    std::cout << table.str();
    emit_outputs(runs, out, csv, "");
    // One SVG per controller so colors map to lambda.
    for (auto ctrl : sweep_cases({1.0}, cs)) {
        std::vector<RunResult> group;
        for (const auto& r : runs)
            if (r.cfg.controller == ctrl.controller) group.push_back(r);
        for (const auto& k : split(svg)) {
            const PlotKind kind = parse_plot_kind(k);
            emit_svg(group, kind,
                     (fs::path(out) / (std::string(to_string(ctrl.controller)) + "_" + to_string(kind) + ".svg"))
                         .string());
        }
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Complex-form Dubins vehicle: adaptive path following under loss of control effectiveness"};
    app.require_subcommand(1);

    std::string config, controller, out = "out", svg, lambdas = "1,0.75,0.5,0.25",
                                    controllers = "pid,adaptive_saturated";
    double lambda = 0.0;
    bool csv = false;
    unsigned threads = 0;

    auto* sim = app.add_subcommand("simulate", "run one scenario");
    sim->add_option("--config", config, "scenario file")->required();
    sim->add_option("--controller", controller, "pid | adaptive | adaptive_saturated");
    sim->add_option("--lambda", lambda, "override loss-of-effectiveness factor");
    sim->add_option("--out", out, "output directory");
    sim->add_flag("--emit-csv", csv, "write the trajectory CSV");
    sim->add_option("--emit-svg", svg, "comma list of trajectory,cross_track,control,estimates");

    auto* sw = app.add_subcommand("sweep", "run lambda x controller grid");
    sw->add_option("--config", config, "scenario file")->required();
    sw->add_option("--lambdas", lambdas, "comma list of lambda values");
    sw->add_option("--controllers", controllers, "comma list of controllers");
    sw->add_option("--out", out, "output directory");
    sw->add_flag("--emit-csv", csv, "write every trajectory CSV");
    sw->add_option("--emit-svg", svg, "comma list of plot kinds");
    sw->add_option("--threads", threads, "worker threads (0 = all cores)");

    auto* chk = app.add_subcommand("check", "validate a scenario and print derived quantities");
    chk->add_option("--config", config, "scenario file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        if (*sim) return cmd_simulate(config, controller, lambda, out, csv, svg);
        if (*sw) return cmd_sweep(config, lambdas, controllers, out, csv, svg, threads);
        if (*chk) return cmd_check(config);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumeric;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kIo;
    }
    return kOk;
}
