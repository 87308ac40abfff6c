#pragma once

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"
#include "controllers.hpp"
#include "dynamics.hpp"
#include "lyapunov.hpp"
#include "path.hpp"

namespace dubins {

enum class ControllerKind { pid, adaptive, adaptive_saturated };

inline const char* to_string(ControllerKind k) {
    switch (k) {
        case ControllerKind::pid: return "pid";
        case ControllerKind::adaptive: return "adaptive";
        case ControllerKind::adaptive_saturated: return "adaptive_saturated";
    }
    return "?";
}

inline ControllerKind parse_controller(const std::string& s) {
    if (s == "pid") return ControllerKind::pid;
    if (s == "adaptive") return ControllerKind::adaptive;
    if (s == "adaptive_saturated") return ControllerKind::adaptive_saturated;
    throw ConfigError("unknown controller '" + s + "' (pid, adaptive, adaptive_saturated)");
}

enum class CrossTrackMode { projected, nearest };

// Defaults are the rectangle-circuit values; only the waypoints are mandatory.
struct ScenarioConfig {
    std::string name = "scenario";

    std::vector<cplx> waypoints;
    bool closed = true;

    double V_a = 60.0;
    double g = 32.2;
    double phi_c_deg = 45.0;
    double R_min = 134.2;
    double lambda = 1.0;

    std::optional<cplx> initial_position;        // default: first waypoint
    std::optional<double> initial_heading_deg;   // default: course of the first leg

    double lambda_min = 0.25;
    double heading_tol_deg = 1e-4;

    ControllerKind controller = ControllerKind::adaptive_saturated;
    double a = 0.1, zeta = 0.8, omega = 0.1;
    double gamma_theta = 10.0, gamma_lambda = 10.0;
    Mat3 Q = Eigen::Vector3d(1e-6, 1e-4, 1.0).asDiagonal();
    double lambda_floor = 0.05;
    // Fixes theta_hat = 1/lambda and lambda_hat = lambda; adaptation off.
    bool perfect_knowledge = false;

    double dt = 0.01;
    double duration = 400.0;
    double steady_start = 200.0;
    CrossTrackMode cross_track = CrossTrackMode::projected;
};

inline VehicleParams vehicle_params(const ScenarioConfig& c) {
    return {c.V_a, c.lambda, c.g, deg2rad(c.phi_c_deg), c.R_min};
}

inline ReferenceParams reference_params(const ScenarioConfig& c) {
    return make_reference_params(c.V_a, c.R_min, c.lambda_min, deg2rad(c.heading_tol_deg));
}

inline Gains gains(const ScenarioConfig& c) { return gains_from(c.a, c.zeta, c.omega); }

inline WaypointPath waypoint_path(const ScenarioConfig& c) { return {c.waypoints, c.closed}; }

inline std::size_t step_count(const ScenarioConfig& c) {
    return static_cast<std::size_t>(std::llround(c.duration / c.dt));
}

// Throws ConfigError naming the first problem found.
inline void validate(const ScenarioConfig& c) {
    auto wrap = [](auto&& f) {
        try {
            return f();
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
    };
    const VehicleParams vp = wrap([&] { return vehicle_params(c); });
    const ReferenceParams rp = wrap([&] { return reference_params(c); });
    const Gains k = wrap([&] { return gains(c); });
    const WaypointPath path = wrap([&] { return waypoint_path(c); });

    if (!(c.lambda_min <= 1.0)) throw ConfigError("lambda_min must not exceed 1");
    if (rp.turn_rate() > c.lambda_min * vp.psi_dot_max())
        throw ConfigError("reference turn rate exceeds what the most degraded vehicle can follow");
    if (!is_hurwitz(companion_matrix(k))) throw ConfigError("gains do not give a Hurwitz A_e");
    wrap([&] { return solve_lyapunov(companion_matrix(k), c.Q); });
    if (!(c.gamma_theta > 0.0 && c.gamma_lambda > 0.0)) throw ConfigError("adaptation gains must be positive");
    if (!(c.lambda_floor > 0.0 && c.lambda_floor < 1.0)) throw ConfigError("lambda_floor must be in (0, 1)");
    if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw ConfigError("dt must be positive");
    if (!(c.duration >= 0.0) || !std::isfinite(c.duration)) throw ConfigError("duration must be non-negative");
    if (std::abs(c.duration / c.dt - std::round(c.duration / c.dt)) > 1e-6)
        throw ConfigError("duration must be a whole number of steps");
    if (!(c.steady_start >= 0.0 && c.steady_start <= c.duration))
        throw ConfigError("steady_start must lie within the run");
    validate_path(path, rp);
}

// Non-fatal observations about a valid configuration.
inline std::vector<std::string> config_warnings(const ScenarioConfig& c) {
    std::vector<std::string> w;
    const VehicleParams vp = vehicle_params(c);
    const double r = vp.coordinated_turn_radius();
    if (std::abs(r - c.R_min) > 0.01 * c.R_min) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "R_min = %.4g differs from V_a / psi_dot_max = %.4g", c.R_min, r);
        w.emplace_back(buf);
    }
    if (c.lambda < c.lambda_min) w.emplace_back("lambda is below lambda_min; reference turns may be infeasible");
    return w;
}

namespace detail {

inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::vector<double> parse_numbers(const std::string& s, const std::string& key) {
    std::vector<double> out;
    std::string tok;
    std::istringstream in(s);
    auto flush = [&] {
        const auto b = tok.find_first_not_of(" \t");
        if (b == std::string::npos) {
            tok.clear();
            return;
        }
        const auto e = tok.find_last_not_of(" \t");
        const std::string t = tok.substr(b, e - b + 1);
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(t, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != t.size()) throw ConfigError("key '" + key + "': '" + t + "' is not a number");
        out.push_back(v);
        tok.clear();
    };
    for (char ch : s) {
        if (ch == ',' || ch == ';' || ch == ' ' || ch == '\t') {
            flush();
        } else {
            tok.push_back(ch);
        }
    }
    flush();
    return out;
}

inline double parse_number(const std::string& s, const std::string& key) {
    const auto v = parse_numbers(s, key);
    if (v.size() != 1) throw ConfigError("key '" + key + "' expects one number");
    return v[0];
}

inline bool parse_bool(const std::string& s, const std::string& key) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError("key '" + key + "' expects true or false");
}

}  // namespace detail

// INI text: sections [path] [vehicle] [reference] [controller] [simulation].
// Unknown sections or keys are rejected.
inline ScenarioConfig parse_config(std::istream& in) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config syntax: ") + e.what());
    }

    ScenarioConfig c;
    using Setter = std::function<void(const std::string&)>;
    auto num = [](double& dst, const std::string& key) {
        return Setter([&dst, key](const std::string& v) { dst = detail::parse_number(v, key); });
    };
    const std::map<std::string, std::map<std::string, Setter>> schema = {
        {"scenario", {{"name", [&](const std::string& v) { c.name = v; }}}},
        {"path",
         {{"waypoints",
           [&](const std::string& v) {
               const auto xs = detail::parse_numbers(v, "path.waypoints");
               if (xs.size() % 2 != 0) throw ConfigError("path.waypoints needs x,y pairs");
               c.waypoints.clear();
               for (std::size_t i = 0; i < xs.size(); i += 2) c.waypoints.emplace_back(xs[i], xs[i + 1]);
           }},
          {"closed", [&](const std::string& v) { c.closed = detail::parse_bool(v, "path.closed"); }}}},
        {"vehicle",
         {{"V_a", num(c.V_a, "vehicle.V_a")},
          {"g", num(c.g, "vehicle.g")},
          {"phi_c_deg", num(c.phi_c_deg, "vehicle.phi_c_deg")},
          {"R_min", num(c.R_min, "vehicle.R_min")},
          {"lambda", num(c.lambda, "vehicle.lambda")},
          {"initial_position",
           [&](const std::string& v) {
               const auto xs = detail::parse_numbers(v, "vehicle.initial_position");
               if (xs.size() != 2) throw ConfigError("vehicle.initial_position needs x,y");
               c.initial_position = cplx(xs[0], xs[1]);
           }},
          {"initial_heading_deg",
           [&](const std::string& v) {
               c.initial_heading_deg = detail::parse_number(v, "vehicle.initial_heading_deg");
           }}}},
        {"reference",
         {{"lambda_min", num(c.lambda_min, "reference.lambda_min")},
          {"heading_tol_deg", num(c.heading_tol_deg, "reference.heading_tol_deg")}}},
        {"controller",
         {{"type", [&](const std::string& v) { c.controller = parse_controller(v); }},
          {"a", num(c.a, "controller.a")},
          {"zeta", num(c.zeta, "controller.zeta")},
          {"omega", num(c.omega, "controller.omega")},
          {"gamma_theta", num(c.gamma_theta, "controller.gamma_theta")},
          {"gamma_lambda", num(c.gamma_lambda, "controller.gamma_lambda")},
          {"lambda_floor", num(c.lambda_floor, "controller.lambda_floor")},
          {"perfect_knowledge",
           [&](const std::string& v) { c.perfect_knowledge = detail::parse_bool(v, "controller.perfect_knowledge"); }},
          {"Q",
           [&](const std::string& v) {
               const auto xs = detail::parse_numbers(v, "controller.Q");
               if (xs.size() == 3) {
                   c.Q = Eigen::Vector3d(xs[0], xs[1], xs[2]).asDiagonal();
               } else if (xs.size() == 9) {
                   for (int i = 0; i < 9; ++i) c.Q(i / 3, i % 3) = xs[i];
               } else {
                   throw ConfigError("controller.Q needs 3 diagonal or 9 row-major entries");
               }
           }}}},
        {"simulation",
         {{"dt", num(c.dt, "simulation.dt")},
          {"duration", num(c.duration, "simulation.duration")},
          {"steady_start", num(c.steady_start, "simulation.steady_start")},
          {"cross_track", [&](const std::string& v) {
               if (v == "projected") c.cross_track = CrossTrackMode::projected;
               else if (v == "nearest") c.cross_track = CrossTrackMode::nearest;
               else throw ConfigError("simulation.cross_track must be projected or nearest");
           }}}},
    };

    for (const auto& [section, body] : tree) {
        const auto s = schema.find(section);
        if (s == schema.end()) {
            if (body.empty()) throw ConfigError("key '" + section + "' outside any section");
            throw ConfigError("unknown section [" + section + "]");
        }
        for (const auto& [key, value] : body) {
            const auto k = s->second.find(key);
            if (k == s->second.end()) throw ConfigError("unknown key '" + key + "' in [" + section + "]");
            k->second(value.data());
        }
    }
    if (c.waypoints.empty()) throw ConfigError("path.waypoints is required");
    return c;
}

inline ScenarioConfig parse_config(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

inline ScenarioConfig load_config(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open config '" + file + "'");
    ScenarioConfig c = parse_config(in);
    validate(c);
    return c;
}

// Every field in a fixed order at full precision.
inline std::string canonical_string(const ScenarioConfig& c) {
    using detail::fmt17;
    std::ostringstream o;
    o << "name=" << c.name << "\nwaypoints=";
    for (const auto& w : c.waypoints) o << fmt17(w.real()) << ',' << fmt17(w.imag()) << ';';
    o << "\nclosed=" << c.closed << "\nV_a=" << fmt17(c.V_a) << "\ng=" << fmt17(c.g)
      << "\nphi_c_deg=" << fmt17(c.phi_c_deg) << "\nR_min=" << fmt17(c.R_min) << "\nlambda=" << fmt17(c.lambda);
    o << "\ninitial_position=";
    if (c.initial_position) o << fmt17(c.initial_position->real()) << ',' << fmt17(c.initial_position->imag());
    o << "\ninitial_heading_deg=";
    if (c.initial_heading_deg) o << fmt17(*c.initial_heading_deg);
    o << "\nlambda_min=" << fmt17(c.lambda_min) << "\nheading_tol_deg=" << fmt17(c.heading_tol_deg)
      << "\ncontroller=" << to_string(c.controller) << "\na=" << fmt17(c.a) << "\nzeta=" << fmt17(c.zeta)
      << "\nomega=" << fmt17(c.omega) << "\ngamma_theta=" << fmt17(c.gamma_theta)
      << "\ngamma_lambda=" << fmt17(c.gamma_lambda) << "\nQ=";
    for (int i = 0; i < 9; ++i) o << fmt17(c.Q(i / 3, i % 3)) << ',';
    o << "\nlambda_floor=" << fmt17(c.lambda_floor) << "\nperfect_knowledge=" << c.perfect_knowledge
      << "\ndt=" << fmt17(c.dt) << "\nduration=" << fmt17(c.duration) << "\nsteady_start=" << fmt17(c.steady_start)
      << "\ncross_track=" << (c.cross_track == CrossTrackMode::projected ? "projected" : "nearest") << '\n';
    return o.str();
}

// 64-bit FNV-1a of the canonical string, as 16 hex digits.
inline std::string config_hash(const ScenarioConfig& c) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : canonical_string(c)) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace dubins
