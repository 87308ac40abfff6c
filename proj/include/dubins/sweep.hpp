#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "scenario.hpp"
#include "simulation.hpp"

namespace dubins {

struct SweepCase {
    double lambda;
    ControllerKind controller;
};

// Cases ordered by lambda (descending, nominal first) then controller.
inline std::vector<SweepCase> sweep_cases(std::vector<double> lambdas, std::vector<ControllerKind> controllers) {
    std::sort(lambdas.begin(), lambdas.end(), std::greater<>());
    lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());
    std::sort(controllers.begin(), controllers.end());
    controllers.erase(std::unique(controllers.begin(), controllers.end()), controllers.end());
    std::vector<SweepCase> out;
    for (double l : lambdas)
        for (auto c : controllers) out.push_back({l, c});
    return out;
}

// Runs every case; results come back in sweep_cases order whatever the thread count.
inline std::vector<RunResult> run_sweep(const ScenarioConfig& base, const std::vector<double>& lambdas,
                                        const std::vector<ControllerKind>& controllers, unsigned threads = 0) {
    const auto cases = sweep_cases(lambdas, controllers);
    std::vector<ScenarioConfig> cfgs;
    for (const auto& c : cases) {
        ScenarioConfig s = base;
        s.lambda = c.lambda;
        s.controller = c.controller;
        validate(s);
        cfgs.push_back(std::move(s));
    }
    std::vector<RunResult> results(cfgs.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(cfgs.size()));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex m;
    auto worker = [&] {
        for (std::size_t i; (i = next++) < cfgs.size();) {
            try {
                results[i] = run_scenario(cfgs[i]);
            } catch (...) {
                std::lock_guard lk(m);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return results;
}

namespace detail {
inline std::string fmtg(double x, int digits = 12) {
    char b[40];
    std::snprintf(b, sizeof b, "%.*g", digits, x);
    return b;
}
}  // namespace detail

// One row per (run, window).
inline void write_summary_csv(const std::vector<RunResult>& runs, std::ostream& os) {
    using detail::fmtg;
    os << "lambda,controller,config_hash,window,t_start,t_end,velocity_mean,velocity_std,heading_mean,heading_std,"
          "position_mean,position_std,cross_track_mean,cross_track_std,max_abs_delta_sat\n";
    for (const auto& r : runs) {
        for (int w = 0; w < 2; ++w) {
            const MetricSummary& s = w == 0 ? r.full : r.steady;
            os << fmtg(r.cfg.lambda) << ',' << to_string(r.cfg.controller) << ',' << r.config_hash << ','
               << (w == 0 ? "full" : "steady") << ',' << fmtg(s.t_start) << ',' << fmtg(s.t_end) << ','
               << fmtg(s.velocity.mean) << ',' << fmtg(s.velocity.std) << ',' << fmtg(s.heading.mean) << ','
               << fmtg(s.heading.std) << ',' << fmtg(s.position.mean) << ',' << fmtg(s.position.std) << ','
               << fmtg(s.cross_track.mean) << ',' << fmtg(s.cross_track.std) << ',' << fmtg(r.max_abs_delta_sat)
               << '\n';
        }
    }
}

// Grid of mean +- std: one block per lambda, one column per controller.
inline void write_summary_table(const std::vector<RunResult>& runs, bool steady, std::ostream& os) {
    std::vector<ControllerKind> ctrls;
    std::vector<double> lambdas;
    for (const auto& r : runs) {
        if (std::find(ctrls.begin(), ctrls.end(), r.cfg.controller) == ctrls.end()) ctrls.push_back(r.cfg.controller);
        if (std::find(lambdas.begin(), lambdas.end(), r.cfg.lambda) == lambdas.end()) lambdas.push_back(r.cfg.lambda);
    }
    auto find = [&](double l, ControllerKind c) -> const RunResult* {
        for (const auto& r : runs)
            if (r.cfg.lambda == l && r.cfg.controller == c) return &r;
        return nullptr;
    };
    char buf[128];
    os << (steady ? "steady-state window" : "full window");
    if (!runs.empty()) {
        const auto& s = steady ? runs.front().steady : runs.front().full;
        std::snprintf(buf, sizeof buf, " [%g s, %g s]", s.t_start, s.t_end);
        os << buf;
    }
    os << '\n';
    std::snprintf(buf, sizeof buf, "%-8s %-22s", "lambda", "metric");
    os << buf;
    for (auto c : ctrls) {
        std::snprintf(buf, sizeof buf, " %26s", to_string(c));
        os << buf;
    }
    os << '\n';
    const char* names[4] = {"velocity error (ft/s)", "heading error (deg)", "position error (ft)", "cross-track (ft)"};
    for (double l : lambdas) {
        for (int m = 0; m < 4; ++m) {
            if (m == 0) std::snprintf(buf, sizeof buf, "%-8g %-22s", l, names[m]);
            else std::snprintf(buf, sizeof buf, "%-8s %-22s", "", names[m]);
            os << buf;
            for (auto c : ctrls) {
                const RunResult* r = find(l, c);
                if (!r) {
                    std::snprintf(buf, sizeof buf, " %26s", "-");
                } else {
                    const MetricSummary& s = steady ? r->steady : r->full;
                    const MetricStat st = m == 0 ? s.velocity : m == 1 ? s.heading : m == 2 ? s.position : s.cross_track;
                    std::snprintf(buf, sizeof buf, " %12.4f +- %10.4f", st.mean, st.std);
                }
                os << buf;
            }
            os << '\n';
        }
    }
}

}  // namespace dubins
