#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "common.hpp"
#include "controllers.hpp"
#include "dynamics.hpp"
#include "lyapunov.hpp"
#include "metrics.hpp"
#include "path.hpp"
#include "rk4.hpp"
#include "scenario.hpp"

namespace dubins {

// Everything integrated jointly by RK4. qe_integral accumulates e^H Q e.
struct LoopState {
    cplx r, v_a;
    cplx r_ref, v_ref;
    cplx e_I;
    double theta_hat = 1.0;
    double lambda_hat = 1.0;
    double qe_integral = 0.0;
};

inline LoopState operator+(const LoopState& a, const LoopState& b) {
    return {a.r + b.r,         a.v_a + b.v_a,           a.r_ref + b.r_ref,
            a.v_ref + b.v_ref, a.e_I + b.e_I,           a.theta_hat + b.theta_hat,
            a.lambda_hat + b.lambda_hat, a.qe_integral + b.qe_integral};
}
inline LoopState operator*(const LoopState& a, double h) {
    return {a.r * h,         a.v_a * h,        a.r_ref * h,          a.v_ref * h,
            a.e_I * h,       a.theta_hat * h,  a.lambda_hat * h,     a.qe_integral * h};
}
inline bool all_finite(const LoopState& s) {
    return finite(s.r) && finite(s.v_a) && finite(s.r_ref) && finite(s.v_ref) && finite(s.e_I) &&
           finite(s.theta_hat) && finite(s.lambda_hat) && finite(s.qe_integral);
}

struct TrajectoryRecord {
    double t = 0.0;
    double x = 0.0, y = 0.0;
    double x_ref = 0.0, y_ref = 0.0;
    double psi = 0.0, psi_ref = 0.0;  // unwrapped, rad
    double u2 = 0.0, u2_sat = 0.0, delta_sat = 0.0;
    double theta_hat = 1.0, lambda_hat = 1.0;
    cplx e_I, e_r, e_v;
    double V_lyap = 0.0;
    double cross_track = 0.0;
};

struct RunResult {
    ScenarioConfig cfg;
    std::string config_hash;
    double psi_dot_max = 0.0;
    LyapunovPair lyapunov;
    std::vector<TrajectoryRecord> log;
    std::vector<double> u2ref;  // reference turn rate per logged step
    std::vector<StepMetrics> metrics;
    std::vector<DecrementSample> decrement;
    MetricSummary full, steady;
    double max_abs_delta_sat = 0.0;
};

// Closed-loop right-hand side with u2ref held over the step.
class ClosedLoop {
public:
    ClosedLoop(const ScenarioConfig& c, const VehicleParams& vp, const Gains& k, const LyapunovPair& lp)
        : c_(c), vp_(vp), k_(k), lp_(lp) {}

    struct Eval {
        ErrorState e;
        double psi, psi_ref;
        double theta;  // value used in the control law
        ControlOutput u;
        LoopState rate;
    };

    Eval evaluate(const LoopState& s, double u2ref) const {
        Eval out;
        out.e = error_state(s.r, s.v_a, s.r_ref, s.v_ref, s.e_I);
        out.psi = std::arg(s.v_a);
        out.psi_ref = std::arg(s.v_ref);
        const bool adaptive = c_.controller != ControllerKind::pid;
        const bool dual = c_.controller == ControllerKind::adaptive_saturated;
        const bool learn = adaptive && !c_.perfect_knowledge;
        out.theta = !adaptive ? 1.0 : c_.perfect_knowledge ? 1.0 / vp_.lambda() : s.theta_hat;
        const double lam_hat = c_.perfect_knowledge ? vp_.lambda() : s.lambda_hat;

        out.u = saturate(out.theta * pid_control(out.e, k_, out.psi, u2ref, out.psi_ref, vp_.V_a()),
                         vp_.psi_dot_max());

        LoopState& d = out.rate;
        const VehicleState p = deriv_complex(VehicleState{s.r, s.v_a}, out.u.u2_sat, vp_);
        d.r = p.r;
        d.v_a = p.v_a;
        const VehicleState rr =
            dual ? degraded_reference_rates({s.r_ref, s.v_ref}, u2ref, lam_hat, out.u.delta_sat, s.v_a)
                 : reference_rates({s.r_ref, s.v_ref}, u2ref);
        d.r_ref = rr.r;
        d.v_ref = rr.v_a;
        d.e_I = out.e.e_r;

        const Vec3c ev = out.e.as_vector();
        d.theta_hat = 0.0;
        d.lambda_hat = 0.0;
        if (learn) {
            const Vec3c R = regressor_R(out.e, k_, u2ref, s.v_ref);
            const Vec3c S = regressor_S(out.u.delta_sat, s.v_a);
            const AdaptiveRates a = adapt_rates(ev, R, S, lp_.P, c_.gamma_theta, c_.gamma_lambda);
            d.theta_hat = a.theta_hat;
            if (dual) d.lambda_hat = a.lambda_hat;
        }
        d.qe_integral = quadratic_form_split(ev, lp_.Q);
        return out;
    }

    LoopState operator()(const LoopState& s, double u2ref) const { return evaluate(s, u2ref).rate; }

    double lyapunov_value(const LoopState& s, const ErrorState& e) const {
        const double theta = c_.controller == ControllerKind::pid ? 1.0 : s.theta_hat;
        return lyap_value(e.as_vector(), theta - 1.0 / vp_.lambda(), vp_.lambda() - s.lambda_hat, lp_.P,
                          {std::abs(vp_.lambda()), c_.gamma_theta, c_.gamma_lambda});
    }

private:
    const ScenarioConfig& c_;
    const VehicleParams& vp_;
    const Gains& k_;
    const LyapunovPair& lp_;
};

// Runs the configured scenario. Throws ConfigError for infeasible geometry and
// NumericError (with the step index) if the state stops being finite.
inline RunResult run_scenario(const ScenarioConfig& cfg) {
    validate(cfg);
    RunResult res;
    res.cfg = cfg;
    res.config_hash = config_hash(cfg);
    const VehicleParams vp = vehicle_params(cfg);
    const ReferenceParams rp = reference_params(cfg);
    const Gains k = gains(cfg);
    const WaypointPath path = waypoint_path(cfg);
    res.psi_dot_max = vp.psi_dot_max();
    res.lyapunov = make_lyapunov_pair(k, cfg.Q);
    const ClosedLoop loop(cfg, vp, k, res.lyapunov);
    const EstimateBounds bounds{cfg.lambda_floor};

    ReferenceState ref = initial_reference(path, rp);
    LoopState s;
    s.r = cfg.initial_position.value_or(ref.r_ref);
    s.v_a = cfg.initial_heading_deg ? std::polar(vp.V_a(), deg2rad(*cfg.initial_heading_deg))
                                    : std::polar(vp.V_a(), std::arg(ref.v_ref));
    s.r_ref = ref.r_ref;
    s.v_ref = ref.v_ref;
    if (cfg.perfect_knowledge) {
        s.theta_hat = 1.0 / vp.lambda();
        s.lambda_hat = vp.lambda();
    }

    const std::size_t n = step_count(cfg);
    res.log.reserve(n + 1);
    res.metrics.reserve(n + 1);
    res.decrement.reserve(n + 1);
    res.u2ref.reserve(n + 1);
    double psi_unw = std::arg(s.v_a), psi_ref_unw = std::arg(s.v_ref);

    for (std::size_t i = 0;; ++i) {
        const double t = static_cast<double>(i) * cfg.dt;
        ref.r_ref = s.r_ref;
        ref.v_ref = s.v_ref;
        const double u2ref = schedule_turn_rate(ref, path, rp, cfg.dt);

        const ClosedLoop::Eval ev = loop.evaluate(s, u2ref);
        psi_unw += wrap_angle(ev.psi - psi_unw);
        psi_ref_unw += wrap_angle(ev.psi_ref - psi_ref_unw);
        TrajectoryRecord rec;
        rec.t = t;
        rec.x = s.r.real();
        rec.y = s.r.imag();
        rec.x_ref = s.r_ref.real();
        rec.y_ref = s.r_ref.imag();
        rec.psi = psi_unw;
        rec.psi_ref = psi_ref_unw;
        rec.u2 = ev.u.u2;
        rec.u2_sat = ev.u.u2_sat;
        rec.delta_sat = ev.u.delta_sat;
        rec.theta_hat = ev.theta;
        rec.lambda_hat = cfg.perfect_knowledge ? vp.lambda() : s.lambda_hat;
        rec.e_I = ev.e.e_I;
        rec.e_r = ev.e.e_r;
        rec.e_v = ev.e.e_v;
        rec.V_lyap = loop.lyapunov_value(s, ev.e);
        rec.cross_track = cross_track(ev.e.e_r, ev.psi_ref);
        res.log.push_back(rec);
        res.u2ref.push_back(u2ref);
        res.metrics.push_back(step_metrics(t, ev.e, ev.psi, ev.psi_ref));
        const Vec3c e3 = ev.e.as_vector();
        res.decrement.push_back(
            {t, rec.V_lyap, quadratic_form_split(e3, cfg.Q), s.qe_integral, quadratic_form(e3, cfg.Q).imag()});
        res.max_abs_delta_sat = std::max(res.max_abs_delta_sat, std::abs(ev.u.delta_sat));

        if (i == n) break;
        try {
            s = rk4_step(s, [&](const LoopState& x) { return loop(x, u2ref); }, cfg.dt);
        } catch (const NumericError&) {
            throw NumericError("non-finite derivative", static_cast<long>(i));
        }
        if (!all_finite(s)) throw NumericError("non-finite state", static_cast<long>(i));
        if (!cfg.perfect_knowledge) {
            const AdaptiveState a = project({s.theta_hat, s.lambda_hat}, bounds);
            s.theta_hat = a.theta_hat;
            s.lambda_hat = a.lambda_hat;
        }
    }

    if (cfg.cross_track == CrossTrackMode::nearest) {
        std::vector<cplx> line;
        line.reserve(res.log.size());
        for (const auto& r : res.log) line.emplace_back(r.x_ref, r.y_ref);
        const std::size_t w = static_cast<std::size_t>(std::llround(20.0 / cfg.dt));
        for (std::size_t i = 0; i < res.log.size(); ++i) {
            const double d = polyline_distance(cplx(res.log[i].x, res.log[i].y), line, i > w ? i - w : 0, i + w);
            res.log[i].cross_track = d;
            res.metrics[i].cross_track = d;
        }
    }

    res.full = summarize(res.metrics, 0.0, cfg.duration);
    res.steady = summarize(res.metrics, cfg.steady_start, cfg.duration);
    return res;
}

}  // namespace dubins
