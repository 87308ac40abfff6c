#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "common.hpp"
#include "dynamics.hpp"
#include "rk4.hpp"

namespace dubins {

// Ordered waypoints in the complex plane. A closed path wraps from the last
// waypoint back to the first.
class WaypointPath {
public:
    WaypointPath(std::vector<cplx> points, bool closed) : pts_(std::move(points)), closed_(closed) {
        if (pts_.size() < 2) throw std::invalid_argument("path needs at least two waypoints");
        for (std::size_t k = 0; k < num_legs(); ++k) {
            if (!finite(pts_[k])) throw std::invalid_argument("non-finite waypoint");
            if (leg_end(k) == leg_start(k))
                throw std::invalid_argument("consecutive waypoints " + std::to_string(k) + " coincide");
        }
    }

    std::size_t size() const { return pts_.size(); }
    bool closed() const { return closed_; }
    const std::vector<cplx>& points() const { return pts_; }
    std::size_t num_legs() const { return closed_ ? pts_.size() : pts_.size() - 1; }

    cplx leg_start(std::size_t k) const { return pts_.at(check(k)); }
    cplx leg_end(std::size_t k) const { return pts_[(check(k) + 1) % pts_.size()]; }
    double leg_length(std::size_t k) const { return std::abs(leg_end(k) - leg_start(k)); }

    // Leg that follows k, or num_legs() when the path ends after k.
    std::size_t next_leg(std::size_t k) const {
        check(k);
        if (closed_) return (k + 1) % num_legs();
        return k + 1;
    }

private:
    std::size_t check(std::size_t k) const {
        if (k >= num_legs()) throw std::out_of_range("leg index " + std::to_string(k) + " out of range");
        return k;
    }

    std::vector<cplx> pts_;
    bool closed_;
};

// Course of leg k, wrapped into (-pi, pi].
inline double course_angle(const WaypointPath& path, std::size_t k) {
    return std::arg(path.leg_end(k) - path.leg_start(k));
}

// Signed heading change at the far end of leg k; zero if the path ends there.
inline double turn_angle(const WaypointPath& path, std::size_t k) {
    const std::size_t n = path.next_leg(k);
    if (n >= path.num_legs()) return 0.0;
    return wrap_angle(course_angle(path, n) - course_angle(path, k));
}

// Distance before the corner at which a turn of radius R must start.
inline double turn_distance(double dpsi, double R) {
    if (!(std::abs(dpsi) < kPi)) throw std::domain_error("turn_distance: |dpsi| must be below pi");
    if (!(R > 0.0)) throw std::domain_error("turn_distance: radius must be positive");
    return R * std::abs(std::tan(dpsi / 2.0));
}

struct ReferenceParams {
    double V_ref = 0.0;
    double R_ref = 0.0;
    double lambda_min = 1.0;
    double heading_tol = deg2rad(1e-4);

    double turn_rate() const { return V_ref / R_ref; }
};

// Worst-case radius rule: the reference turns no tighter than the most degraded
// vehicle can follow at full bank.
inline ReferenceParams make_reference_params(double V_ref, double R_min, double lambda_min, double heading_tol) {
    if (!(V_ref > 0.0)) throw std::invalid_argument("V_ref must be positive");
    if (!(R_min > 0.0)) throw std::invalid_argument("R_min must be positive");
    if (!(lambda_min > 0.0 && lambda_min <= 1.0)) throw std::invalid_argument("lambda_min must be in (0, 1]");
    if (!(heading_tol > 0.0)) throw std::invalid_argument("heading_tol must be positive");
    return {V_ref, R_min / lambda_min, lambda_min, heading_tol};
}

inline double reference_curvature(double dpsi, const ReferenceParams& p) {
    if (dpsi == 0.0) return 0.0;
    return (dpsi > 0.0 ? 1.0 : -1.0) / p.R_ref;
}

inline double reference_turn_rate(double kappa, double V_ref) { return kappa * V_ref; }

enum class SegmentMode { straight, turn };

struct ReferenceState {
    cplx r_ref;
    cplx v_ref;
    // Counts legs flown; never decreases. The active leg is leg_of(state, path).
    std::size_t segment_index = 0;
    SegmentMode mode = SegmentMode::straight;
    double kappa = 0.0;
    std::size_t turn_steps = 0;
};

inline std::size_t leg_of(const ReferenceState& s, const WaypointPath& path) {
    const std::size_t n = path.num_legs();
    return path.closed() ? s.segment_index % n : std::min(s.segment_index, n - 1);
}

inline ReferenceState initial_reference(const WaypointPath& path, const ReferenceParams& p) {
    ReferenceState s;
    s.r_ref = path.leg_start(0);
    s.v_ref = std::polar(p.V_ref, course_angle(path, 0));
    return s;
}

// Checks every leg can hold the turns at both of its ends.
inline void validate_path(const WaypointPath& path, const ReferenceParams& p) {
    const std::size_t n = path.num_legs();
    for (std::size_t k = 0; k < n; ++k) {
        const double out = turn_angle(path, k);
        if (std::abs(out) >= kPi - 1e-9)
            throw ConfigError("reversal at end of leg " + std::to_string(k) + " cannot be flown");
        double need = turn_distance(out, p.R_ref);
        if (path.closed() || k > 0) need += turn_distance(turn_angle(path, (k + n - 1) % n), p.R_ref);
        if (path.leg_length(k) < need)
            throw ConfigError("leg " + std::to_string(k) + " is shorter than its turn distances (" +
                              std::to_string(path.leg_length(k)) + " < " + std::to_string(need) + ")");
    }
}

// kappa * V_ref, reduced on the last step of a turn so the heading lands on the
// new course instead of stopping up to one step short of it.
inline double trimmed_turn_rate(double kappa, double V_ref, double remaining, double dt) {
    const double full = reference_turn_rate(kappa, V_ref);
    const double last = remaining / dt;
    return std::abs(last) < std::abs(full) ? last : full;
}

// Runs the segment state machine on the current reference pose and returns the
// commanded reference turn rate for the next step.
inline double schedule_turn_rate(ReferenceState& s, const WaypointPath& path, const ReferenceParams& p, double dt) {
    const std::size_t n = path.num_legs();
    if (s.mode == SegmentMode::turn) {
        const std::size_t next = path.next_leg(leg_of(s, path));
        const double remaining = wrap_angle(course_angle(path, next) - std::arg(s.v_ref));
        // Signed in the turn direction, so an overshoot also ends the turn.
        if ((s.kappa > 0.0 ? remaining : -remaining) <= p.heading_tol) {
            s.mode = SegmentMode::straight;
            s.kappa = 0.0;
            s.turn_steps = 0;
            ++s.segment_index;
        } else {
            ++s.turn_steps;
            const double limit = 2.0 * kPi / p.turn_rate() + 10.0;
            if (static_cast<double>(s.turn_steps) * dt > limit)
                throw ConfigError("reference turn did not reach the next course");
            return trimmed_turn_rate(s.kappa, p.V_ref, remaining, dt);
        }
    }

    const std::size_t k = leg_of(s, path);
    const bool last_leg = !path.closed() && k + 1 >= n;
    if (last_leg) return 0.0;

    const cplx w = path.leg_end(k);
    const double along = (std::conj(std::polar(1.0, course_angle(path, k))) * (w - s.r_ref)).real();
    const double dpsi = turn_angle(path, k);
    if (dpsi == 0.0) {
        if (along <= 0.0) ++s.segment_index;
        return 0.0;
    }
    const double to_go = std::abs(w - s.r_ref), d_turn = turn_distance(dpsi, p.R_ref);
    if (to_go <= d_turn) {
        // Entering well inside the turn distance means the previous turn overlapped this one.
        if (to_go < d_turn - 2.0 * p.V_ref * dt)
            throw ConfigError("turn at waypoint " + std::to_string((k + 1) % path.size()) + " overlaps the previous one");
        s.mode = SegmentMode::turn;
        s.kappa = reference_curvature(dpsi, p);
        s.turn_steps = 1;
        const double remaining = wrap_angle(course_angle(path, path.next_leg(k)) - std::arg(s.v_ref));
        return trimmed_turn_rate(s.kappa, p.V_ref, remaining, dt);
    }
    if (along < 0.0) throw ConfigError("reference overran waypoint " + std::to_string((k + 1) % path.size()));
    return 0.0;
}

// (r_ref', v_ref') for the nominal reference.
inline VehicleState reference_rates(const VehicleState& rv, double u2ref) {
    return {rv.v_a, cplx(0.0, u2ref) * rv.v_a};
}

// (r_ref', v_ref') with the saturation shortfall fed back: v_a is the plant velocity.
inline VehicleState degraded_reference_rates(const VehicleState& rv, double u2ref, double lambda_hat,
                                             double delta_sat, cplx v_a) {
    return {rv.v_a, cplx(0.0, u2ref) * rv.v_a + cplx(0.0, lambda_hat * delta_sat) * v_a};
}

struct ReferenceStep {
    ReferenceState state;
    double u2ref;
};

inline ReferenceStep reference_step(ReferenceState s, const WaypointPath& path, const ReferenceParams& p, double dt) {
    const double u2ref = schedule_turn_rate(s, path, p, dt);
    const VehicleState next =
        rk4_step(VehicleState{s.r_ref, s.v_ref}, [&](const VehicleState& x) { return reference_rates(x, u2ref); }, dt);
    s.r_ref = next.r;
    s.v_ref = next.v_a;
    return {s, u2ref};
}

// One step of the degraded reference with u2ref already scheduled. psi and V_a
// describe the plant velocity and are held over the step.
inline ReferenceState reference_step_degraded(ReferenceState s, double u2ref, double lambda_hat, double delta_sat,
                                              double psi, double V_a, double dt) {
    const cplx v_a = std::polar(V_a, psi);
    const VehicleState next = rk4_step(
        VehicleState{s.r_ref, s.v_ref},
        [&](const VehicleState& x) { return degraded_reference_rates(x, u2ref, lambda_hat, delta_sat, v_a); }, dt);
    s.r_ref = next.r;
    s.v_ref = next.v_a;
    return s;
}

// Times at which the nominal reference completes each of the first `laps` laps
// of a closed path. A lap completes when the turn onto leg 0 ends.
inline std::vector<double> lap_completion_times(const WaypointPath& path, const ReferenceParams& p, double dt,
                                                std::size_t laps) {
    if (!path.closed()) throw std::invalid_argument("lap_completion_times needs a closed path");
    ReferenceState s = initial_reference(path, p);
    std::vector<double> out;
    const std::size_t max_steps = static_cast<std::size_t>(1e8);
    for (std::size_t step = 0; out.size() < laps; ++step) {
        if (step > max_steps) throw NumericError("reference never closed the lap");
        ReferenceStep st = reference_step(s, path, p, dt);
        if (st.state.segment_index == (out.size() + 1) * path.num_legs())
            out.push_back(static_cast<double>(step) * dt);
        s = st.state;
    }
    return out;
}

// Steady lap period, measured between the first and second lap completions.
inline double lap_period(const WaypointPath& path, const ReferenceParams& p, double dt) {
    const auto t = lap_completion_times(path, p, dt, 2);
    return t[1] - t[0];
}

}  // namespace dubins
