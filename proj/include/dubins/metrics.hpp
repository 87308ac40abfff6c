#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include "common.hpp"
#include "controllers.hpp"

namespace dubins {

// Lateral offset of the plant from the reference, measured normal to the
// reference course.
inline double cross_track(cplx e_r, double psi_ref) { return std::abs((e_r * std::polar(1.0, -psi_ref)).imag()); }

// Degrees.
inline double heading_error(double psi, double psi_ref) { return rad2deg(std::abs(wrap_angle(psi - psi_ref))); }

// Distance from p to a polyline, searching segments [lo, hi) only.
inline double polyline_distance(cplx p, const std::vector<cplx>& line, std::size_t lo, std::size_t hi) {
    if (line.empty()) throw std::invalid_argument("polyline_distance: empty polyline");
    hi = std::min(hi, line.size() - 1);
    if (line.size() == 1 || lo >= hi) return std::abs(p - line[std::min(lo, line.size() - 1)]);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = lo; i < hi; ++i) {
        const cplx a = line[i], d = line[i + 1] - a;
        const double len2 = std::norm(d);
        double u = len2 > 0.0 ? (std::conj(d) * (p - a)).real() / len2 : 0.0;
        u = std::clamp(u, 0.0, 1.0);
        best = std::min(best, std::abs(p - (a + u * d)));
    }
    return best;
}

struct StepMetrics {
    double t = 0.0;
    double velocity = 0.0;     // |e_v|, ft/s
    double heading = 0.0;      // deg
    double position = 0.0;     // |e_r|, ft
    double cross_track = 0.0;  // ft
};

inline StepMetrics step_metrics(double t, const ErrorState& e, double psi, double psi_ref) {
    return {t, std::abs(e.e_v), heading_error(psi, psi_ref), std::abs(e.e_r), cross_track(e.e_r, psi_ref)};
}

struct MetricStat {
    double mean = 0.0;
    double std = 0.0;  // population
};

struct MetricSummary {
    double t_start = 0.0, t_end = 0.0;
    std::size_t samples = 0;
    MetricStat velocity, heading, position, cross_track;
};

// Statistics over samples with t in [t0, t1]. Sequential two-pass sums, so the
// result is reproducible bit for bit.
inline MetricSummary summarize(const std::vector<StepMetrics>& series, double t0, double t1) {
    constexpr double eps = 1e-9;
    std::vector<const StepMetrics*> w;
    for (const auto& m : series)
        if (m.t >= t0 - eps && m.t <= t1 + eps) w.push_back(&m);
    if (w.empty()) throw std::invalid_argument("summarize: window contains no samples");

    auto stat = [&](double StepMetrics::*f) {
        double s = 0.0;
        for (auto* m : w) s += m->*f;
        const double mean = s / static_cast<double>(w.size());
        double ss = 0.0;
        for (auto* m : w) ss += (m->*f - mean) * (m->*f - mean);
        return MetricStat{mean, std::sqrt(ss / static_cast<double>(w.size()))};
    };
    MetricSummary r;
    r.t_start = t0;
    r.t_end = t1;
    r.samples = w.size();
    r.velocity = stat(&StepMetrics::velocity);
    r.heading = stat(&StepMetrics::heading);
    r.position = stat(&StepMetrics::position);
    r.cross_track = stat(&StepMetrics::cross_track);
    return r;
}

}  // namespace dubins
