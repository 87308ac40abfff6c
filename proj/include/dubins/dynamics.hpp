#pragma once

#include <cmath>
#include <stdexcept>

#include "common.hpp"

namespace dubins {

// Trigonometric Dubins state. Used as the reference oracle for the complex form.
struct TrigState {
    double x = 0.0, y = 0.0;
    double v = 0.0;    // airspeed
    double psi = 0.0;  // heading, unwrapped
};

inline TrigState operator+(const TrigState& a, const TrigState& b) {
    return {a.x + b.x, a.y + b.y, a.v + b.v, a.psi + b.psi};
}
inline TrigState operator*(const TrigState& a, double h) { return {a.x * h, a.y * h, a.v * h, a.psi * h}; }
inline bool all_finite(const TrigState& s) {
    return finite(s.x) && finite(s.y) && finite(s.v) && finite(s.psi);
}

// Complex Dubins state: r = x + iy, v_a = V e^{i psi}.
// The same type carries the time derivative (r', v_a').
struct VehicleState {
    cplx r;
    cplx v_a;
};

inline VehicleState operator+(const VehicleState& a, const VehicleState& b) { return {a.r + b.r, a.v_a + b.v_a}; }
inline VehicleState operator*(const VehicleState& a, double h) { return {a.r * h, a.v_a * h}; }
inline bool all_finite(const VehicleState& s) { return finite(s.r) && finite(s.v_a); }

class VehicleParams {
public:
    // phi_c is the bank limit in radians; lambda is the loss-of-effectiveness factor.
    VehicleParams(double V_a, double lambda, double g, double phi_c, double R_min)
        : V_a_(V_a), lambda_(lambda), g_(g), phi_c_(phi_c), R_min_(R_min) {
        if (!(V_a > 0.0)) throw std::invalid_argument("V_a must be positive");
        if (!(lambda > 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must be in (0, 1]");
        if (!(g > 0.0)) throw std::invalid_argument("g must be positive");
        if (!(phi_c > 0.0 && phi_c < kPi / 2)) throw std::invalid_argument("phi_c must be in (0, pi/2)");
        if (!(R_min > 0.0)) throw std::invalid_argument("R_min must be positive");
        psi_dot_max_ = g / V_a * std::tan(phi_c);
    }

    double V_a() const { return V_a_; }
    double lambda() const { return lambda_; }
    double g() const { return g_; }
    double phi_c() const { return phi_c_; }
    double R_min() const { return R_min_; }
    double psi_dot_max() const { return psi_dot_max_; }

    // Turn radius implied by V_a and the bank limit. R_min is configured separately
    // and need not match.
    double coordinated_turn_radius() const { return V_a_ / psi_dot_max_; }

    VehicleParams with_lambda(double lambda) const { return {V_a_, lambda, g_, phi_c_, R_min_}; }

private:
    double V_a_, lambda_, g_, phi_c_, R_min_;
    double psi_dot_max_;
};

inline VehicleState to_complex(const TrigState& s) {
    return {cplx(s.x, s.y), std::polar(s.v, s.psi)};
}

// Heading comes back wrapped into (-pi, pi].
inline TrigState from_complex(const VehicleState& s) {
    const double v = std::abs(s.v_a);
    if (!(v > 0.0)) throw std::domain_error("from_complex: zero velocity has no heading");
    return {s.r.real(), s.r.imag(), v, std::arg(s.v_a)};
}

// r' = v_a, v_a' = i lambda u2 v_a. u2 is the applied (already saturated) turn rate.
inline VehicleState deriv_complex(const VehicleState& s, double u2, double lambda) {
    return {s.v_a, cplx(0.0, lambda * u2) * s.v_a};
}

inline VehicleState deriv_complex(const VehicleState& s, double u2, const VehicleParams& p) {
    return deriv_complex(s, u2, p.lambda());
}

inline TrigState deriv_trig(const TrigState& s, double u1, double u2, double lambda) {
    return {s.v * std::cos(s.psi), s.v * std::sin(s.psi), u1, lambda * u2};
}

}  // namespace dubins
