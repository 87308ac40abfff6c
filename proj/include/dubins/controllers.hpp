#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "common.hpp"
#include "path.hpp"

namespace dubins {

using Vec3c = Eigen::Vector3cd;

// PID gains from pole placement at s = -a and s = -zeta*omega +- i*omega*sqrt(1-zeta^2).
struct Gains {
    double k_I = 0.0, k_P = 0.0, k_D = 0.0;
    double a = 0.0, zeta = 0.0, omega = 0.0;
};

inline Gains gains_from(double a, double zeta, double omega) {
    if (!(a > 0.0)) throw std::invalid_argument("gains: a must be positive");
    if (!(omega > 0.0)) throw std::invalid_argument("gains: omega must be positive");
    // zeta = 0 puts a pole pair on the imaginary axis.
    if (!(zeta > 0.0 && zeta <= 1.0)) throw std::invalid_argument("gains: zeta must be in (0, 1]");
    return {a * omega * omega, omega * omega + 2.0 * a * zeta * omega, a + 2.0 * zeta * omega, a, zeta, omega};
}

// Complex errors: integral of position error, position error, velocity error.
struct ErrorState {
    cplx e_I, e_r, e_v;

    Vec3c as_vector() const { return Vec3c(e_I, e_r, e_v); }
};

inline ErrorState error_state(cplx r, cplx v_a, cplx r_ref, cplx v_ref, cplx e_I) {
    return {e_I, r - r_ref, v_a - v_ref};
}

inline ErrorState error_state(const VehicleState& plant, const ReferenceState& ref, cplx e_I) {
    return error_state(plant.r, plant.v_a, ref.r_ref, ref.v_ref, e_I);
}

// Desired velocity-error acceleration; places the error poles of A_e.
inline cplx feedback(const ErrorState& e, const Gains& k) {
    return -(k.k_I * e.e_I + k.k_P * e.e_r + k.k_D * e.e_v);
}

// Turn rate that realizes the component of u_delta normal to v_a.
inline double lemma1_u2(cplx v_a, cplx u_delta, double lambda) {
    const double n = std::norm(v_a);
    if (!(n > 0.0)) throw std::domain_error("lemma1_u2: zero velocity");
    if (lambda == 0.0) throw std::domain_error("lemma1_u2: zero effectiveness");
    return (std::conj(v_a) * u_delta).imag() / (lambda * n);
}

// Re{ e^{-i psi} [ delta / (i V_a) + u2ref e^{i psi_ref} ] }.
// The feedforward uses the heading difference so that identical headings give
// exactly u2ref.
inline double pid_control(const ErrorState& e, const Gains& k, double psi, double u2ref, double psi_ref, double V_a) {
    const cplx d = feedback(e, k);
    return (std::polar(1.0, -psi) * d).imag() / V_a + u2ref * std::cos(psi_ref - psi);
}

inline double adaptive_control(const ErrorState& e, const Gains& k, double theta_hat, double psi, double u2ref,
                               double psi_ref, double V_a) {
    if (!(theta_hat > 0.0)) throw std::invalid_argument("adaptive_control: theta_hat must be positive");
    return theta_hat * pid_control(e, k, psi, u2ref, psi_ref, V_a);
}

struct ControlOutput {
    double u2 = 0.0;
    double u2_sat = 0.0;
    double delta_sat = 0.0;  // u2_sat - u2
};

inline ControlOutput saturate(double u2, double psi_dot_max) {
    const double s = std::clamp(u2, -psi_dot_max, psi_dot_max);
    return {u2, s, s - u2};
}

// Parameter regressor for theta: only the velocity-error row is non-zero.
inline Vec3c regressor_R(const ErrorState& e, const Gains& k, double u2ref, cplx v_ref) {
    return Vec3c(0.0, 0.0, feedback(e, k) + cplx(0.0, u2ref) * v_ref);
}

// Saturation regressor for lambda.
inline Vec3c regressor_S(double delta_sat, double V_a, double psi) {
    return Vec3c(0.0, 0.0, cplx(0.0, V_a * delta_sat) * std::polar(1.0, psi));
}

// Same as above with the plant velocity given directly (v_a = V_a e^{i psi}).
inline Vec3c regressor_S(double delta_sat, cplx v_a) { return Vec3c(0.0, 0.0, cplx(0.0, delta_sat) * v_a); }

// e^H M x for complex 3-vectors.
inline cplx hermitian_product(const Vec3c& e, const Eigen::Matrix3d& M, const Vec3c& x) {
    return e.dot(M.cast<cplx>() * x);
}

struct AdaptiveRates {
    double theta_hat = 0.0;
    double lambda_hat = 0.0;
};

// theta_hat' = -gamma_theta Re{e^H P R},  lambda_hat' = +gamma_lambda Re{e^H P S}.
inline AdaptiveRates adapt_rates(const Vec3c& e, const Vec3c& R, const Vec3c& S, const Eigen::Matrix3d& P,
                                 double gamma_theta, double gamma_lambda) {
    if (!(gamma_theta > 0.0) || !(gamma_lambda > 0.0)) throw std::invalid_argument("adapt_rates: gains must be positive");
    return {-gamma_theta * hermitian_product(e, P, R).real(), gamma_lambda * hermitian_product(e, P, S).real()};
}

// Box that keeps theta_hat and lambda_hat in the physically meaningful range.
struct EstimateBounds {
    double lambda_floor = 0.05;

    double theta_max() const { return 1.0 / lambda_floor; }
};

struct AdaptiveState {
    double theta_hat = 1.0;
    double lambda_hat = 1.0;
};

inline AdaptiveState project(AdaptiveState s, const EstimateBounds& b) {
    s.theta_hat = std::clamp(s.theta_hat, 1.0, b.theta_max());
    s.lambda_hat = std::clamp(s.lambda_hat, b.lambda_floor, 1.0);
    return s;
}

}  // namespace dubins
