#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "common.hpp"
#include "controllers.hpp"

namespace dubins {

using Mat3 = Eigen::Matrix3d;

// Error dynamics matrix for e = (e_I, e_r, e_v) under delta = -k^T e.
inline Mat3 companion_matrix(const Gains& k) {
    Mat3 A;
    A << 0.0, 1.0, 0.0,
         0.0, 0.0, 1.0,
         -k.k_I, -k.k_P, -k.k_D;
    return A;
}

// Monic characteristic polynomial s^3 + c[2] s^2 + c[1] s + c[0].
inline std::array<double, 3> char_poly(const Mat3& A) {
    const double tr = A.trace();
    const double m2 = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0) + A(0, 0) * A(2, 2) - A(0, 2) * A(2, 0) +
                      A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1);
    return {-A.determinant(), m2, -tr};
}

// Routh-Hurwitz for a cubic.
inline bool is_hurwitz(const Mat3& A) {
    const auto c = char_poly(A);
    return c[2] > 0.0 && c[0] > 0.0 && c[2] * c[1] > c[0];
}

// Roots of the characteristic polynomial by Cardano, polished by Newton.
inline std::array<cplx, 3> eigenvalues(const Mat3& A) {
    const auto c = char_poly(A);
    const double b = c[2], cc = c[1], d = c[0];
    const double d0 = b * b - 3.0 * cc;
    const double d1 = 2.0 * b * b * b - 9.0 * b * cc + 27.0 * d;
    const cplx disc = std::sqrt(cplx(d1 * d1 - 4.0 * d0 * d0 * d0, 0.0));
    cplx C = std::pow((cplx(d1) + disc) / 2.0, 1.0 / 3.0);
    if (std::abs(C) < 1e-300) C = std::pow((cplx(d1) - disc) / 2.0, 1.0 / 3.0);
    const cplx xi(-0.5, std::sqrt(3.0) / 2.0);
    auto p = [&](cplx s) { return ((s + b) * s + cc) * s + d; };
    auto dp = [&](cplx s) { return (3.0 * s + 2.0 * b) * s + cc; };
    std::array<cplx, 3> r;
    cplx ck = C;
    for (int k = 0; k < 3; ++k, ck *= xi) {
        r[k] = std::abs(C) < 1e-300 ? cplx(-b / 3.0) : -(b + ck + d0 / ck) / 3.0;
        for (int it = 0; it < 2; ++it) {
            const cplx g = dp(r[k]);
            if (std::abs(g) < 1e-12) break;
            r[k] -= p(r[k]) / g;
        }
    }
    return r;
}

// Solves A^T P + P A = -Q through the vectorized 9x9 system.
inline Mat3 solve_lyapunov(const Mat3& A, const Mat3& Q) {
    if (!Q.isApprox(Q.transpose(), 1e-12)) throw std::domain_error("solve_lyapunov: Q must be symmetric");
    if (Eigen::LLT<Mat3>(Q).info() != Eigen::Success) throw std::domain_error("solve_lyapunov: Q must be positive definite");
    if (!is_hurwitz(A)) throw std::domain_error("solve_lyapunov: A is not Hurwitz");
    const Mat3 I = Mat3::Identity();
    Eigen::Matrix<double, 9, 9> M;
    // Column-major vec: vec(A^T P) = (I kron A^T) vec P, vec(P A) = (A^T kron I) vec P.
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            M.block<3, 3>(3 * i, 3 * j) = I(i, j) * A.transpose() + A(j, i) * I;
    Eigen::Matrix<double, 9, 1> q = Eigen::Map<const Eigen::Matrix<double, 9, 1>>(Q.data());
    Eigen::Matrix<double, 9, 1> x = M.fullPivLu().solve(-q);
    Mat3 P = Eigen::Map<Mat3>(x.data());
    return 0.5 * (P + P.transpose());
}

struct LyapunovPair {
    Mat3 A_e;
    Mat3 Q;
    Mat3 P;

    double residual() const { return (A_e.transpose() * P + P * A_e + Q).norm(); }
};

inline LyapunovPair make_lyapunov_pair(const Gains& k, const Mat3& Q) {
    const Mat3 A = companion_matrix(k);
    return {A, Q, solve_lyapunov(A, Q)};
}

// e^H M e, computed in complex arithmetic; the imaginary part is round-off only.
inline cplx quadratic_form(const Vec3c& e, const Mat3& M) { return hermitian_product(e, M, e); }

// Same value through the real split e_re^T M e_re + e_im^T M e_im.
inline double quadratic_form_split(const Vec3c& e, const Mat3& M) {
    const Eigen::Vector3d re = e.real(), im = e.imag();
    return re.dot(M * re) + im.dot(M * im);
}

struct LyapunovWeights {
    double abs_lambda = 1.0;
    double gamma_theta = 1.0;
    double gamma_lambda = 1.0;
};

// V = e^H P e + |lambda| theta~^2 / gamma_theta + lambda~^2 / gamma_lambda.
inline double lyap_value(const Vec3c& e, double theta_tilde, double lambda_tilde, const Mat3& P,
                         const LyapunovWeights& w) {
    return quadratic_form_split(e, P) + w.abs_lambda * theta_tilde * theta_tilde / w.gamma_theta +
           lambda_tilde * lambda_tilde / w.gamma_lambda;
}

struct DecrementSample {
    double t = 0.0;
    double V = 0.0;
    double qe = 0.0;           // e^H Q e at t
    double qe_integral = 0.0;  // integral of e^H Q e from 0 to t
    double qe_imag = 0.0;      // imaginary residue of the complex quadratic form
};

struct DecrementReport {
    // max over steps of (V(t+dt) - V(t))/dt + (mean e^H Q e over the step)
    double max_decrement_residual = -std::numeric_limits<double>::infinity();
    double worst_t = 0.0;
    std::size_t decrement_violations = 0;
    // max over steps of (V(t+dt) - V(t))/dt
    double max_increase_rate = -std::numeric_limits<double>::infinity();
    std::size_t increase_violations = 0;
    double max_imag_residue = 0.0;
    std::size_t steps = 0;

    bool decrement_holds() const { return decrement_violations == 0; }
    bool nonincreasing() const { return increase_violations == 0; }
};

// Finite-difference audit of V' <= -e^H Q e. A step violates when its residual
// exceeds tol * max(1, e^H Q e).
inline DecrementReport lyap_decrement_check(const std::vector<DecrementSample>& s, double tol) {
    DecrementReport r;
    for (const auto& x : s) r.max_imag_residue = std::max(r.max_imag_residue, std::abs(x.qe_imag));
    for (std::size_t k = 0; k + 1 < s.size(); ++k) {
        const double dt = s[k + 1].t - s[k].t;
        if (!(dt > 0.0)) throw std::invalid_argument("lyap_decrement_check: samples must be strictly increasing in t");
        const double dV = (s[k + 1].V - s[k].V) / dt;
        const double res = dV + (s[k + 1].qe_integral - s[k].qe_integral) / dt;
        const double scale = tol * std::max({1.0, s[k].qe, s[k + 1].qe});
        if (res > r.max_decrement_residual) {
            r.max_decrement_residual = res;
            r.worst_t = s[k].t;
        }
        if (res > scale) ++r.decrement_violations;
        r.max_increase_rate = std::max(r.max_increase_rate, dV);
        if (dV > scale) ++r.increase_violations;
        ++r.steps;
    }
    return r;
}

}  // namespace dubins
