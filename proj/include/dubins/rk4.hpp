#pragma once

#include <concepts>
#include <stdexcept>

#include "common.hpp"

namespace dubins {

// A state the integrator can combine linearly. all_finite is found by ADL.
template <class S>
concept Integrable = requires(const S& a, const S& b, double h) {
    { a + b } -> std::convertible_to<S>;
    { a * h } -> std::convertible_to<S>;
    { all_finite(a) } -> std::convertible_to<bool>;
};

// Classic fixed-step RK4 for an autonomous right-hand side f(S) -> S.
// Inputs held constant over the step must be captured by f.
template <Integrable S, class F>
S rk4_step(const S& s, F&& f, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("rk4_step: dt must be positive");
    const S k1 = f(s);
    const S k2 = f(s + k1 * (0.5 * dt));
    const S k3 = f(s + k2 * (0.5 * dt));
    const S k4 = f(s + k3 * dt);
    if (!all_finite(k1) || !all_finite(k2) || !all_finite(k3) || !all_finite(k4))
        throw NumericError("non-finite derivative");
    return s + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
}

}  // namespace dubins
