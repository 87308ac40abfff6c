#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dubins {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kJ{0.0, 1.0};

// Result lies in (-pi, pi].
inline double wrap_angle(double a) {
    double w = std::remainder(a, 2.0 * kPi);
    if (w <= -kPi) w += 2.0 * kPi;
    return w;
}

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

inline bool finite(double x) { return std::isfinite(x); }
inline bool finite(const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Exit code 1 at the CLI.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Exit code 2 at the CLI. step is -1 when not tied to a simulation step.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, long step = -1)
        : std::runtime_error(step < 0 ? what : what + " at step " + std::to_string(step)),
          step_(step) {}
    long step() const noexcept { return step_; }

private:
    long step_;
};

// Exit code 3 at the CLI.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace dubins
