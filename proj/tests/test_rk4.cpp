#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <limits>

#include "dubins/rk4.hpp"

using namespace dubins;

namespace {
struct Scalar {
    double x;
};
Scalar operator+(Scalar a, Scalar b) { return {a.x + b.x}; }
Scalar operator*(Scalar a, double h) { return {a.x * h}; }
bool all_finite(Scalar a) { return std::isfinite(a.x); }

struct Osc {
    double q, p;
};
Osc operator+(Osc a, Osc b) { return {a.q + b.q, a.p + b.p}; }
Osc operator*(Osc a, double h) { return {a.q * h, a.p * h}; }
bool all_finite(Osc a) { return std::isfinite(a.q) && std::isfinite(a.p); }

double decay_error(double dt) {
    Scalar s{1.0};
    const int n = static_cast<int>(std::round(1.0 / dt));
    for (int i = 0; i < n; ++i) s = rk4_step(s, [](Scalar y) { return Scalar{-2.0 * y.x}; }, dt);
    return std::abs(s.x - std::exp(-2.0));
}
}  // namespace

TEST_CASE("single step matches the RK4 tableau on y' = y") {
    const double h = 0.1;
    const Scalar s = rk4_step(Scalar{1.0}, [](Scalar y) { return y; }, h);
    CHECK(s.x == Catch::Approx(1.0 + h + h * h / 2 + h * h * h / 6 + h * h * h * h / 24).epsilon(1e-15));
}

TEST_CASE("global error is fourth order") {
    const double e1 = decay_error(0.1), e2 = decay_error(0.05), e3 = decay_error(0.025);
    CHECK(std::log2(e1 / e2) == Catch::Approx(4.0).margin(0.15));
    CHECK(std::log2(e2 / e3) == Catch::Approx(4.0).margin(0.15));
}

TEST_CASE("harmonic oscillator energy drift is small") {
    Osc s{1.0, 0.0};
    for (int i = 0; i < 100000; ++i) s = rk4_step(s, [](Osc y) { return Osc{y.p, -y.q}; }, 0.01);
    CHECK(std::abs(0.5 * (s.q * s.q + s.p * s.p) - 0.5) < 1e-9);
}

TEST_CASE("non-finite derivative and bad step are reported") {
    CHECK_THROWS_AS(rk4_step(Scalar{1.0}, [](Scalar) { return Scalar{std::nan("")}; }, 0.1), NumericError);
    CHECK_THROWS_AS(rk4_step(Scalar{1.0}, [](Scalar y) { return Scalar{1.0 / (y.x - 1.0)}; }, 0.1), NumericError);
    CHECK_THROWS_AS(rk4_step(Scalar{1.0}, [](Scalar y) { return y; }, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(rk4_step(Scalar{1.0}, [](Scalar y) { return y; }, -0.1), std::invalid_argument);
}
