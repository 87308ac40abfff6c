#include <catch2/catch_amalgamated.hpp>

#include "dubins/dynamics.hpp"
#include "dubins/rk4.hpp"
#include "test_util.hpp"

using namespace dubins;
using Catch::Approx;

TEST_CASE("turn-rate limit from coordinated-turn relation") {
    const VehicleParams p(60.0, 1.0, 32.2, deg2rad(45.0), 134.2);
    CHECK(p.psi_dot_max() == Approx(0.5366666666666666).epsilon(1e-14));
    CHECK(rad2deg(p.psi_dot_max()) == Approx(30.7487).epsilon(1e-5));
    CHECK(p.coordinated_turn_radius() == Approx(111.80124223602483).epsilon(1e-14));
}

TEST_CASE("vehicle parameters reject out-of-range values") {
    CHECK_THROWS_AS(VehicleParams(60.0, 0.0, 32.2, 0.7, 134.2), std::invalid_argument);
    CHECK_THROWS_AS(VehicleParams(60.0, 1.01, 32.2, 0.7, 134.2), std::invalid_argument);
    CHECK_THROWS_AS(VehicleParams(0.0, 1.0, 32.2, 0.7, 134.2), std::invalid_argument);
    CHECK_THROWS_AS(VehicleParams(60.0, 1.0, 32.2, kPi / 2, 134.2), std::invalid_argument);
    CHECK_NOTHROW(VehicleParams(60.0, 1.0, 32.2, 0.7, 134.2));
}

TEST_CASE("complex derivative examples") {
    const VehicleState s{cplx(10.0, -5.0), cplx(60.0, 0.0)};
    const VehicleState d = deriv_complex(s, 0.1, 1.0);
    CHECK(d.r == s.v_a);
    CHECK(d.v_a.real() == Approx(0.0).margin(1e-15));
    CHECK(d.v_a.imag() == Approx(6.0));

    const VehicleState h = deriv_complex(s, 0.1, 0.5);
    CHECK(h.v_a.imag() == Approx(3.0));

    // Heading north, left turn rotates velocity toward -x.
    const VehicleState n = deriv_complex({cplx(), cplx(0.0, 60.0)}, 0.2, 1.0);
    CHECK(n.v_a.real() == Approx(-12.0));
}

TEST_CASE("trig and complex right-hand sides agree") {
    Gen g(11);
    for (int i = 0; i < 500; ++i) {
        const TrigState t{g.uniform(-1e4, 1e4), g.uniform(-1e4, 1e4), g.uniform(1.0, 100.0), g.uniform(-10.0, 10.0)};
        const double u2 = g.uniform(-0.6, 0.6), lam = g.uniform(0.05, 1.0);
        const VehicleState c = deriv_complex(to_complex(t), u2, lam);
        const TrigState d = deriv_trig(t, 0.0, u2, lam);
        CHECK(c.r.real() == Approx(d.x).margin(1e-12 * t.v));
        CHECK(c.r.imag() == Approx(d.y).margin(1e-12 * t.v));
        // v_a' = i psi' v_a when v is constant.
        const cplx expect = kJ * d.psi * std::polar(t.v, t.psi);
        CHECK(std::abs(c.v_a - expect) < 1e-12 * t.v);
    }
}

TEST_CASE("to_complex and from_complex round-trip") {
    Gen g(7);
    for (int i = 0; i < 1000; ++i) {
        const TrigState t{g.uniform(-1e4, 1e4), g.uniform(-1e4, 1e4), g.uniform(1e-3, 200.0), g.uniform(-kPi, kPi)};
        const TrigState b = from_complex(to_complex(t));
        CHECK(b.x == t.x);
        CHECK(b.y == t.y);
        CHECK(b.v == Approx(t.v).epsilon(1e-14));
        CHECK(std::abs(wrap_angle(b.psi - t.psi)) < 1e-14);
    }
    CHECK_THROWS_AS(from_complex({cplx(1.0, 1.0), cplx(0.0, 0.0)}), std::domain_error);
}

TEST_CASE("heading wraps into (-pi, pi]") {
    CHECK(wrap_angle(kPi) == Approx(kPi));
    CHECK(wrap_angle(-kPi) == Approx(kPi));
    CHECK(wrap_angle(3 * kPi / 2) == Approx(-kPi / 2));
    CHECK(wrap_angle(deg2rad(359.0)) == Approx(deg2rad(-1.0)));
    Gen g(3);
    for (int i = 0; i < 1000; ++i) {
        const double w = wrap_angle(g.uniform(-100.0, 100.0));
        CHECK(w > -kPi);
        CHECK(w <= kPi);
    }
}

TEST_CASE("speed is preserved by the complex plant under RK4") {
    VehicleState s{cplx(), std::polar(60.0, 0.3)};
    Gen g(5);
    double u2 = 0.0;
    for (int i = 0; i < 10000; ++i) {
        if (i % 100 == 0) u2 = g.uniform(-0.5, 0.5);
        s = rk4_step(s, [&](const VehicleState& x) { return deriv_complex(x, u2, 0.7); }, 0.01);
    }
    CHECK(std::abs(s.v_a) == Approx(60.0).epsilon(1e-9));
}

TEST_CASE("constant turn closes a circle of radius V / (lambda u2)") {
    const double V = 60.0, u2 = 0.2, lam = 0.5, dt = 0.01;
    const double T = 2 * kPi / (lam * u2);
    VehicleState s{cplx(), cplx(V, 0.0)};
    const int n = static_cast<int>(std::round(T / dt));
    double max_dev = 0.0;
    const cplx centre(0.0, V / (lam * u2));
    for (int i = 0; i < n; ++i) {
        s = rk4_step(s, [&](const VehicleState& x) { return deriv_complex(x, u2, lam); }, dt);
        max_dev = std::max(max_dev, std::abs(std::abs(s.r - centre) - V / (lam * u2)));
    }
    CHECK(max_dev < 1e-6);
    CHECK(std::abs(s.r) < V * dt);
}
