#include <doctest.h>

#include <cmath>
#include <random>

#include "cec/plant.hpp"

using namespace cec;
using namespace cec::plant;

TEST_SUITE("plant") {

TEST_CASE("benchmark plant definitions") {
    const PlantModel m = benchmark_plant();
    REQUIRE(m.n == 2);
    const std::vector<double> zero{0.0, 0.0};
    CHECK(m.f[0](zero) == doctest::Approx(0.1));
    CHECK(m.f[1](zero) == 0.0);

    const auto dx = derivative(zero, 0.0, 0.0, m, Disturbance{});
    CHECK(dx[0] == doctest::Approx(0.1));
    CHECK(dx[1] == 0.0);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> pick(-10.0, 10.0);
    for (int i = 0; i < 1000; ++i) {
        const std::vector<double> x{pick(rng), pick(rng)};
        CHECK(std::abs(m.f[0](x)) <= 1.0 * (1.0 + x[0] * x[0]));
        const double g1 = m.g[0](x), g2 = m.g[1](x);
        CHECK((g1 >= 4.5 && g1 <= 5.5));
        CHECK((g2 >= 2.8 && g2 <= 3.2));
        const auto check = check_assumptions(x, m);
        CHECK(check.gains_in_bounds);
    }
    CHECK(m.envelope.phi<double>(1, std::vector<double>{1.0, 2.0}) == 6.0);
    CHECK(m.envelope.phi_partial(0, 0, std::vector<double>{1.5, 0.0}) == 3.0);
}

TEST_CASE("disturbance window is closed") {
    Disturbance d;
    d.enabled = true;
    CHECK(d.value(4.999) == 0.0);
    CHECK(d.value(5.0) == 2.0 * std::cos(2.5));
    CHECK(d.value(10.0) == 2.0 * std::cos(5.0));
    CHECK(d.value(10.001) == 0.0);
    d.enabled = false;
    CHECK(d.value(7.0) == 0.0);

    const PlantModel m = benchmark_plant();
    Disturbance on;
    on.enabled = true;
    const std::vector<double> x{0.3, -0.2};
    const auto base = derivative(x, 1.0, 6.0, m, Disturbance{});
    const auto hit = derivative(x, 1.0, 6.0, m, on);
    CHECK(hit[0] == base[0]);
    CHECK(hit[1] - base[1] == doctest::Approx(2.0 * std::cos(3.0)));
}

TEST_CASE("named plants") {
    CHECK(make_plant("benchmark2").n == 2);
    CHECK(make_plant("integrator-chain-3").n == 3);
    CHECK(make_plant("pure-chain-2").f[0](std::vector<double>{4.0, 1.0}) == 0.0);
    CHECK_THROWS_AS(make_plant("integrator-chain-x"), ConfigError);
    CHECK_THROWS_AS(make_plant("integrator-chain-1"), ConfigError);
    CHECK_THROWS_AS(make_plant("pendulum"), ConfigError);
}

TEST_CASE("rk4 accuracy") {
    const auto growth = [](double, std::span<const double> y) { return std::vector<double>{y[0]}; };
    const std::vector<double> one{1.0};
    CHECK(std::abs(rk4_step(one, 0.0, 0.1, growth)[0] - std::exp(0.1)) < 1e-7);

    const auto still = [](double, std::span<const double> y) { return std::vector<double>(y.size(), 0.0); };
    const std::vector<double> y{0.3, -2.0};
    CHECK(rk4_step(y, 0.0, 0.5, still) == y);

    const auto rotate = [](double, std::span<const double> y) { return std::vector<double>{-y[1], y[0]}; };
    for (double h : {0.1, 0.05}) {
        std::vector<double> s{1.0, 0.0};
        s = rk4_step(s, 0.0, h, rotate);
        const double drift = std::abs(std::hypot(s[0], s[1]) - 1.0);
        // One step loses h^6/144 of the radius.
        CHECK(drift == doctest::Approx(std::pow(h, 6) / 144.0).epsilon(0.01));
    }

    const auto blowup = [](double, std::span<const double> y) { return std::vector<double>{y[0] * 1e308}; };
    CHECK_THROWS_AS(rk4_step(std::vector<double>{10.0}, 0.0, 1.0, blowup), NonFinite);
}

TEST_CASE("integrator configuration") {
    IntegratorConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(c.steps() == 20000);
    c.horizon = 20.0005;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.horizon = 1.0;
    c.step = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

}  // TEST_SUITE
