#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dhrom/control.hpp"

using namespace dhrom;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Delayed first-order lag F(t) = H(t - d) (1 - exp(-(t-d)/tau)); the delay is
// what lets a proportional loop sustain oscillation.
TransferFunction delayed_tf(double delay, double tau, double gain, int order, double t_max) {
    std::vector<double> times, response;
    for (double t = 0.0; t <= t_max + 1e-9; t += 0.05) {
        times.push_back(t);
        response.push_back(t <= delay ? 0.0 : gain * (1.0 - std::exp(-(t - delay) / tau)));
    }
    return identify(times, response, TransferFunction::Kind::Inlet, order, t_max);
}

// Plain first-order plant dx/dt = (u - x)/tau stepped by explicit Euler.
struct FirstOrderPlant {
    double tau = 30.0;
    double dt = 1.0;
    double x = 0.0;
    void reset() { x = 0.0; }
    double step(double t_in, double) {
        x += dt * (t_in - x) / tau;
        return x;
    }
};

RomPlant make_plant(double dt, std::size_t horizon) {
    static const TransferFunction f1 = delayed_tf(20.0, 25.0, 1.0, 64, 400.0);
    static const TransferFunction f2 = delayed_tf(500.0, 2000.0, 0.004, 16, 9000.0);
    return RomPlant(f1, f2, dt, horizon);
}

}  // namespace

TEST_CASE("pi_step") {
    PIGains gains{0.5, 0.0};
    ControllerState ctrl;
    SECTION("zero error gives zero output") {
        for (int k = 0; k < 5; ++k) CHECK(pi_step(ctrl, gains, 0.0, 1.0) == 0.0);
    }
    SECTION("pure proportional") {
        CHECK_THAT(pi_step(ctrl, gains, 2.0, 1.0), WithinAbs(1.0, 1e-15));
    }
    SECTION("integral accumulates by the rectangle rule") {
        PIGains pi{0.0, 0.1};
        CHECK_THAT(pi_step(ctrl, pi, 2.0, 1.0), WithinAbs(0.2, 1e-15));
        CHECK_THAT(pi_step(ctrl, pi, 2.0, 1.0), WithinAbs(0.4, 1e-15));
    }
    SECTION("anti-windup clamps the integral at the bound") {
        PIGains pi{0.0, 1.0};
        ctrl.max_output = 1.0;
        for (int k = 0; k < 10; ++k) CHECK(pi_step(ctrl, pi, 5.0, 1.0) <= 1.0);
        CHECK_THAT(ctrl.integral, WithinAbs(1.0, 1e-12));
        // recovery is immediate once the error reverses
        CHECK(pi_step(ctrl, pi, -0.5, 1.0) < 1.0);
    }
    SECTION("dt validation") {
        CHECK_THROWS_AS(pi_step(ctrl, gains, 1.0, 0.0), std::invalid_argument);
    }
}

TEST_CASE("ziegler_nichols tuning rule") {
    const PIGains g = ziegler_nichols(1.055, 152.7);
    CHECK_THAT(g.k_p, WithinRel(0.45 * 1.055, 1e-15));
    CHECK_THAT(g.k_i, WithinRel(0.54 * 1.055 / 152.7, 1e-15));
    CHECK_THAT(g.k_p, WithinAbs(0.4748, 5e-4));
    CHECK_THAT(g.k_i, WithinAbs(0.0037, 5e-5));

    const PIGains unit = ziegler_nichols(1.0, 1.0);
    CHECK_THAT(unit.k_p, WithinRel(0.45, 1e-15));
    CHECK_THAT(unit.k_i, WithinRel(0.54, 1e-15));

    const PIGains twice = ziegler_nichols(2.11, 152.7 * 2);
    CHECK_THAT(twice.k_p / g.k_p, WithinRel(2.0, 1e-12));
    CHECK_THAT(twice.k_i / g.k_i, WithinRel(1.0, 1e-12));

    CHECK_THROWS_AS(ziegler_nichols(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("first-order loops cannot sustain oscillation") {
    FirstOrderPlant plant;
    CHECK_THROWS_AS(find_ultimate_gain(plant, 0.5, 50.0, 10.0, 0.0, 1.0, 600.0),
                    std::runtime_error);
}

TEST_CASE("ultimate gain of a delayed plant") {
    RomPlant plant = make_plant(1.0, 4001);
    const UltimateGain ug = find_ultimate_gain(plant, 0.2, 5.0, 30.0, 0.0, 1.0, 4000.0);
    CHECK(ug.k_u > 0.2);
    CHECK(ug.k_u < 5.0);
    CHECK(ug.tau_u > 0.0);

    // at K_u the loop oscillates with near-constant amplitude; well below it decays
    plant.reset();
    const auto below = run_closed_loop(plant, PIGains{0.3 * ug.k_u, 0.0},
                                       InputProfile::constant(30.0), 0.0, 1.0, 4000.0);
    const auto tail_peak = [](const std::vector<double>& y) {
        double peak = 0.0;
        for (std::size_t i = y.size() / 2; i < y.size(); ++i)
            peak = std::max(peak, std::abs(y[i] - y.back()));
        return peak;
    };
    CHECK(tail_peak(below.output) < 1.0);
}

TEST_CASE("optimize_ki locates the overshoot boundary") {
    RomPlant plant = make_plant(1.0, 3001);
    const double k_p = 0.3;
    const double best =
        optimize_ki(plant, k_p, 1e-4, 0.05, 30.0, 0.0, 1.0, 3000.0, 0.5);
    CHECK(best > 1e-4);
    CHECK(best < 0.05);

    auto overshoot = [&](double k_i) {
        plant.reset();
        const auto run = run_closed_loop(plant, PIGains{k_p, k_i},
                                         InputProfile::constant(30.0), 0.0, 1.0, 3000.0);
        double peak = 0.0;
        for (double y : run.output) peak = std::max(peak, y - 30.0);
        return peak;
    };
    CHECK(overshoot(best) <= 0.5);
    CHECK(overshoot(best + 2e-4) > 0.5 - 1e-9);

    SECTION("bracket validation") {
        CHECK_THROWS_AS(optimize_ki(plant, k_p, 1e-5, 2e-5, 30.0, 0.0, 1.0, 3000.0, 0.5),
                        std::runtime_error);
    }
}

TEST_CASE("closed loop eliminates steady-state error") {
    FirstOrderPlant plant;
    const auto run = run_closed_loop(plant, PIGains{0.5, 0.05}, InputProfile::constant(20.0),
                                     0.0, 1.0, 2000.0);
    CHECK_THAT(run.output.back(), WithinAbs(20.0, 0.1));

    SECTION("determinism") {
        FirstOrderPlant again;
        const auto rerun = run_closed_loop(again, PIGains{0.5, 0.05},
                                           InputProfile::constant(20.0), 0.0, 1.0, 2000.0);
        CHECK(rerun.output == run.output);
        CHECK(rerun.input == run.input);
    }
}

TEST_CASE("scenario metrics") {
    RomPlant plant = make_plant(1.0, 4001);
    const InputProfile setpoint = InputProfile::steps({{0.0, 10.0}, {1500.0, 30.0}});
    const ScenarioResult res =
        run_scenario(plant, PIGains{0.3, 0.004}, setpoint, 0.0, 1.0, 4000.0);
    REQUIRE(res.segments.size() == 2);
    CHECK(res.segments[0].setpoint == 10.0);
    CHECK(res.segments[1].setpoint == 30.0);
    CHECK(std::isfinite(res.segments[1].settling_time));
    CHECK(res.segments[1].overshoot < 2.0);
    // settled output sits inside the band at the end of each segment
    CHECK_THAT(res.series.output.back(), WithinAbs(30.0, 1.0));
}
