#ifndef DHROM_PRESETS_HPP
#define DHROM_PRESETS_HPP

#include "dhrom/fom.hpp"
#include "dhrom/network.hpp"
#include "dhrom/profile.hpp"

namespace dhrom {
namespace presets {

inline FluidProps water() { return FluidProps{996.7, 4066.7, 0.605, 8.9e-4}; }

// DN25 bonded pipe, 100 m, u = 1.5 m/s: the single-pipe identification case.
inline PipeConfig dn25(double length = 100.0, double velocity = 1.5) {
    PipeConfig c;
    c.geometry = PipeGeometry{length, 14.25e-3, 16.85e-3, 42.0e-3, 45.0e-3, 0.6};
    c.fluid = water();
    c.steel = LayerProps{7900.0, 502.5, 51.0};
    c.insulation = LayerProps{30.0, 1400.0, 0.027};
    c.casing = LayerProps{944.0, 2250.0, 0.43};
    c.soil_conductivity = 1.6;
    c.velocity = velocity;
    return c;
}

// DN40 bonded pipe (catalogue series-1 dimensions).
inline PipeConfig dn40(double length, double velocity = 1.5) {
    PipeConfig c = dn25(length, velocity);
    c.geometry = PipeGeometry{length, 21.6e-3, 24.2e-3, 52.0e-3, 55.0e-3, 0.6};
    return c;
}

// Laboratory rig: 39 m bare steel pipe with Tubolit insulation in ambient air;
// three temperature fields, ambient coupled through an external film.
inline PipeConfig lab_rig(double velocity = 0.27) {
    PipeConfig c;
    c.geometry = PipeGeometry{39.0, 26.24e-3, 30.15e-3, 43.15e-3, 43.16e-3, 43.16e-3};
    c.fluid = water();
    c.steel = LayerProps{7800.0, 480.0, 45.0};
    c.insulation = LayerProps{25.0, 2450.7, 0.04};
    c.field_count = 3;
    c.velocity = velocity;
    c.external_film = 10.0;
    return c;
}

// Producer feeding two consumers through a bifurcation; flows split evenly.
inline NetworkTopology system1() {
    NetworkTopology top;
    PipeConfig p1 = dn40(200.0);
    p1.set_mass_flux(2.1884);
    PipeConfig p2 = dn25(300.0);
    p2.set_mass_flux(1.0942);
    PipeConfig p3 = dn25(500.0);
    p3.set_mass_flux(1.0942);
    top.edges = {PipeEdge{"P1", "producer", "junction", p1},
                 PipeEdge{"P2", "junction", "user1", p2},
                 PipeEdge{"P3", "junction", "user2", p3}};
    return top;
}

// Single DN25 x 100 m pipe between one producer and one consumer.
inline PipeConfig system2() {
    PipeConfig c = dn25(100.0);
    c.set_mass_flux(1.0942);
    return c;
}

// Synthetic 24 h supply profile with hourly breakpoints: plateaus around 80 C
// with gentle multi-hour ramps. Not measured data.
inline InputProfile daily_supply() {
    std::vector<std::pair<double, double>> pts;
    const double hourly[25] = {80, 80, 80, 80, 80, 80,  81, 83, 85, 87, 88, 88, 88,
                               86, 84, 82, 80, 80, 81,  83, 84, 83, 82, 81, 80};
    for (int h = 0; h <= 24; ++h) pts.emplace_back(3600.0 * h, hourly[h]);
    return InputProfile::linear(std::move(pts));
}

// Hourly demand switching between space-heating and hot-water levels.
inline InputProfile scenario2_setpoint() {
    return InputProfile::steps({{0.0, 10.0},
                                {600.0, 35.0},
                                {1200.0, 60.0},
                                {2400.0, 35.0},
                                {3000.0, 60.0},
                                {3300.0, 10.0}});
}

}  // namespace presets
}  // namespace dhrom

#endif
