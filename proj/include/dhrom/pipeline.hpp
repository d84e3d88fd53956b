#ifndef DHROM_PIPELINE_HPP
#define DHROM_PIPELINE_HPP

#include <map>
#include <string>
#include <utility>

#include "dhrom/fom.hpp"
#include "dhrom/network.hpp"
#include "dhrom/rom.hpp"

namespace dhrom {

// Default training windows: the inlet response settles within a few transport
// times, the ground response within hours.
inline double default_t_max_inlet(const PipeConfig& config) {
    return 5.0 * config.geometry.length / config.velocity;
}
constexpr double default_t_max_ground = 9000.0;

// Largest step satisfying the stability bound with margin, snapped so that the
// sample grid is uniform.
inline double training_dt(const PipeConfig& config, double dx) {
    return 0.45 * max_stable_dt(config, dx);
}

// FOM unit-step response of the outlet in deviation form: T_in = 1 (Inlet) or
// T_g = 1 (Ground), everything else at the zero reference.
inline SimResult step_response(const PipeConfig& config, double dx, double dt, double t_end,
                               TransferFunction::Kind kind) {
    const int nodes = static_cast<int>(std::llround(config.geometry.length / dx)) + 1;
    const LinearSystem sys = assemble(config, Discretization{nodes, dt});
    const bool inlet = kind == TransferFunction::Kind::Inlet;
    return simulate(sys, uniform_state(sys, 0.0), InputProfile::constant(inlet ? 1.0 : 0.0),
                    InputProfile::constant(inlet ? 0.0 : 1.0), dt, t_end);
}

// Full identification of one transfer function from a fresh FOM run.
inline TransferFunction identify_pipe(const PipeConfig& config, double dx, int order,
                                      double t_max, TransferFunction::Kind kind,
                                      double alpha_ref = 0.9) {
    const double dt = training_dt(config, dx);
    const SimResult run = step_response(config, dx, dt, t_max, kind);
    return identify(run.times, run.outlet, kind, order, t_max, alpha_ref);
}

// Fit quality against the training response on its own grid.
inline double reconstruction_rmse(const TransferFunction& tf, const SimResult& run) {
    std::vector<double> reconstructed;
    reconstructed.reserve(run.times.size());
    for (double t : run.times) reconstructed.push_back(tf(t));
    return rmse(reconstructed, run.outlet);
}

// Identifies both transfer functions for every edge of a network; the result
// plugs directly into SimulationPlan::transfer_functions.
inline std::map<std::string, std::pair<TransferFunction, TransferFunction>> identify_edges(
    const NetworkTopology& topology, double dx, int order_inlet, int order_ground,
    double t_max_ground = default_t_max_ground) {
    std::map<std::string, std::pair<TransferFunction, TransferFunction>> out;
    for (const auto& edge : topology.edges) {
        TransferFunction f1 = identify_pipe(edge.pipe, dx, order_inlet,
                                            default_t_max_inlet(edge.pipe),
                                            TransferFunction::Kind::Inlet);
        TransferFunction f2 = identify_pipe(edge.pipe, dx, order_ground, t_max_ground,
                                            TransferFunction::Kind::Ground);
        out.emplace(edge.name, std::make_pair(std::move(f1), std::move(f2)));
    }
    return out;
}

}  // namespace dhrom

#endif
