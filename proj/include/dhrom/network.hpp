#ifndef DHROM_NETWORK_HPP
#define DHROM_NETWORK_HPP

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dhrom/fom.hpp"
#include "dhrom/rom.hpp"

namespace dhrom {

struct PipeEdge {
    std::string name;
    std::string upstream;
    std::string downstream;
    PipeConfig pipe;  // velocity derived from mass_flux
};

// Directed acyclic pipe network with a single producer source node.
struct NetworkTopology {
    std::vector<PipeEdge> edges;

    std::vector<std::string> node_names() const {
        std::set<std::string> names;
        for (const auto& e : edges) {
            names.insert(e.upstream);
            names.insert(e.downstream);
        }
        return {names.begin(), names.end()};
    }

    // Topological edge order; throws on cycles, junction mass imbalance or
    // multiple source nodes.
    std::vector<std::size_t> validate() const {
        if (edges.empty()) throw std::invalid_argument("NetworkTopology: no edges");
        std::map<std::string, double> inflow, outflow;
        std::map<std::string, int> indegree;
        for (const auto& e : edges) {
            indegree.try_emplace(e.upstream, 0);
            ++indegree[e.downstream];
            inflow[e.downstream] += e.pipe.mass_flux();
            outflow[e.upstream] += e.pipe.mass_flux();
        }
        int sources = 0;
        for (const auto& [node, deg] : indegree) {
            if (deg == 0) ++sources;
            if (deg > 0 && outflow.count(node)) {
                const double in = inflow[node], out = outflow[node];
                if (std::abs(in - out) > 1e-9 * std::max(in, out))
                    throw std::invalid_argument("NetworkTopology: mass imbalance at node '" +
                                                node + "'");
            }
        }
        if (sources != 1)
            throw std::invalid_argument("NetworkTopology: expected exactly one producer node, found " +
                                        std::to_string(sources));

        // Kahn's algorithm on edges
        std::map<std::string, int> remaining = indegree;
        std::vector<std::size_t> order;
        std::vector<bool> done(edges.size(), false);
        bool progress = true;
        while (order.size() < edges.size() && progress) {
            progress = false;
            for (std::size_t i = 0; i < edges.size(); ++i) {
                if (done[i] || remaining[edges[i].upstream] != 0) continue;
                order.push_back(i);
                done[i] = true;
                --remaining[edges[i].downstream];
                progress = true;
            }
        }
        if (order.size() != edges.size())
            throw std::invalid_argument("NetworkTopology: cyclic topology");
        return order;
    }

    std::string producer() const {
        std::map<std::string, int> indegree;
        for (const auto& e : edges) {
            indegree.try_emplace(e.upstream, 0);
            ++indegree[e.downstream];
        }
        for (const auto& [node, deg] : indegree)
            if (deg == 0) return node;
        throw std::invalid_argument("NetworkTopology: no producer node");
    }
};

enum class Backend { Fom, Rom };

struct SimulationPlan {
    double dt;
    double t_end;
    Backend backend = Backend::Fom;
    double t0;   // shared uniform initial temperature
    double t_g;  // shared constant ground temperature
    InputProfile supply;  // piecewise-linear producer temperature
    std::map<std::string, double> fom_dx;  // per-edge cell size (FOM backend)
    std::map<std::string, std::pair<TransferFunction, TransferFunction>> transfer_functions;
    bool one_step_delay = false;  // sensitivity option; default is direct feed-through
};

struct NetworkResult {
    std::vector<double> times;
    std::map<std::string, std::vector<double>> outlet;  // per edge name
};

// Projects a time series onto a target grid by linear interpolation.
inline std::vector<double> project_linear(const std::vector<double>& times,
                                          const std::vector<double>& values,
                                          const std::vector<double>& target) {
    if (times.empty() || times.size() != values.size())
        throw std::invalid_argument("project_linear: malformed source series");
    for (double t : target)
        if (t < times.front() - 1e-12 || t > times.back() + 1e-12)
            throw std::out_of_range("project_linear: target grid requires extrapolation");
    std::vector<double> out;
    out.reserve(target.size());
    for (double t : target) out.push_back(detail::lerp_series(times, values, t));
    return out;
}

// Steps every pipe model in topological order; the upstream outlet at t_k
// feeds the downstream inlet at the same time level unless one_step_delay is set.
inline NetworkResult simulate_network(const NetworkTopology& topology,
                                      const SimulationPlan& plan) {
    const auto order = topology.validate();
    const std::string producer = topology.producer();
    const std::size_t n_steps = static_cast<std::size_t>(std::llround(plan.t_end / plan.dt));

    struct EdgeModel {
        const PipeEdge* edge;
        std::optional<LinearSystem> sys;
        std::optional<StateVector> state;
        std::optional<RomState> rom;
        double outlet_now;
        double outlet_prev;
    };
    std::vector<EdgeModel> models;
    models.reserve(topology.edges.size());
    for (std::size_t i : order) {
        const auto& e = topology.edges[i];
        EdgeModel m{&e, {}, {}, {}, plan.t0, plan.t0};
        if (plan.backend == Backend::Fom) {
            auto it = plan.fom_dx.find(e.name);
            if (it == plan.fom_dx.end())
                throw std::invalid_argument("simulate_network: no dx for edge '" + e.name + "'");
            const int nodes =
                static_cast<int>(std::llround(e.pipe.geometry.length / it->second)) + 1;
            m.sys = assemble(e.pipe, Discretization{nodes, plan.dt});
            if (plan.dt > m.sys->dt_max)
                throw std::invalid_argument("simulate_network: dt " + std::to_string(plan.dt) +
                                            " violates dt_max " + std::to_string(m.sys->dt_max) +
                                            " of edge '" + e.name + "'");
            const double positivity = m.sys->dt_positive();
            if (plan.dt > positivity * (1.0 + 1e-12))
                throw std::invalid_argument(
                    "simulate_network: dt " + std::to_string(plan.dt) +
                    " violates the positivity bound " + std::to_string(positivity) +
                    " of edge '" + e.name + "'; sharp fronts would oscillate");
            m.state = uniform_state(*m.sys, plan.t0);
        } else {
            auto it = plan.transfer_functions.find(e.name);
            if (it == plan.transfer_functions.end())
                throw std::invalid_argument(
                    "simulate_network: missing identified transfer functions for edge '" +
                    e.name + "'; run identification first");
            m.rom.emplace(it->second.first, it->second.second, plan.t0, plan.dt, n_steps + 1);
        }
        models.push_back(std::move(m));
    }

    NetworkResult result;
    result.times.reserve(n_steps + 1);
    for (const auto& m : models) result.outlet[m.edge->name].reserve(n_steps + 1);

    std::vector<double> scratch;
    for (std::size_t k = 0; k <= n_steps; ++k) {
        const double t = static_cast<double>(k) * plan.dt;
        result.times.push_back(t);

        std::map<std::string, double> node_temp;
        node_temp[producer] = plan.supply.value(t);
        for (auto& m : models) {
            result.outlet[m.edge->name].push_back(m.outlet_now);
            node_temp[m.edge->downstream] =
                plan.one_step_delay ? m.outlet_prev : m.outlet_now;
        }
        if (k == n_steps) break;

        for (auto& m : models) {
            const double t_in = node_temp.at(m.edge->upstream);
            m.outlet_prev = m.outlet_now;
            if (m.sys) {
                step(*m.sys, *m.state, t_in, plan.t_g, plan.dt, scratch);
                m.outlet_now = m.state->values[m.sys->output_index];
            } else {
                m.outlet_now = plan.t0 + m.rom->step(t_in, plan.t_g);
            }
        }
    }
    return result;
}

}  // namespace dhrom

#endif
