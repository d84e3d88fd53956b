#ifndef DHROM_COSTMODEL_HPP
#define DHROM_COSTMODEL_HPP

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dhrom/fom.hpp"
#include "dhrom/rom.hpp"

namespace dhrom {

// Flop counts of the two stepping kernels: 2P(P+2) per FOM step, 2k+1 per ROM
// step with constant ground temperature.
inline double c_fom(double dofs, double steps) {
    if (dofs < 1 || steps < 1) throw std::invalid_argument("c_fom: P and Q must be at least 1");
    return 2.0 * dofs * (dofs + 2.0) * steps;
}

inline double c_rom(double steps) {
    if (steps < 1) throw std::invalid_argument("c_rom: Q must be at least 1");
    return (steps + 1.0) * (steps + 1.0) - 1.0;
}

// DOF threshold above which the FOM is always more expensive.
inline double p_min(double steps) { return (steps + 1.0) / std::sqrt(2.0 * steps); }

// Step-count threshold below which the ROM is cheaper; ~2P^2 for large P.
inline double q_max(double dofs) {
    return dofs * (dofs + std::sqrt(dofs * dofs - 1.0) - 1.0);
}

inline double ratio(double dofs, double steps) {
    return 2.0 * dofs * dofs * steps / ((steps + 1.0) * (steps + 1.0));
}

// Overhead-adjusted improvement factor; equals the flop ratio when C_OV = 0.
inline double adjusted_ratio(double flop_ratio, double rom_cost, double overhead_cost) {
    if (rom_cost <= 0 || overhead_cost < 0)
        throw std::invalid_argument("adjusted_ratio: invalid costs");
    const double a = rom_cost / (overhead_cost + rom_cost);
    return a * (flop_ratio - 1.0) + 1.0;
}

struct CostReport {
    double dofs;
    double steps;
    double fom_flops;
    double rom_flops;
    double dof_threshold;
    double step_threshold;
    double improvement;
};

inline CostReport cost_report(double dofs, double steps) {
    return CostReport{dofs,        steps,       c_fom(dofs, steps), c_rom(steps),
                      p_min(steps), q_max(dofs), ratio(dofs, steps)};
}

struct BenchResult {
    int runs;
    std::vector<double> wall_times;  // s
    double mean;
    double best;
    double worst;
};

namespace detail {

template <class Kernel>
BenchResult bench_kernel(Kernel&& kernel, int runs) {
    if (runs < 1) throw std::invalid_argument("bench: need at least one run");
    kernel();  // warm-up, discarded
    BenchResult result{runs, {}, 0.0, 0.0, 0.0};
    result.wall_times.reserve(runs);
    for (int r = 0; r < runs; ++r) {
        const auto start = std::chrono::steady_clock::now();
        kernel();
        const auto stop = std::chrono::steady_clock::now();
        result.wall_times.push_back(std::chrono::duration<double>(stop - start).count());
    }
    result.best = result.worst = result.wall_times.front();
    for (double t : result.wall_times) {
        result.mean += t;
        result.best = std::min(result.best, t);
        result.worst = std::max(result.worst, t);
    }
    result.mean /= runs;
    return result;
}

}  // namespace detail

// Wall-clock timing of the pure FOM stepping loop; assembly is excluded.
inline BenchResult bench_fom(const LinearSystem& sys, double t_in, double t_g, double dt,
                             int steps, int runs) {
    std::vector<double> scratch;
    volatile double sink = 0.0;
    return detail::bench_kernel(
        [&] {
            StateVector state = uniform_state(sys, 0.0);
            for (int j = 0; j < steps; ++j) step(sys, state, t_in, t_g, dt, scratch);
            sink = state.values[sys.output_index];
        },
        runs);
}

// Wall-clock timing of the rolling ROM propagation for `steps` levels.
inline BenchResult bench_rom(const TransferFunction& f1, const TransferFunction& f2, double dt,
                             int steps, int runs) {
    volatile double sink = 0.0;
    return detail::bench_kernel(
        [&] {
            RomState state(f1, f2, 0.0, dt, static_cast<std::size_t>(steps));
            double acc = 0.0;
            for (int j = 0; j < steps; ++j)
                acc = state.step(std::sin(0.01 * j), 0.0);  // varying input, constant ground
            sink = acc;
        },
        runs);
}

}  // namespace dhrom

#endif
