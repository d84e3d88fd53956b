// Command-line front end: pipe simulation, transfer-function identification,
// network runs, controller tuning and cost reports.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dhrom/config.hpp"
#include "dhrom/control.hpp"
#include "dhrom/costmodel.hpp"
#include "dhrom/io.hpp"
#include "dhrom/network.hpp"
#include "dhrom/pipeline.hpp"
#include "dhrom/presets.hpp"

namespace {

using namespace dhrom;

std::string join(const std::string& dir, const std::string& file) {
    return (std::filesystem::path(dir) / file).string();
}

InputProfile sample_zoh(const InputProfile& profile, double dt, double t_end) {
    std::vector<std::pair<double, double>> pts;
    for (double t = 0.0; t <= t_end + 1e-9; t += dt) pts.emplace_back(t, profile.value(t));
    return InputProfile::steps(std::move(pts));
}

int cmd_fom_sim(const ProjectConfig& cfg, const std::string& pipe_name,
                const std::string& inlet_name, const std::string& ground_name, double dx,
                double dt, double t_end, const std::string& out_dir) {
    const PipeConfig& pipe = cfg.pipe(pipe_name);
    const int nodes = static_cast<int>(std::llround(pipe.geometry.length / dx)) + 1;
    const double dt_max = max_stable_dt(pipe, pipe.geometry.length / (nodes - 1));
    if (dt <= 0) dt = 0.9 * dt_max;
    std::printf("dt_max = %.6g s, dt = %.6g s\n", dt_max, dt);
    if (dt > dt_max) {
        std::fprintf(stderr, "error: dt %g exceeds the stability bound dt_max %g\n", dt, dt_max);
        return 3;
    }
    const LinearSystem sys = assemble(pipe, Discretization{nodes, dt});
    const InputProfile& t_in = cfg.profile(inlet_name);
    const InputProfile& t_g = cfg.profile(ground_name);
    const SimResult run = simulate(sys, uniform_state(sys, t_in.value(0.0)), t_in, t_g, dt, t_end);
    write_csv(join(out_dir, "fom_sim.csv"), {"t", "T_out"}, {run.times, run.outlet});
    std::printf("wrote %s (%zu rows)\n", join(out_dir, "fom_sim.csv").c_str(), run.times.size());
    return 0;
}

int cmd_identify(const ProjectConfig& cfg, const std::string& pipe_name, double dx, int n1,
                 int n2, double t_max1, double t_max2, const std::string& sweep,
                 const std::string& out_dir) {
    const PipeConfig& pipe = cfg.pipe(pipe_name);
    if (t_max1 <= 0) t_max1 = default_t_max_inlet(pipe);
    const double dt = training_dt(pipe, dx);
    const SimResult run1 = step_response(pipe, dx, dt, t_max1, TransferFunction::Kind::Inlet);
    const SimResult run2 = step_response(pipe, dx, dt, t_max2, TransferFunction::Kind::Ground);

    if (!sweep.empty()) {
        int lo = 0, hi = 0, stride = 0;
        if (std::sscanf(sweep.c_str(), "%d:%d:%d", &lo, &hi, &stride) != 3 || stride <= 0 ||
            lo < 2 || hi < lo) {
            std::fprintf(stderr, "error: --sweep expects lo:hi:stride with lo >= 2\n");
            return 2;
        }
        std::vector<double> orders, err1, err2;
        for (int n = lo; n <= hi; n += stride) {
            orders.push_back(n);
            err1.push_back(reconstruction_rmse(
                identify(run1.times, run1.outlet, TransferFunction::Kind::Inlet, n, t_max1),
                run1));
            err2.push_back(reconstruction_rmse(
                identify(run2.times, run2.outlet, TransferFunction::Kind::Ground, n, t_max2),
                run2));
        }
        write_csv(join(out_dir, "rmse_curve.csv"), {"N", "rmse_f1", "rmse_f2"},
                  {orders, err1, err2});
        std::printf("wrote %s\n", join(out_dir, "rmse_curve.csv").c_str());
        return 0;
    }

    const TransferFunction f1 =
        identify(run1.times, run1.outlet, TransferFunction::Kind::Inlet, n1, t_max1);
    const TransferFunction f2 =
        identify(run2.times, run2.outlet, TransferFunction::Kind::Ground, n2, t_max2);
    const std::string fp = config_fingerprint(pipe);
    save_transfer_function(join(out_dir, pipe_name + "_f1.tf"), f1, fp);
    save_transfer_function(join(out_dir, pipe_name + "_f2.tf"), f2, fp);
    std::printf("F1: N=%d rmse=%.3e asymptote=%.6g\n", n1, reconstruction_rmse(f1, run1),
                f1.asymptote());
    std::printf("F2: N=%d rmse=%.3e asymptote=%.6g\n", n2, reconstruction_rmse(f2, run2),
                f2.asymptote());
    return 0;
}

int cmd_rom_sim(const ProjectConfig& cfg, const std::string& f1_path, const std::string& f2_path,
                const std::string& inlet_name, const std::string& ground_name, double t0,
                double dt, double t_end, const std::string& out_dir) {
    const StoredTransferFunction f1 = load_transfer_function(f1_path);
    const StoredTransferFunction f2 = load_transfer_function(f2_path);
    if (f1.fingerprint != f2.fingerprint) {
        std::fprintf(stderr, "error: transfer functions belong to different pipes\n");
        return 2;
    }
    const InputProfile& t_in = cfg.profile(inlet_name);
    const InputProfile& t_g = cfg.profile(ground_name);
    const std::size_t steps = static_cast<std::size_t>(std::llround(t_end / dt));
    RomState state(f1.tf, f2.tf, t0, dt, steps + 1);
    std::vector<double> times{0.0}, outlet{t0};
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double out = t0 + state.step(t_in.value(t), t_g.value(t));
        times.push_back(t + dt);
        outlet.push_back(out);
    }
    write_csv(join(out_dir, "rom_sim.csv"), {"t", "T_out"}, {times, outlet});
    std::printf("wrote %s (%zu rows)\n", join(out_dir, "rom_sim.csv").c_str(), times.size());
    return 0;
}

int cmd_network_sim(const ProjectConfig& cfg, const std::string& network_name,
                    const std::string& backend, const std::string& supply_name, double t0,
                    double t_g, double dt, double t_end, double dx, int n1, int n2,
                    bool benchmark, const std::string& out_dir) {
    const NetworkTopology& top = cfg.network(network_name);
    SimulationPlan plan;
    plan.dt = dt;
    plan.t_end = t_end;
    plan.t0 = t0;
    plan.t_g = t_g;
    plan.supply = sample_zoh(cfg.profile(supply_name), dt, t_end);
    if (backend == "fom") {
        plan.backend = Backend::Fom;
        for (const auto& e : top.edges) plan.fom_dx[e.name] = dx;
    } else if (backend == "rom") {
        plan.backend = Backend::Rom;
        plan.transfer_functions = identify_edges(top, 0.5, n1, n2);
    } else {
        std::fprintf(stderr, "error: --backend must be fom or rom\n");
        return 2;
    }
    const NetworkResult run = simulate_network(top, plan);
    for (const auto& [name, series] : run.outlet) {
        write_csv(join(out_dir, "network_" + name + ".csv"), {"t", "T_out"},
                  {run.times, series});
        std::printf("wrote %s\n", join(out_dir, "network_" + name + ".csv").c_str());
    }
    if (benchmark && backend == "rom") {
        SimulationPlan ref = plan;
        ref.backend = Backend::Fom;
        ref.transfer_functions.clear();
        double bound = std::numeric_limits<double>::infinity();
        for (const auto& e : top.edges) {
            ref.fom_dx[e.name] = dx;
            const int nodes = static_cast<int>(std::llround(e.pipe.geometry.length / dx)) + 1;
            const LinearSystem sys = assemble(e.pipe, Discretization{nodes, 1e-3});
            bound = std::min(bound, std::min(sys.dt_max, sys.dt_positive()));
        }
        ref.dt = std::min(plan.dt, 0.9 * bound);
        std::printf("reference grid: dx = %g m, dt = %.6g s\n", dx, ref.dt);
        const NetworkResult fom = simulate_network(top, ref);
        for (const auto& [name, series] : run.outlet) {
            const auto projected = project_linear(run.times, series, fom.times);
            std::printf("rmse %s = %.4e\n", name.c_str(),
                        rmse(projected, fom.outlet.at(name)));
        }
    }
    return 0;
}

int cmd_control(const ProjectConfig& cfg, const std::string& pipe_name, bool tune,
                bool optimize, double k_p, double k_i, const std::string& setpoint_name,
                double t_g, double dt, double horizon, const std::string& out_dir) {
    const PipeConfig& pipe = cfg.pipe(pipe_name);
    const TransferFunction f1 = identify_pipe(pipe, 0.5, 48, default_t_max_inlet(pipe),
                                              TransferFunction::Kind::Inlet);
    const TransferFunction f2 =
        identify_pipe(pipe, 0.5, 16, default_t_max_ground, TransferFunction::Kind::Ground);
    const std::size_t steps = static_cast<std::size_t>(std::llround(horizon / dt));
    RomPlant plant(f1, f2, dt, steps + 1);

    if (tune) {
        const UltimateGain ug = find_ultimate_gain(plant, 0.2, 5.0, 60.0, t_g, dt, horizon);
        const PIGains gains = ziegler_nichols(ug.k_u, ug.tau_u);
        std::printf("K_u = %.6g\ntau_u = %.6g s\nK_p = %.6g\nK_i = %.6g\n", ug.k_u, ug.tau_u,
                    gains.k_p, gains.k_i);
        return 0;
    }
    if (optimize) {
        const double best = optimize_ki(plant, k_p, 0.002, 0.01, 60.0, t_g, dt, horizon);
        std::printf("K_p = %.6g\nK_i_opt = %.6g\n", k_p, best);
        return 0;
    }
    // a bare number means a constant setpoint, anything else names a profile
    InputProfile setpoint;
    char* tail = nullptr;
    const double level = std::strtod(setpoint_name.c_str(), &tail);
    if (tail != setpoint_name.c_str() && *tail == '\0')
        setpoint = InputProfile::constant(level);
    else
        setpoint = cfg.profile(setpoint_name);
    const ScenarioResult res =
        run_scenario(plant, PIGains{k_p, k_i}, setpoint, t_g, dt, horizon);
    write_csv(join(out_dir, "control.csv"), {"t", "T_in", "T_out"},
              {res.series.times, res.series.input, res.series.output});
    std::printf("wrote %s\n", join(out_dir, "control.csv").c_str());
    for (const auto& seg : res.segments)
        std::printf("segment t=[%g,%g] setpoint=%g overshoot=%.4g settling=%.4g s\n", seg.start,
                    seg.end, seg.setpoint, seg.overshoot, seg.settling_time);
    return 0;
}

int cmd_cost(double p, double q, const std::string& grid, const std::string& out_dir) {
    if (grid.empty()) {
        const CostReport r = cost_report(p, q);
        std::printf("P = %g\nQ = %g\nC_FOM = %.6g\nC_ROM = %.6g\nP_min = %.6g\nQ_max = %.6g\n"
                    "R = %.6g\n",
                    r.dofs, r.steps, r.fom_flops, r.rom_flops, r.dof_threshold,
                    r.step_threshold, r.improvement);
        return 0;
    }
    double p_lo = 0, p_hi = 0, q_lo = 0, q_hi = 0;
    int n = 0;
    if (std::sscanf(grid.c_str(), "%lf:%lf:%lf:%lf:%d", &p_lo, &p_hi, &q_lo, &q_hi, &n) != 5 ||
        n < 2 || p_lo < 1 || q_lo < 1 || p_hi <= p_lo || q_hi <= q_lo) {
        std::fprintf(stderr, "error: --grid expects p_lo:p_hi:q_lo:q_hi:n\n");
        return 2;
    }
    std::vector<double> ps, qs, cf, cr, rr;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            // log-spaced grid, the regimes span decades
            const double pv = p_lo * std::pow(p_hi / p_lo, i / double(n - 1));
            const double qv = q_lo * std::pow(q_hi / q_lo, j / double(n - 1));
            ps.push_back(pv);
            qs.push_back(qv);
            cf.push_back(c_fom(pv, qv));
            cr.push_back(c_rom(qv));
            rr.push_back(ratio(pv, qv));
        }
    write_csv(join(out_dir, "cost_grid.csv"), {"P", "Q", "C_FOM", "C_ROM", "R"},
              {ps, qs, cf, cr, rr});
    std::printf("wrote %s\n", join(out_dir, "cost_grid.csv").c_str());
    return 0;
}

int cmd_bench(const ProjectConfig& cfg, const std::string& kernel, const std::string& pipe_name,
              double dx, double dt, int steps, int runs) {
    const PipeConfig& pipe = cfg.pipe(pipe_name);
    BenchResult result;
    if (kernel == "fom") {
        const int nodes = static_cast<int>(std::llround(pipe.geometry.length / dx)) + 1;
        const double bound = max_stable_dt(pipe, pipe.geometry.length / (nodes - 1));
        if (dt <= 0) dt = 0.9 * bound;
        if (dt > bound) {
            std::fprintf(stderr, "error: dt %g exceeds the stability bound dt_max %g\n", dt,
                         bound);
            return 3;
        }
        const LinearSystem sys = assemble(pipe, Discretization{nodes, dt});
        result = bench_fom(sys, 1.0, 0.0, dt, steps, runs);
        std::printf("kernel=fom P=%d Q=%d\n", sys.size(), steps);
    } else if (kernel == "rom") {
        if (dt <= 0) dt = 2.0;
        const TransferFunction f1 = identify_pipe(pipe, dx, 48, default_t_max_inlet(pipe),
                                                  TransferFunction::Kind::Inlet);
        const TransferFunction f2 =
            identify_pipe(pipe, dx, 16, default_t_max_ground, TransferFunction::Kind::Ground);
        result = bench_rom(f1, f2, dt, steps, runs);
        std::printf("kernel=rom Q=%d\n", steps);
    } else {
        std::fprintf(stderr, "error: --kernel must be fom or rom\n");
        return 2;
    }
    std::printf("runs=%d mean=%.6g s best=%.6g s worst=%.6g s\n", result.runs, result.mean,
                result.best, result.worst);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"district-heating pipe network simulation and model reduction toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    app.add_option("--config", config_path, "JSON project configuration")
        ->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory");

    std::string pipe = "dn25", inlet = "unit-step", ground = "zero", network = "system1";
    std::string backend = "fom", supply = "daily-supply", setpoint = "scenario2-setpoint";
    std::string f1_path, f2_path, sweep, grid, kernel = "fom";
    double dx = 0.5, dt = 0.0, t_end = 300.0, t0 = 0.0, t_g = 0.0;
    double t_max1 = 0.0, t_max2 = dhrom::default_t_max_ground;
    double k_p = 0.211, k_i = 0.0085, horizon = 3600.0;
    double cost_p = 100.0, cost_q = 1000.0;
    int n1 = 48, n2 = 16, steps = 1000, runs = 5;
    bool tune = false, optimize = false, benchmark = false;

    auto* fom_sim = app.add_subcommand("fom-sim", "simulate one pipe with the grid model")->fallthrough();
    fom_sim->add_option("--pipe", pipe);
    fom_sim->add_option("--inlet", inlet);
    fom_sim->add_option("--ground", ground);
    fom_sim->add_option("--dx", dx);
    fom_sim->add_option("--dt", dt, "0 picks 0.9 dt_max");
    fom_sim->add_option("--t-end", t_end);

    auto* identify = app.add_subcommand("identify", "fit transfer functions from step responses")->fallthrough();
    identify->add_option("--pipe", pipe);
    identify->add_option("--dx", dx);
    identify->add_option("--n1", n1);
    identify->add_option("--n2", n2);
    identify->add_option("--t-max1", t_max1, "0 picks 5 L/u");
    identify->add_option("--t-max2", t_max2);
    identify->add_option("--sweep", sweep, "order sweep lo:hi:stride, writes the RMSE curve");

    auto* rom_sim = app.add_subcommand("rom-sim", "simulate one pipe from saved transfer functions")->fallthrough();
    rom_sim->add_option("--f1", f1_path)->required()->check(CLI::ExistingFile);
    rom_sim->add_option("--f2", f2_path)->required()->check(CLI::ExistingFile);
    rom_sim->add_option("--inlet", inlet);
    rom_sim->add_option("--ground", ground);
    rom_sim->add_option("--t0", t0);
    rom_sim->add_option("--dt", dt);
    rom_sim->add_option("--t-end", t_end);

    auto* net_sim = app.add_subcommand("network-sim", "simulate a pipe network")->fallthrough();
    net_sim->add_option("--network", network);
    net_sim->add_option("--backend", backend, "fom or rom");
    net_sim->add_option("--supply", supply);
    net_sim->add_option("--t0", t0);
    net_sim->add_option("--tg", t_g);
    net_sim->add_option("--dt", dt);
    net_sim->add_option("--t-end", t_end);
    net_sim->add_option("--dx", dx);
    net_sim->add_option("--n1", n1);
    net_sim->add_option("--n2", n2);
    net_sim->add_flag("--benchmark", benchmark, "also run the grid model and report RMSE");

    auto* control = app.add_subcommand("control", "closed-loop PI control of one pipe")->fallthrough();
    control->add_option("--pipe", pipe);
    control->add_flag("--tune", tune, "ultimate-gain search plus tuning rule");
    control->add_flag("--optimize-ki", optimize, "largest no-overshoot integral gain");
    control->add_option("--kp", k_p);
    control->add_option("--ki", k_i);
    control->add_option("--setpoint", setpoint, "profile name or a constant temperature");
    control->add_option("--tg", t_g);
    control->add_option("--dt", dt);
    control->add_option("--horizon", horizon);

    auto* cost = app.add_subcommand("cost", "flop-count model report")->fallthrough();
    cost->add_option("--p", cost_p, "grid model degrees of freedom");
    cost->add_option("--q", cost_q, "number of time steps");
    cost->add_option("--grid", grid, "regime map p_lo:p_hi:q_lo:q_hi:n");

    auto* bench = app.add_subcommand("bench", "wall-clock kernel timing")->fallthrough();
    bench->add_option("--kernel", kernel, "fom or rom");
    bench->add_option("--pipe", pipe);
    bench->add_option("--dx", dx);
    bench->add_option("--dt", dt);
    bench->add_option("--steps", steps);
    bench->add_option("--runs", runs);

    CLI11_PARSE(app, argc, argv);

    try {
        const dhrom::ProjectConfig cfg = config_path.empty()
                                             ? dhrom::ProjectConfig::with_presets()
                                             : dhrom::load_config(config_path);
        std::filesystem::create_directories(out_dir);
        if (fom_sim->parsed())
            return cmd_fom_sim(cfg, pipe, inlet, ground, dx, dt, t_end, out_dir);
        if (identify->parsed())
            return cmd_identify(cfg, pipe, dx, n1, n2, t_max1, t_max2, sweep, out_dir);
        if (rom_sim->parsed())
            return cmd_rom_sim(cfg, f1_path, f2_path, inlet, ground, t0,
                               dt > 0 ? dt : 2.0, t_end, out_dir);
        if (net_sim->parsed())
            return cmd_network_sim(cfg, network, backend, supply, t0, t_g, dt > 0 ? dt : 2.0,
                                   t_end, dx, n1, n2, benchmark, out_dir);
        if (control->parsed())
            return cmd_control(cfg, pipe, tune, optimize, k_p, k_i, setpoint, t_g,
                               dt > 0 ? dt : 1.0, horizon, out_dir);
        if (cost->parsed()) return cmd_cost(cost_p, cost_q, grid, out_dir);
        if (bench->parsed()) return cmd_bench(cfg, kernel, pipe, dx, dt, steps, runs);
    } catch (const dhrom::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
