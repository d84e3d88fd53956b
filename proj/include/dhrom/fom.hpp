#ifndef DHROM_FOM_HPP
#define DHROM_FOM_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "dhrom/profile.hpp"
#include "dhrom/thermo.hpp"

namespace dhrom {

// One buried pipe segment: geometry, per-layer materials, fluid and flow.
// field_count selects the layer stack: 4 = water/steel/insulation/casing
// (buried standard), 3 = water/steel/insulation with the insulation coupled
// to ambient through an external convective film (lab-rig configuration).
struct PipeConfig {
    PipeGeometry geometry;
    FluidProps fluid;
    LayerProps steel;
    LayerProps insulation;
    LayerProps casing{1.0, 1.0, 1.0};
    double soil_conductivity = 1.6;  // W/(m K)
    double velocity = 0.0;           // m/s
    int field_count = 4;
    double external_film = 10.0;     // W/(m^2 K), rig configuration only

    void validate() const {
        geometry.validate();
        fluid.validate();
        steel.validate();
        insulation.validate();
        if (field_count == 4) casing.validate();
        if (field_count != 3 && field_count != 4)
            throw std::invalid_argument("PipeConfig: field_count must be 3 or 4");
        if (velocity <= 0) throw std::invalid_argument("PipeConfig: velocity must be positive");
        if (soil_conductivity <= 0)
            throw std::invalid_argument("PipeConfig: soil conductivity must be positive");
    }

    double flow_area() const { return std::numbers::pi * geometry.r_w * geometry.r_w; }
    double mass_flux() const { return fluid.density * velocity * flow_area(); }
    void set_mass_flux(double mdot) { velocity = mdot / (fluid.density * flow_area()); }
};

struct Discretization {
    int nodes;  // N_x >= 2
    double dt;  // s

    void validate() const {
        if (nodes < 2) throw std::invalid_argument("Discretization: need at least 2 nodes");
        if (dt <= 0) throw std::invalid_argument("Discretization: dt must be positive");
    }
};

struct StateVector {
    std::vector<double> values;  // [T^w_1..T^w_Nx, T^s_1.., T^i_1.. (, T^c_1..)]
    double time = 0.0;
};

// Compressed-sparse-row matrix; rows have at most 5 entries here.
struct SparseMatrix {
    int n = 0;
    std::vector<int> row_ptr;
    std::vector<int> col;
    std::vector<double> val;

    void multiply(const std::vector<double>& x, std::vector<double>& y) const {
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) acc += val[k] * x[col[k]];
            y[i] = acc;
        }
    }
};

// Semi-discrete LTI form dT/dt = A T + T_in b1 + T_g b2 with outlet selector.
struct LinearSystem {
    SparseMatrix A;
    std::vector<double> b1, b2;
    int output_index = 0;
    int inlet_node = -1;  // Dirichlet-forced water inlet; -1 disables forcing
    double dt_max = std::numeric_limits<double>::infinity();

    int size() const { return A.n; }

    // Positivity bound 1 / max |A_ii|; unlike dt_max it also counts the
    // inter-layer exchange rates, which keeps sharp fronts oscillation free.
    double dt_positive() const {
        double diag_max = 0.0;
        for (int i = 0; i < A.n; ++i)
            for (int p = A.row_ptr[i]; p < A.row_ptr[i + 1]; ++p)
                if (A.col[p] == i) diag_max = std::max(diag_max, std::abs(A.val[p]));
        return diag_max > 0.0 ? 1.0 / diag_max : std::numeric_limits<double>::infinity();
    }
};

inline double max_stable_dt(const PipeConfig& config, double dx) {
    if (dx <= 0) throw std::invalid_argument("max_stable_dt: dx must be positive");
    double alpha_min = std::min(config.fluid.conductivity /
                                    (config.fluid.density * config.fluid.heat_capacity),
                                std::min(config.steel.diffusivity(), config.insulation.diffusivity()));
    if (config.field_count == 4) alpha_min = std::min(alpha_min, config.casing.diffusivity());
    const double denom = config.velocity / dx + 2.0 * alpha_min / (dx * dx);
    if (denom <= 0) return std::numeric_limits<double>::infinity();
    return 1.0 / denom;
}

namespace detail {

class MatrixBuilder {
   public:
    explicit MatrixBuilder(int n) : rows_(n) {}

    void add(int row, int column, double value) {
        for (auto& [c, v] : rows_[row])
            if (c == column) {
                v += value;
                return;
            }
        rows_[row].emplace_back(column, value);
    }

    SparseMatrix build() const {
        SparseMatrix m;
        m.n = static_cast<int>(rows_.size());
        m.row_ptr.reserve(m.n + 1);
        m.row_ptr.push_back(0);
        for (auto row : rows_) {
            std::sort(row.begin(), row.end());
            for (const auto& [c, v] : row) {
                m.col.push_back(c);
                m.val.push_back(v);
            }
            m.row_ptr.push_back(static_cast<int>(m.col.size()));
        }
        return m;
    }

   private:
    std::vector<std::vector<std::pair<int, double>>> rows_;
};

}  // namespace detail

// Upwind convection on the water field, central conduction in every field,
// radial exchange between adjacent fields. Boundary closure: Dirichlet water
// inlet, zero-flux ghosts for the solids at x=0 and all fields at x=L.
inline LinearSystem assemble(const PipeConfig& config, const Discretization& disc) {
    config.validate();
    disc.validate();
    const auto& g = config.geometry;
    const int nx = disc.nodes;
    const double dx = g.length / (nx - 1);
    const int fields = config.field_count;
    const int size = fields * nx;
    const double u = config.velocity;

    const double h_w =
        convective_coeff(config.fluid, u, g.diameter(), g.roughness);

    double r_ws, r_si, r_ic, r_cg;
    if (fields == 4) {
        const Resistances res = resistances(g, config.steel, config.insulation, config.casing,
                                            h_w, config.soil_conductivity);
        r_ws = res.ws;
        r_si = res.si;
        r_ic = res.ic;
        r_cg = res.cg;
    } else {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        const double half_ws = (g.r_s - g.r_w) / 2.0;
        const double half_si = (g.r_i - g.r_s) / 2.0;
        r_ws = 1.0 / (two_pi * g.r_w * g.length * h_w) +
               std::log((g.r_w + half_ws) / g.r_w) /
                   (two_pi * g.length * config.steel.conductivity);
        r_si = std::log(g.r_s / (g.r_s - half_ws)) /
                   (two_pi * g.length * config.steel.conductivity) +
               std::log((g.r_s + half_si) / g.r_s) /
                   (two_pi * g.length * config.insulation.conductivity);
        // insulation to ambient: remaining conduction plus the external film
        r_ic = std::log(g.r_i / (g.r_i - half_si)) /
                   (two_pi * g.length * config.insulation.conductivity) +
               1.0 / (two_pi * g.r_i * g.length * config.external_film);
        r_cg = 0.0;  // unused
    }

    const double v_w = std::numbers::pi * g.r_w * g.r_w * g.length;
    const double v_s = std::numbers::pi * (g.r_s * g.r_s - g.r_w * g.r_w) * g.length;
    const double v_i = std::numbers::pi * (g.r_i * g.r_i - g.r_s * g.r_s) * g.length;
    const double v_c = std::numbers::pi * (g.r_c * g.r_c - g.r_i * g.r_i) * g.length;

    // Exchange rates 1 / (R V rho Cp): the per-cell resistance R L/dx and
    // volume V dx/L leave the cell size cancelled.
    const double cap_w = config.fluid.density * config.fluid.heat_capacity;
    const double cap_s = config.steel.density * config.steel.heat_capacity;
    const double cap_i = config.insulation.density * config.insulation.heat_capacity;
    const double cap_c = config.casing.density * config.casing.heat_capacity;
    const double c_ws_w = 1.0 / (r_ws * v_w * cap_w);
    const double c_ws_s = 1.0 / (r_ws * v_s * cap_s);
    const double c_si_s = 1.0 / (r_si * v_s * cap_s);
    const double c_si_i = 1.0 / (r_si * v_i * cap_i);
    const double c_ic_i = 1.0 / (r_ic * v_i * cap_i);
    const double c_ic_c = (fields == 4) ? 1.0 / (r_ic * v_c * cap_c) : 0.0;
    const double c_cg_c = (fields == 4) ? 1.0 / (r_cg * v_c * cap_c) : 0.0;

    const double alpha[4] = {config.fluid.conductivity / cap_w, config.steel.diffusivity(),
                             config.insulation.diffusivity(),
                             (fields == 4) ? config.casing.diffusivity() : 0.0};

    detail::MatrixBuilder builder(size);
    std::vector<double> b1(size, 0.0), b2(size, 0.0);
    auto idx = [nx](int field, int node) { return field * nx + node; };

    for (int f = 0; f < fields; ++f) {
        for (int i = 0; i < nx; ++i) {
            const int row = idx(f, i);
            if (f == 0 && i == 0) {
                // Dirichlet inlet; the relaxation rate keeps A nonsingular and
                // the equilibrium exact, stepping overrides the node anyway.
                builder.add(row, row, -u / dx);
                b1[row] = u / dx;
                continue;
            }
            const double a_dx2 = alpha[f] / (dx * dx);
            if (i > 0) {
                builder.add(row, idx(f, i - 1), a_dx2);
                builder.add(row, row, -a_dx2);
            }
            if (i < nx - 1) {
                builder.add(row, idx(f, i + 1), a_dx2);
                builder.add(row, row, -a_dx2);
            }
            if (f == 0) {
                builder.add(row, idx(0, i - 1), u / dx);
                builder.add(row, row, -u / dx);
                builder.add(row, row, -c_ws_w);
                builder.add(row, idx(1, i), c_ws_w);
            } else if (f == 1) {
                builder.add(row, idx(0, i), c_ws_s);
                builder.add(row, idx(2, i), c_si_s);
                builder.add(row, row, -(c_ws_s + c_si_s));
            } else if (f == 2) {
                builder.add(row, idx(1, i), c_si_i);
                builder.add(row, row, -(c_si_i + c_ic_i));
                if (fields == 4) {
                    builder.add(row, idx(3, i), c_ic_i);
                } else {
                    b2[row] = c_ic_i;  // ambient replaces the casing neighbour
                }
            } else {
                builder.add(row, idx(2, i), c_ic_c);
                builder.add(row, row, -(c_ic_c + c_cg_c));
                b2[row] = c_cg_c;
            }
        }
    }

    LinearSystem sys;
    sys.A = builder.build();
    sys.b1 = std::move(b1);
    sys.b2 = std::move(b2);
    sys.output_index = idx(0, nx - 1);
    sys.inlet_node = idx(0, 0);
    sys.dt_max = max_stable_dt(config, dx);
    return sys;
}

inline StateVector uniform_state(const LinearSystem& sys, double temperature) {
    return StateVector{std::vector<double>(sys.size(), temperature), 0.0};
}

// Explicit Euler step T <- T + dt (A T + T_in b1 + T_g b2).
inline void step(const LinearSystem& sys, StateVector& state, double t_in, double t_g,
                 double dt, std::vector<double>& scratch) {
    if (dt > sys.dt_max * (1.0 + 1e-12))
        throw std::runtime_error("step: dt exceeds the stability limit dt_max");
    const int n = sys.size();
    if (static_cast<int>(state.values.size()) != n)
        throw std::invalid_argument("step: state size does not match the system");
    scratch.resize(n);
    sys.A.multiply(state.values, scratch);
    for (int i = 0; i < n; ++i)
        state.values[i] += dt * (scratch[i] + t_in * sys.b1[i] + t_g * sys.b2[i]);
    if (sys.inlet_node >= 0) state.values[sys.inlet_node] = t_in;
    state.time += dt;
}

inline void step(const LinearSystem& sys, StateVector& state, double t_in, double t_g,
                 double dt) {
    std::vector<double> scratch;
    step(sys, state, t_in, t_g, dt, scratch);
}

struct SimResult {
    std::vector<double> times;
    std::vector<double> outlet;
};

inline SimResult simulate(const LinearSystem& sys, StateVector state,
                          const InputProfile& t_in_profile, const InputProfile& t_g_profile,
                          double dt, double t_end) {
    SimResult result;
    const int steps = static_cast<int>(std::llround(t_end / dt));
    result.times.reserve(steps + 1);
    result.outlet.reserve(steps + 1);
    std::vector<double> scratch;
    if (sys.inlet_node >= 0) state.values[sys.inlet_node] = t_in_profile.value(0.0);
    for (int j = 0; j <= steps; ++j) {
        const double t = j * dt;
        result.times.push_back(t);
        result.outlet.push_back(state.values[sys.output_index]);
        if (j == steps) break;
        step(sys, state, t_in_profile.value(t), t_g_profile.value(t), dt, scratch);
        if (sys.inlet_node >= 0) state.values[sys.inlet_node] = t_in_profile.value(state.time);
    }
    return result;
}

// Solves A T = -(T_in b1 + T_g b2) by dense LU with partial pivoting.
inline StateVector equilibrium(const LinearSystem& sys, double t_in, double t_g) {
    const int n = sys.size();
    std::vector<double> dense(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = sys.A.row_ptr[i]; k < sys.A.row_ptr[i + 1]; ++k)
            dense[static_cast<std::size_t>(i) * n + sys.A.col[k]] = sys.A.val[k];
    std::vector<double> rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = -(t_in * sys.b1[i] + t_g * sys.b2[i]);

    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int k = 0; k < n; ++k) {
        int pivot = k;
        double best = std::abs(dense[static_cast<std::size_t>(k) * n + k]);
        for (int i = k + 1; i < n; ++i) {
            const double a = std::abs(dense[static_cast<std::size_t>(i) * n + k]);
            if (a > best) {
                best = a;
                pivot = i;
            }
        }
        if (best == 0.0) throw std::runtime_error("equilibrium: singular system matrix");
        if (pivot != k) {
            for (int j = 0; j < n; ++j)
                std::swap(dense[static_cast<std::size_t>(k) * n + j],
                          dense[static_cast<std::size_t>(pivot) * n + j]);
            std::swap(rhs[k], rhs[pivot]);
        }
        const double inv = 1.0 / dense[static_cast<std::size_t>(k) * n + k];
        for (int i = k + 1; i < n; ++i) {
            const double factor = dense[static_cast<std::size_t>(i) * n + k] * inv;
            if (factor == 0.0) continue;
            dense[static_cast<std::size_t>(i) * n + k] = 0.0;
            for (int j = k + 1; j < n; ++j)
                dense[static_cast<std::size_t>(i) * n + j] -=
                    factor * dense[static_cast<std::size_t>(k) * n + j];
            rhs[i] -= factor * rhs[k];
        }
    }
    StateVector state{std::vector<double>(n), 0.0};
    for (int i = n - 1; i >= 0; --i) {
        double acc = rhs[i];
        for (int j = i + 1; j < n; ++j)
            acc -= dense[static_cast<std::size_t>(i) * n + j] * state.values[j];
        state.values[i] = acc / dense[static_cast<std::size_t>(i) * n + i];
    }
    return state;
}

}  // namespace dhrom

#endif
