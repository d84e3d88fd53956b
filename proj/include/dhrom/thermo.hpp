#ifndef DHROM_THERMO_HPP
#define DHROM_THERMO_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dhrom {

struct FluidProps {
    double density;        // kg/m^3
    double heat_capacity;  // J/(kg K)
    double conductivity;   // W/(m K)
    double viscosity;      // Pa s

    void validate() const {
        if (density <= 0 || heat_capacity <= 0 || conductivity <= 0 || viscosity <= 0)
            throw std::invalid_argument("FluidProps: all properties must be strictly positive");
    }

    double prandtl() const { return heat_capacity * viscosity / conductivity; }
};

struct LayerProps {
    double density;        // kg/m^3
    double heat_capacity;  // J/(kg K)
    double conductivity;   // W/(m K)

    void validate() const {
        if (density <= 0 || heat_capacity <= 0 || conductivity <= 0)
            throw std::invalid_argument("LayerProps: all properties must be strictly positive");
    }

    double diffusivity() const { return conductivity / (density * heat_capacity); }
};

struct PipeGeometry {
    double length;     // m
    double r_w;        // inner (water) radius, m
    double r_s;        // steel outer radius, m
    double r_i;        // insulation outer radius, m
    double r_c;        // casing outer radius, m
    double depth;      // burial depth to centerline, m
    double roughness = 4.5e-5;  // m, commercial steel default

    void validate() const {
        if (length <= 0)
            throw std::invalid_argument("PipeGeometry: length must be positive");
        if (!(0 < r_w && r_w < r_s && r_s < r_i && r_i < r_c))
            throw std::invalid_argument("PipeGeometry: radii must satisfy 0 < r_w < r_s < r_i < r_c");
        if (depth < r_c)
            throw std::invalid_argument("PipeGeometry: burial depth must be at least r_c");
        if (roughness < 0)
            throw std::invalid_argument("PipeGeometry: roughness must be non-negative");
    }

    double diameter() const { return 2.0 * r_w; }
};

struct Resistances {
    double ws;  // water <-> steel, K/W
    double si;  // steel <-> insulation
    double ic;  // insulation <-> casing
    double cg;  // casing <-> ground
};

// Residual of the implicit Colebrook relation; zero at the converged friction factor.
inline double colebrook_residual(double f, double reynolds, double rel_roughness) {
    const double inv_sqrt_f = 1.0 / std::sqrt(f);
    return inv_sqrt_f +
           2.0 * std::log10(rel_roughness / 3.7 + 2.51 * inv_sqrt_f / reynolds);
}

// Darcy-Weisbach friction factor from the Colebrook relation. Fixed-point
// iteration on x = 1/sqrt(f), seeded with the explicit Haaland form; bisection
// fallback if the iteration stalls.
inline double friction_factor(double reynolds, double rel_roughness) {
    if (reynolds <= 2300.0)
        throw std::invalid_argument(
            "friction_factor: Re <= 2300 is laminar; Colebrook/Gnielinski invalid");
    if (rel_roughness < 0)
        throw std::invalid_argument("friction_factor: relative roughness must be non-negative");

    auto next = [&](double x) {
        return -2.0 * std::log10(rel_roughness / 3.7 + 2.51 * x / reynolds);
    };

    double x = -1.8 * std::log10(std::pow(rel_roughness / 3.7, 1.11) + 6.9 / reynolds);
    for (int it = 0; it < 100; ++it) {
        const double xn = next(x);
        if (std::abs(xn - x) < 1e-14 * std::abs(xn)) {
            const double f = 1.0 / (xn * xn);
            if (std::abs(colebrook_residual(f, reynolds, rel_roughness)) < 1e-10) return f;
            break;
        }
        x = xn;
    }

    // Bisection on x = 1/sqrt(f) over f in [0.004, 0.2].
    double x_lo = 1.0 / std::sqrt(0.2), x_hi = 1.0 / std::sqrt(0.004);
    auto g = [&](double xx) { return xx - next(xx); };
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (x_lo + x_hi);
        if (g(mid) > 0)
            x_hi = mid;
        else
            x_lo = mid;
    }
    return 1.0 / (x_lo * x_lo);
}

// Gnielinski correlation.
inline double nusselt(double reynolds, double prandtl, double f) {
    if (reynolds <= 2300.0)
        throw std::invalid_argument("nusselt: Re must exceed 2300 (turbulent)");
    if (prandtl <= 0)
        throw std::invalid_argument("nusselt: Pr must be positive");
    if (f <= 0)
        throw std::invalid_argument("nusselt: friction factor must be positive");
    const double f8 = f / 8.0;
    return f8 * (reynolds - 1000.0) * prandtl /
           (1.0 + 12.7 * std::sqrt(f8) * (std::pow(prandtl, 2.0 / 3.0) - 1.0));
}

inline double convective_coeff(const FluidProps& fluid, double velocity, double diameter,
                               double roughness = 0.0) {
    if (velocity <= 0 || diameter <= 0)
        throw std::invalid_argument("convective_coeff: velocity and diameter must be positive");
    fluid.validate();
    const double reynolds = fluid.density * velocity * diameter / fluid.viscosity;
    const double f = friction_factor(reynolds, roughness / diameter);
    return nusselt(reynolds, fluid.prandtl(), f) * fluid.conductivity / diameter;
}

inline double soil_resistance(double depth, double r_c, double length, double k_soil) {
    if (length <= 0 || k_soil <= 0)
        throw std::invalid_argument("soil_resistance: length and conductivity must be positive");
    if (depth < r_c)
        throw std::domain_error("soil_resistance: depth must be at least r_c");
    const double ratio = depth / r_c;
    return std::log(ratio + std::sqrt(ratio * ratio - 1.0)) /
           (2.0 * std::numbers::pi * length * k_soil);
}

// Lumped thermal resistances between adjacent layers. Each layer's half-thickness
// splits the conduction path at the midpoint between interfaces.
inline Resistances resistances(const PipeGeometry& g, const LayerProps& steel,
                               const LayerProps& insulation, const LayerProps& casing,
                               double h_w, double k_soil) {
    g.validate();
    if (h_w <= 0) throw std::invalid_argument("resistances: h_w must be positive");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double L = g.length;
    const double r_ws = (g.r_s - g.r_w) / 2.0;
    const double r_si = (g.r_i - g.r_s) / 2.0;
    const double r_ic = (g.r_c - g.r_i) / 2.0;

    Resistances r{};
    r.ws = 1.0 / (two_pi * g.r_w * L * h_w) +
           std::log((g.r_w + r_ws) / g.r_w) / (two_pi * L * steel.conductivity);
    r.si = std::log(g.r_s / (g.r_s - r_ws)) / (two_pi * L * steel.conductivity) +
           std::log((g.r_s + r_si) / g.r_s) / (two_pi * L * insulation.conductivity);
    r.ic = std::log(g.r_i / (g.r_i - r_si)) / (two_pi * L * insulation.conductivity) +
           std::log((g.r_i + r_ic) / g.r_i) / (two_pi * L * casing.conductivity);
    r.cg = std::log(g.r_c / (g.r_c - r_ic)) / (two_pi * L * casing.conductivity) +
           soil_resistance(g.depth, g.r_c, L, k_soil);
    return r;
}

}  // namespace dhrom

#endif
