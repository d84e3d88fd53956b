#ifndef DHROM_CHEBYSHEV_HPP
#define DHROM_CHEBYSHEV_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace dhrom {

// Exponential map theta(t) = 1 - 2 exp(-t/tau) between the semi-infinite time
// axis [0, inf) and the spectral interval [-1, 1). theta(0) = -1, theta(inf) = 1.
struct TimeMap {
    double tau;    // s
    double t_max;  // s, end of the training window
    int order;     // expansion order N

    double theta(double t) const { return 1.0 - 2.0 * std::exp(-t / tau); }

    // Inverse map; theta = 1 yields +inf.
    double time_at(double theta_value) const {
        if (theta_value >= 1.0) return std::numeric_limits<double>::infinity();
        return -tau * std::log((1.0 - theta_value) / 2.0);
    }
};

// tau is fixed so that the first interior Lobatto node theta_1 = cos(pi/N)
// lands at t_ref = alpha_ref * t_max.
inline TimeMap make_time_map(double t_max, int order, double alpha_ref = 0.9) {
    if (t_max <= 0) throw std::invalid_argument("make_time_map: t_max must be positive");
    if (order < 2) throw std::invalid_argument("make_time_map: order must be at least 2");
    const double theta_ref = std::cos(std::numbers::pi / order);
    const double t_ref = alpha_ref * t_max;
    return TimeMap{-t_ref / std::log((1.0 - theta_ref) / 2.0), t_max, order};
}

struct LobattoRule {
    std::vector<double> nodes;    // theta_k = cos(pi k / N), k = 0..N
    std::vector<double> weights;  // pi/(2N) at the ends, pi/N inside
};

inline LobattoRule lobatto_nodes(int order) {
    if (order < 2) throw std::invalid_argument("lobatto_nodes: order must be at least 2");
    LobattoRule rule;
    rule.nodes.resize(order + 1);
    rule.weights.resize(order + 1);
    for (int k = 0; k <= order; ++k) {
        rule.nodes[k] = std::cos(std::numbers::pi * k / order);
        rule.weights[k] =
            (k == 0 || k == order) ? std::numbers::pi / (2.0 * order) : std::numbers::pi / order;
    }
    return rule;
}

struct ChebSpectrum {
    std::vector<double> coefficients;  // F_hat_0 .. F_hat_N
    TimeMap map;

    int order() const { return static_cast<int>(coefficients.size()) - 1; }
};

// Discrete Chebyshev transform on the Gauss-Lobatto grid. samples[k] = F(theta_k).
inline ChebSpectrum transform(const std::vector<double>& samples, const TimeMap& map) {
    const int n_order = map.order;
    if (static_cast<int>(samples.size()) != n_order + 1)
        throw std::invalid_argument("transform: need N+1 samples at the Lobatto nodes");
    const auto rule = lobatto_nodes(n_order);
    ChebSpectrum spectrum{std::vector<double>(n_order + 1, 0.0), map};
    for (int n = 0; n <= n_order; ++n) {
        const double gamma =
            (n == 0 || n == n_order) ? std::numbers::pi : std::numbers::pi / 2.0;
        double acc = 0.0;
        for (int k = 0; k <= n_order; ++k)
            acc += samples[k] * std::cos(n * std::numbers::pi * k / n_order) * rule.weights[k];
        spectrum.coefficients[n] = acc / gamma;
    }
    return spectrum;
}

// Clenshaw summation of sum_n a_n T_n(x); stable near |x| = 1.
inline double evaluate_at_theta(const ChebSpectrum& spectrum, double theta) {
    const auto& a = spectrum.coefficients;
    double b1 = 0.0, b2 = 0.0;
    for (int n = static_cast<int>(a.size()) - 1; n >= 1; --n) {
        const double b0 = a[n] + 2.0 * theta * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return a[0] + theta * b1 - b2;
}

inline double evaluate(const ChebSpectrum& spectrum, double t) {
    if (t < 0) throw std::domain_error("evaluate: t must be non-negative");
    return evaluate_at_theta(spectrum, spectrum.map.theta(t));
}

}  // namespace dhrom

#endif
