#ifndef DHROM_ROM_HPP
#define DHROM_ROM_HPP

#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dhrom/chebyshev.hpp"
#include "dhrom/profile.hpp"

namespace dhrom {

namespace detail {

// Linear interpolation on a monotonically increasing abscissa; clamps at the ends.
inline double lerp_series(const std::vector<double>& times, const std::vector<double>& values,
                          double t) {
    if (times.empty()) throw std::invalid_argument("lerp_series: empty series");
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    std::size_t lo = 0, hi = times.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (times[mid] <= t)
            lo = mid;
        else
            hi = mid;
    }
    const double w = (t - times[lo]) / (times[hi] - times[lo]);
    return values[lo] + w * (values[hi] - values[lo]);
}

}  // namespace detail

// Unit-step response of the outlet temperature to the inlet (F1) or ground (F2)
// temperature, stored as a Chebyshev spectrum over the mapped time axis.
struct TransferFunction {
    enum class Kind { Inlet, Ground };

    ChebSpectrum spectrum;
    Kind kind = Kind::Inlet;

    double asymptote() const { return evaluate_at_theta(spectrum, 1.0); }
    double operator()(double t) const { return evaluate(spectrum, t); }
};

// Fit a transfer function to a unit step response sampled on `times`.
// The response must cover the reference time alpha_ref * t_max. The node at
// theta = 1 stands for t = infinity, which the series never reaches; its value
// is the one-dimensional least-squares fit against the whole series, seeded
// with the final sample.
inline TransferFunction identify(const std::vector<double>& times,
                                 const std::vector<double>& response,
                                 TransferFunction::Kind kind, int order, double t_max,
                                 double alpha_ref = 0.9) {
    if (times.size() != response.size() || times.empty())
        throw std::invalid_argument("identify: malformed response series");
    if (times.back() < alpha_ref * t_max)
        throw std::invalid_argument(
            "identify: response series ends before the reference time " +
            std::to_string(alpha_ref * t_max) + " s");
    const TimeMap map = make_time_map(t_max, order, alpha_ref);
    const auto rule = lobatto_nodes(order);
    std::vector<double> samples(order + 1);
    for (int k = 0; k <= order; ++k) {
        const double t_k = map.time_at(rule.nodes[k]);
        samples[k] = detail::lerp_series(times, response, std::min(t_k, times.back()));
    }

    // residual is linear in the terminal node value; solve the normal equation
    const ChebSpectrum base = transform(samples, map);
    std::vector<double> cardinal(order + 1, 0.0);
    cardinal[0] = 1.0;
    const ChebSpectrum ell0 = transform(cardinal, map);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double l = evaluate(ell0, times[i]);
        num += l * (response[i] - evaluate(base, times[i]));
        den += l * l;
    }
    if (den > 0.0) samples[0] += num / den;
    return TransferFunction{transform(samples, map), kind};
}

inline double rmse(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("rmse: series lengths differ");
    if (a.empty()) throw std::invalid_argument("rmse: empty series");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(acc / static_cast<double>(a.size()));
}

// Smallest order whose RMSE meets the target.
inline int choose_order(const std::map<int, double>& rmse_curve, double target) {
    if (rmse_curve.empty()) throw std::invalid_argument("choose_order: empty RMSE curve");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [order, err] : rmse_curve) {
        if (err <= target) return order;
        best = std::min(best, err);
    }
    throw std::runtime_error("choose_order: target " + std::to_string(target) +
                             " unreachable; best achieved RMSE " + std::to_string(best));
}

// Direct superposition of gated step responses, eq-by-eq; profiles carry
// temperatures relative to the common reference T_0. H(0) = 0, so a step at
// exactly t contributes only for later times.
inline double respond_steps(const TransferFunction& f1, const TransferFunction& f2,
                            const InputProfile& in_steps, const InputProfile& g_steps,
                            double t) {
    if (in_steps.mode != InputProfile::Mode::Step || g_steps.mode != InputProfile::Mode::Step)
        throw std::invalid_argument("respond_steps: profiles must be step-wise");
    if (t < 0) throw std::domain_error("respond_steps: t must be non-negative");
    auto accumulate = [t](const TransferFunction& f, const InputProfile& profile) {
        double out = 0.0, previous = 0.0;
        for (const auto& [t_j, value] : profile.points) {
            if (t_j >= t) break;
            out += f(t - t_j) * (value - previous);
            previous = value;
        }
        return out;
    };
    return accumulate(f1, in_steps) + accumulate(f2, g_steps);
}

// Rolling propagation state: histories of input increments against a single
// uniform reference T_0 plus the transfer functions pre-sampled on the step grid.
class RomState {
   public:
    RomState(const TransferFunction& f1, const TransferFunction& f2, double t0, double dt,
             std::size_t horizon)
        : t0_(t0), dt_(dt), last_in_(t0), last_g_(t0) {
        if (dt <= 0) throw std::invalid_argument("RomState: dt must be positive");
        if (horizon == 0) throw std::invalid_argument("RomState: horizon must be positive");
        f1_.resize(horizon);
        f2_.resize(horizon);
        for (std::size_t j = 0; j < horizon; ++j) {
            const double t = static_cast<double>(j + 1) * dt;
            f1_[j] = f1(t);
            f2_[j] = f2(t);
        }
        d_in_.reserve(horizon);
        d_g_.reserve(horizon);
    }

    double reference() const { return t0_; }
    double dt() const { return dt_; }
    std::size_t count() const { return d_in_.size(); }
    std::size_t horizon() const { return f1_.size(); }

    // Consumes the absolute inputs taking effect at t_{k} and returns the
    // outlet deviation at t_{k+1}; F2 collapses to a pre-computed scalar while
    // the ground input stays constant.
    double step(double t_in, double t_g) {
        const std::size_t k = d_in_.size();
        if (k >= f1_.size())
            throw std::runtime_error(
                "RomState: precomputed horizon exhausted; rebuild with a longer horizon");
        d_in_.push_back(t_in - last_in_);
        d_g_.push_back(t_g - last_g_);
        if (k > 0 && d_g_.back() != 0.0) ground_varied_ = true;
        last_in_ = t_in;
        last_g_ = t_g;

        const std::size_t n = k + 1;
        double out = 0.0;
        for (std::size_t j = 0; j < n; ++j) out += f1_[j] * d_in_[n - 1 - j];
        if (ground_varied_) {
            for (std::size_t j = 0; j < n; ++j) out += f2_[j] * d_g_[n - 1 - j];
        } else {
            out += f2_[n - 1] * d_g_[0];
        }
        return out;
    }

   private:
    double t0_;
    double dt_;
    double last_in_, last_g_;
    bool ground_varied_ = false;
    std::vector<double> f1_, f2_;    // F(t_1) .. F(t_K)
    std::vector<double> d_in_, d_g_; // increments at t_0 .. t_{k-1}
};

}  // namespace dhrom

#endif
