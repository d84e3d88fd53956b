#ifndef DHROM_CONTROL_HPP
#define DHROM_CONTROL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dhrom/profile.hpp"
#include "dhrom/rom.hpp"

namespace dhrom {

struct PIGains {
    double k_p = 0.0;  // dimensionless
    double k_i = 0.0;  // 1/s

    void validate() const {
        if (k_p < 0 || k_i < 0) throw std::invalid_argument("PIGains: gains must be non-negative");
    }
};

struct ControllerState {
    double integral = 0.0;     // accumulated error, C*s
    double last_output = 0.0;  // C
    std::optional<double> min_output;
    std::optional<double> max_output;
};

// One discrete PI update: left rectangle rule for the integral, output clamped
// to the configured bounds with integral clamping as anti-windup.
inline double pi_step(ControllerState& ctrl, const PIGains& gains, double error, double dt) {
    if (dt <= 0) throw std::invalid_argument("pi_step: dt must be positive");
    ctrl.integral += error * dt;
    double out = gains.k_p * error + gains.k_i * ctrl.integral;
    const bool saturated_high = ctrl.max_output && out > *ctrl.max_output;
    const bool saturated_low = ctrl.min_output && out < *ctrl.min_output;
    if (saturated_high || saturated_low) {
        out = saturated_high ? *ctrl.max_output : *ctrl.min_output;
        if (gains.k_i > 0) ctrl.integral = (out - gains.k_p * error) / gains.k_i;
    }
    ctrl.last_output = out;
    return out;
}

inline PIGains ziegler_nichols(double k_u, double tau_u) {
    if (k_u <= 0 || tau_u <= 0)
        throw std::invalid_argument("ziegler_nichols: K_u and tau_u must be positive");
    return PIGains{0.45 * k_u, 0.54 * k_u / tau_u};
}

// Closed-loop simulation against any plant exposing
//   double step(double t_in, double t_g)  -> outlet deviation at the next level
// with all temperatures relative to the shared reference.
struct ClosedLoopResult {
    std::vector<double> times;
    std::vector<double> input;   // controller output T~_in
    std::vector<double> output;  // plant outlet T~_out
};

template <class Plant>
ClosedLoopResult run_closed_loop(Plant& plant, const PIGains& gains,
                                 const InputProfile& setpoint, double t_g, double dt,
                                 double horizon, ControllerState ctrl = {}) {
    gains.validate();
    const std::size_t n_steps = static_cast<std::size_t>(std::llround(horizon / dt));
    ClosedLoopResult result;
    result.times.reserve(n_steps + 1);
    result.input.reserve(n_steps + 1);
    result.output.reserve(n_steps + 1);
    double out = 0.0;
    for (std::size_t k = 0; k <= n_steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const double error = setpoint.value(t) - out;
        const double t_in = pi_step(ctrl, gains, error, dt);
        result.times.push_back(t);
        result.input.push_back(t_in);
        result.output.push_back(out);
        if (k == n_steps) break;
        out = plant.step(t_in, t_g);
    }
    return result;
}

// ROM-backed plant; temperatures are deviations from the identification reference.
class RomPlant {
   public:
    RomPlant(const TransferFunction& f1, const TransferFunction& f2, double dt,
             std::size_t horizon)
        : f1_(&f1), f2_(&f2), dt_(dt), horizon_(horizon), state_(f1, f2, 0.0, dt, horizon) {}

    void reset() { state_ = RomState(*f1_, *f2_, 0.0, dt_, horizon_); }
    double step(double t_in, double t_g) { return state_.step(t_in, t_g); }

   private:
    const TransferFunction* f1_;
    const TransferFunction* f2_;
    double dt_;
    std::size_t horizon_;
    RomState state_;
};

namespace detail {

struct OscillationReport {
    bool sustained = false;
    bool growing = false;
    double period = 0.0;
    int peak_count = 0;
};

// Classifies the closed-loop output as decaying, sustained or growing from the
// peak-to-peak amplitudes of its local maxima after the initial transient.
inline OscillationReport classify_oscillation(const std::vector<double>& times,
                                              const std::vector<double>& signal) {
    for (double v : signal)
        if (!std::isfinite(v)) {
            OscillationReport diverged;
            diverged.growing = true;
            return diverged;
        }
    std::vector<std::size_t> raw_maxima;
    std::vector<double> raw_amplitudes;
    double running_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < signal.size(); ++i) {
        running_min = std::min(running_min, signal[i]);
        if (signal[i] > signal[i - 1] && signal[i] >= signal[i + 1]) {
            raw_maxima.push_back(i);
            raw_amplitudes.push_back(signal[i] - running_min);
            running_min = signal[i];
        }
    }
    // identification ripple creates micro-peaks; only peaks whose prominence is
    // a visible fraction of the overall signal range describe the oscillation
    double sig_lo = signal.front(), sig_hi = signal.front();
    for (double v : signal) {
        sig_lo = std::min(sig_lo, v);
        sig_hi = std::max(sig_hi, v);
    }
    const double threshold = 1e-2 * (sig_hi - sig_lo);
    std::vector<std::size_t> maxima;
    std::vector<double> amplitudes;
    for (std::size_t i = 0; i < raw_maxima.size(); ++i) {
        if (raw_amplitudes[i] < threshold) continue;
        maxima.push_back(raw_maxima[i]);
        amplitudes.push_back(raw_amplitudes[i]);
    }
    OscillationReport report;
    report.peak_count = static_cast<int>(maxima.size());
    if (maxima.size() < 4) {
        // explosive growth can leave a single dominant peak that swallows the
        // prominence budget; the trend over whichever peaks exist still decides
        if (maxima.size() >= 2)
            report.growing = amplitudes.back() > amplitudes.front();
        else if (raw_amplitudes.size() >= 2)
            report.growing = raw_amplitudes.back() >
                             *std::max_element(raw_amplitudes.begin(), raw_amplitudes.end() - 1);
        return report;
    }

    // discard the first peak (start-up transient)
    const std::size_t first = 1;
    double ratio_min = std::numeric_limits<double>::infinity(), ratio_max = 0.0;
    for (std::size_t i = first + 1; i < amplitudes.size(); ++i) {
        if (amplitudes[i - 1] <= 0) return report;
        const double r = amplitudes[i] / amplitudes[i - 1];
        ratio_min = std::min(ratio_min, r);
        ratio_max = std::max(ratio_max, r);
    }
    double spacing = 0.0;
    for (std::size_t i = first + 1; i < maxima.size(); ++i)
        spacing += times[maxima[i]] - times[maxima[i - 1]];
    report.period = spacing / static_cast<double>(maxima.size() - first - 1);
    report.sustained = ratio_min >= 0.95 && ratio_max <= 1.05;
    // net growth over the observed peaks decides which side of K_u we are on
    report.growing = amplitudes.back() > amplitudes[first];
    return report;
}

}  // namespace detail

struct UltimateGain {
    double k_u;
    double tau_u;
};

// Proportional-only relay onto a step setpoint: bisects the gain range on the
// grow/decay boundary and reports the oscillation period there.
template <class Plant>
UltimateGain find_ultimate_gain(Plant& plant, double k_p_lo, double k_p_hi, double setpoint,
                                double t_g, double dt, double horizon) {
    auto probe = [&](double k_p) {
        plant.reset();
        const auto run = run_closed_loop(plant, PIGains{k_p, 0.0},
                                         InputProfile::constant(setpoint), t_g, dt, horizon);
        return detail::classify_oscillation(run.times, run.output);
    };

    auto lo = probe(k_p_lo);
    auto hi = probe(k_p_hi);
    if (lo.growing || !hi.growing)
        throw std::runtime_error(
            "find_ultimate_gain: no grow/decay transition of sustained oscillation in K_p range [" +
            std::to_string(k_p_lo) + ", " + std::to_string(k_p_hi) + "]; peaks seen: " +
            std::to_string(std::max(lo.peak_count, hi.peak_count)));

    double period = hi.period;
    for (int it = 0; it < 60 && (k_p_hi - k_p_lo) > 1e-6 * k_p_hi; ++it) {
        const double mid = 0.5 * (k_p_lo + k_p_hi);
        const auto report = probe(mid);
        if (report.growing) {
            k_p_hi = mid;
            period = report.period;
        } else {
            k_p_lo = mid;
            if (report.period > 0) period = report.period;
        }
    }
    const double k_u = 0.5 * (k_p_lo + k_p_hi);
    const auto final_report = probe(k_u);
    if (final_report.peak_count < 4)
        throw std::runtime_error("find_ultimate_gain: too few oscillation periods at K_u");
    return UltimateGain{k_u, final_report.period > 0 ? final_report.period : period};
}

// Largest K_i whose closed-loop step response stays within overshoot_tol of the
// setpoint, located by bisection; both brackets must straddle the overshoot onset.
template <class Plant>
double optimize_ki(Plant& plant, double k_p, double k_i_lo, double k_i_hi, double setpoint,
                   double t_g, double dt, double horizon, double overshoot_tol = 0.5) {
    auto overshoot = [&](double k_i) {
        plant.reset();
        const auto run = run_closed_loop(plant, PIGains{k_p, k_i},
                                         InputProfile::constant(setpoint), t_g, dt, horizon);
        double peak = -std::numeric_limits<double>::infinity();
        for (double y : run.output) peak = std::max(peak, y);
        return peak - setpoint;
    };

    if (overshoot(k_i_lo) > overshoot_tol)
        throw std::runtime_error("optimize_ki: lower bracket already overshoots");
    if (overshoot(k_i_hi) <= overshoot_tol)
        throw std::runtime_error("optimize_ki: upper bracket does not overshoot");
    while (k_i_hi - k_i_lo >= 1e-4) {
        const double mid = 0.5 * (k_i_lo + k_i_hi);
        if (overshoot(mid) <= overshoot_tol)
            k_i_lo = mid;
        else
            k_i_hi = mid;
    }
    return k_i_lo;
}

struct SegmentMetrics {
    double start;
    double end;
    double setpoint;
    double overshoot;       // max(output - setpoint) within the segment
    double settling_time;   // NaN if the band is never held to segment end
};

struct ScenarioResult {
    ClosedLoopResult series;
    std::vector<SegmentMetrics> segments;
};

// Closed-loop reference tracking of a step-wise setpoint profile. Settling is
// the first time the output enters the band and stays inside until the segment ends.
template <class Plant>
ScenarioResult run_scenario(Plant& plant, const PIGains& gains, const InputProfile& setpoint,
                            double t_g, double dt, double horizon,
                            double settling_band = 1.0) {
    plant.reset();
    ScenarioResult result;
    result.series = run_closed_loop(plant, gains, setpoint, t_g, dt, horizon);

    const auto& times = result.series.times;
    const auto& output = result.series.output;
    for (std::size_t s = 0; s < setpoint.points.size(); ++s) {
        SegmentMetrics m{};
        m.start = setpoint.points[s].first;
        m.end = (s + 1 < setpoint.points.size()) ? setpoint.points[s + 1].first : horizon;
        m.setpoint = setpoint.points[s].second;
        if (m.start >= horizon) break;
        m.overshoot = -std::numeric_limits<double>::infinity();
        m.settling_time = std::numeric_limits<double>::quiet_NaN();
        double settled_since = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t k = 0; k < times.size(); ++k) {
            if (times[k] < m.start || times[k] > m.end) continue;
            m.overshoot = std::max(m.overshoot, output[k] - m.setpoint);
            if (std::abs(output[k] - m.setpoint) <= settling_band) {
                if (std::isnan(settled_since)) settled_since = times[k];
            } else {
                settled_since = std::numeric_limits<double>::quiet_NaN();
            }
        }
        if (!std::isnan(settled_since)) m.settling_time = settled_since - m.start;
        result.segments.push_back(m);
    }
    return result;
}

}  // namespace dhrom

#endif
