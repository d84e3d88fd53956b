#ifndef DHROM_PROFILE_HPP
#define DHROM_PROFILE_HPP

#include <stdexcept>
#include <utility>
#include <vector>

namespace dhrom {

// Timed breakpoint sequence for inlet/ground/supply temperatures.
// Step mode holds the last breakpoint value (left-constant); Linear mode
// interpolates between breakpoints. Beyond the last breakpoint both modes
// hold the final value.
struct InputProfile {
    enum class Mode { Step, Linear };

    Mode mode = Mode::Step;
    std::vector<std::pair<double, double>> points;  // (t, value), t_0 = 0, strictly increasing

    static InputProfile constant(double value) {
        return InputProfile{Mode::Step, {{0.0, value}}};
    }

    static InputProfile steps(std::vector<std::pair<double, double>> pts) {
        InputProfile p{Mode::Step, std::move(pts)};
        p.validate();
        return p;
    }

    static InputProfile linear(std::vector<std::pair<double, double>> pts) {
        InputProfile p{Mode::Linear, std::move(pts)};
        p.validate();
        return p;
    }

    void validate() const {
        if (points.empty()) throw std::invalid_argument("InputProfile: no breakpoints");
        if (points.front().first != 0.0)
            throw std::invalid_argument("InputProfile: first breakpoint must be at t = 0");
        for (std::size_t i = 1; i < points.size(); ++i)
            if (points[i].first <= points[i - 1].first)
                throw std::invalid_argument("InputProfile: breakpoint times must strictly increase");
    }

    double value(double t) const {
        if (t < 0) throw std::domain_error("InputProfile: t must be non-negative");
        std::size_t i = 0;
        while (i + 1 < points.size() && points[i + 1].first <= t) ++i;
        if (mode == Mode::Step || i + 1 == points.size()) return points[i].second;
        const auto& [t0, v0] = points[i];
        const auto& [t1, v1] = points[i + 1];
        return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
    }

    double end_time() const { return points.back().first; }
};

}  // namespace dhrom

#endif
