#pragma once

// Strict-feedback plants  x_i' = f_i(x_1..x_i) + g_i(x_1..x_i) x_{i+1},
// x_n' = f_n + g_n u (+ disturbance), and a classical RK4 step.

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cec/errors.hpp"

namespace cec::plant {

/// Known bounding functions phi_i(x) = offset_i + sum_k quad_i[k] * x_k^2.
///
/// The quadratic family covers the benchmark bounds and is closed under
/// dual-number evaluation, which the controller needs.
struct PlantEnvelope {
    std::vector<double> offset;
    std::vector<std::vector<double>> quad;

    int order() const { return static_cast<int>(offset.size()); }

    /// phi_{i+1}(x) for zero-based stage index i.
    template <class S, class Vec>
    S phi(int i, const Vec& x) const {
        S acc = S(offset[i]);
        const auto& row = quad[i];
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (row[k] != 0.0) acc = acc + row[k] * (x[k] * x[k]);
        }
        return acc;
    }

    /// d phi_{i+1} / d x_{k+1}.
    double phi_partial(int i, int k, std::span<const double> x) const {
        return 2.0 * quad[i][k] * x[k];
    }
};

using StageFn = std::function<double(std::span<const double>)>;

struct PlantModel {
    std::string name;
    int n = 0;
    std::vector<StageFn> f;
    std::vector<StageFn> g;
    PlantEnvelope envelope;
    std::vector<double> b;     ///< drift bound constants, |f_i| <= b_i phi_i (validation only)
    std::vector<double> g_lo;  ///< gain bounds (validation only)
    std::vector<double> g_hi;
};

/// The second-order benchmark used in both simulation cases.
PlantModel benchmark_plant();
/// n integrators with a small bounded drift f_i = 0.1 sin(x_i); g_i = 1.
PlantModel integrator_chain(int n);
/// n pure integrators (f = 0, g = 1, phi = 0).
PlantModel pure_chain(int n);
/// Resolves `benchmark2`, `integrator-chain-<n>` or `pure-chain-<n>`.
PlantModel make_plant(std::string_view name);

/// Additive term a cos(w t) on the last stage inside the closed window [start, end].
struct Disturbance {
    bool enabled = false;
    double amplitude = 2.0;
    double frequency = 0.5;
    double start = 5.0;
    double end = 10.0;

    double value(double t) const {
        if (!enabled || t < start || t > end) return 0.0;
        return amplitude * std::cos(frequency * t);
    }
};

struct IntegratorConfig {
    double step = 1e-3;
    double horizon = 20.0;

    void validate() const;
    /// Number of steps; horizon must be a multiple of step.
    long steps() const;
};

std::vector<double> derivative(std::span<const double> x, double u, double t,
                               const PlantModel& model, const Disturbance& dist);

/// Result of checking the standing assumptions at one state.
struct AssumptionCheck {
    bool gains_in_bounds = true;
    bool drift_bounded = true;
};

AssumptionCheck check_assumptions(std::span<const double> x, const PlantModel& model);

/// Classical fourth-order Runge-Kutta step of y' = rhs(t, y).
/// Throws NonFinite when the result has a NaN or infinite component.
template <class Rhs>
std::vector<double> rk4_step(std::span<const double> y, double t, double h, Rhs&& rhs) {
    const std::size_t n = y.size();
    std::vector<double> tmp(n);
    const std::vector<double> k1 = rhs(t, std::span<const double>(y));
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    const std::vector<double> k2 = rhs(t + 0.5 * h, std::span<const double>(tmp));
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    const std::vector<double> k3 = rhs(t + 0.5 * h, std::span<const double>(tmp));
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    const std::vector<double> k4 = rhs(t + h, std::span<const double>(tmp));
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (!std::isfinite(out[i])) {
            throw NonFinite(t + h, "state component " + std::to_string(i));
        }
    }
    return out;
}

}  // namespace cec::plant
