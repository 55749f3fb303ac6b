#include "cec/plant.hpp"

#include <charconv>
#include <cmath>

namespace cec::plant {

PlantModel benchmark_plant() {
    PlantModel m;
    m.name = "benchmark2";
    m.n = 2;
    m.f = {
        [](std::span<const double> x) { return x[0] * x[0] + 0.1 * std::cos(0.5 * x[0]); },
        [](std::span<const double> x) {
            return 4.0 * x[0] * x[1] + x[0] * std::exp(-std::abs(x[1])) +
                   0.05 * std::sin(x[0] * x[1]);
        },
    };
    m.g = {
        [](std::span<const double> x) { return 5.0 + 0.5 * std::sin(x[0]); },
        [](std::span<const double> x) { return 3.0 + 0.2 * std::cos(x[0] * x[1]); },
    };
    m.envelope.offset = {1.0, 1.0};
    m.envelope.quad = {{1.0, 0.0}, {1.0, 1.0}};
    m.b = {1.0, 3.0};
    m.g_lo = {4.5, 2.8};
    m.g_hi = {5.5, 3.2};
    return m;
}

PlantModel integrator_chain(int n) {
    if (n < 2) throw ConfigError("integrator chain needs n >= 2");
    PlantModel m;
    m.name = "integrator-chain-" + std::to_string(n);
    m.n = n;
    for (int i = 0; i < n; ++i) {
        m.f.emplace_back([i](std::span<const double> x) { return 0.1 * std::sin(x[i]); });
        m.g.emplace_back([](std::span<const double>) { return 1.0; });
    }
    m.envelope.offset.assign(n, 1.0);
    m.envelope.quad.assign(n, std::vector<double>(n, 0.0));
    m.b.assign(n, 0.1);
    m.g_lo.assign(n, 1.0);
    m.g_hi.assign(n, 1.0);
    return m;
}

PlantModel pure_chain(int n) {
    if (n < 2) throw ConfigError("pure chain needs n >= 2");
    PlantModel m;
    m.name = "pure-chain-" + std::to_string(n);
    m.n = n;
    for (int i = 0; i < n; ++i) {
        m.f.emplace_back([](std::span<const double>) { return 0.0; });
        m.g.emplace_back([](std::span<const double>) { return 1.0; });
    }
    m.envelope.offset.assign(n, 0.0);
    m.envelope.quad.assign(n, std::vector<double>(n, 0.0));
    m.b.assign(n, 0.0);
    m.g_lo.assign(n, 1.0);
    m.g_hi.assign(n, 1.0);
    return m;
}

namespace {

int parse_order_suffix(std::string_view name, std::string_view prefix) {
    const auto tail = name.substr(prefix.size());
    int n = 0;
    auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), n);
    if (ec != std::errc() || ptr != tail.data() + tail.size()) {
        throw ConfigError("plant name '" + std::string(name) + "' has no valid order suffix");
    }
    return n;
}

}  // namespace

PlantModel make_plant(std::string_view name) {
    if (name == "benchmark2") return benchmark_plant();
    constexpr std::string_view chain = "integrator-chain-";
    constexpr std::string_view pure = "pure-chain-";
    if (name.starts_with(chain)) return integrator_chain(parse_order_suffix(name, chain));
    if (name.starts_with(pure)) return pure_chain(parse_order_suffix(name, pure));
    throw ConfigError("unknown plant '" + std::string(name) + "'");
}

void IntegratorConfig::validate() const {
    if (!(step > 0.0)) throw ConfigError("integrator: step must be positive");
    if (!(horizon > 0.0)) throw ConfigError("integrator: horizon must be positive");
    const double ratio = horizon / step;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
        throw ConfigError("integrator: horizon must be a multiple of step");
    }
}

long IntegratorConfig::steps() const { return std::lround(horizon / step); }

std::vector<double> derivative(std::span<const double> x, double u, double t,
                               const PlantModel& model, const Disturbance& dist) {
    const int n = model.n;
    std::vector<double> dx(n);
    for (int i = 0; i < n; ++i) {
        const double next = (i + 1 < n) ? x[i + 1] : u;
        dx[i] = model.f[i](x) + model.g[i](x) * next;
    }
    dx[n - 1] += dist.value(t);
    return dx;
}

AssumptionCheck check_assumptions(std::span<const double> x, const PlantModel& model) {
    AssumptionCheck out;
    for (int i = 0; i < model.n; ++i) {
        const double g = model.g[i](x);
        if (g < model.g_lo[i] || g > model.g_hi[i]) out.gains_in_bounds = false;
        const double phi = model.envelope.phi<double>(i, x);
        if (std::abs(model.f[i](x)) > model.b[i] * phi) out.drift_bounded = false;
    }
    return out;
}

}  // namespace cec::plant
