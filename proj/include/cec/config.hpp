#pragma once

// Scenario files: INI text with one section per subsystem.
//
//   [scenario]   name, plant, table_case
//   [initial]    x, theta_hat
//   [reference]  amplitude, frequency, offset
//   [performance] delta, rho0, rho_inf, varsigma
//   [auxiliary]  l, lambda, settling_time
//   [controller] c, r, sigma, path (dedicated | general)
//   [trigger]    strategy (ces | relative | switching | fixed), catchup_cap
//   [ces]        p, m, omega, levels
//   [baseline]   delta_bar, d, switch_level, fixed_delta
//   [integrator] step, horizon
//   [disturbance] enabled, amplitude, frequency, start, end
//   [run]        seed
//
// Lists are comma separated. Missing keys take the defaults below.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "cec/codec.hpp"
#include "cec/controller.hpp"
#include "cec/plant.hpp"
#include "cec/spp.hpp"

namespace cec {

enum class Strategy { ces, relative, switching, fixed };

std::string to_string(Strategy s);
Strategy strategy_from_string(std::string_view name);

enum class LawPath { dedicated, general };

struct ScenarioConfig {
    std::string name = "scenario";
    std::string plant = "benchmark2";
    std::string table_case;  ///< groups runs for `compare`; empty means standalone

    std::vector<double> x0{1.5, 0.0};
    std::vector<double> theta0{0.0, 0.0};
    control::Reference reference;

    spp::PerfParams perf;  ///< sign0 is derived from e1(0) by validate()
    double aux_l = 0.6;
    double aux_lambda = 2.0;
    double settling_time = 4.0;

    control::ControllerParams gains{2, {2.0, 15.0}, {0.002, 0.002}, {0.01, 0.01}};
    LawPath path = LawPath::dedicated;

    Strategy strategy = Strategy::ces;
    int catchup_cap = 8;
    codec::CesConfig ces = codec::default_ces_config();
    codec::BaselineConfig baseline;

    plant::IntegratorConfig integrator;
    plant::Disturbance disturbance;
    std::uint64_t seed = 0;

    double initial_error() const;
    spp::AuxParams aux() const;
    control::Design design() const;

    /// Cross-checks every section; fixes perf.sign0 from the initial error.
    void validate();
};

using Override = std::pair<std::string, std::string>;  ///< "section.key", value

/// Parses "section.key=value".
Override parse_override(std::string_view text);

ScenarioConfig parse_config(const std::string& text, const std::vector<Override>& overrides = {});
ScenarioConfig load_config(const std::filesystem::path& path,
                           const std::vector<Override>& overrides = {});

/// Sets the strategy and keeps the baseline kind in step with it.
void set_strategy(ScenarioConfig& cfg, Strategy s);

}  // namespace cec
