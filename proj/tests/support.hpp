#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>

#include "cec/config.hpp"

namespace cec::testing {

inline std::filesystem::path config_path(const std::string& name) {
    return std::filesystem::path(CEC_CONFIG_DIR) / (name + ".ini");
}

inline ScenarioConfig bundled(const std::string& name, const std::vector<Override>& overrides = {}) {
    return load_config(config_path(name), overrides);
}

inline double rel_err(double got, double want) {
    const double scale = std::max(std::abs(want), std::abs(got));
    return scale == 0.0 ? 0.0 : std::abs(got - want) / scale;
}

}  // namespace cec::testing
