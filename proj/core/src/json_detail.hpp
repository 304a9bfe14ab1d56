#pragma once

#include "json.hpp"
#include "renorm2/config.hpp"

namespace renorm2::detail {

nlohmann::json complex_json(const Complex& z);
/// Resolved config re-serialized for the run manifest.
nlohmann::json echo_config(const ExperimentConfig& cfg);

}
