#pragma once

#include <string>

#include <json.hpp>

#include "flexbound/mlp.hpp"

namespace flexbound {

/// Schema: {layer_sizes, activations (one per non-input layer), weights
/// (nested arrays, row-major per layer), biases}. Values round-trip
/// bit-exactly.
nlohmann::json model_to_json(const MlpParams& net);
MlpParams model_from_json(const nlohmann::json& j);

void save_model(const MlpParams& net, const std::string& path);
MlpParams load_model(const std::string& path);

}  // namespace flexbound
