#include "flexbound/model_io.hpp"

#include <fstream>

#include "flexbound/errors.hpp"

namespace flexbound {

using nlohmann::json;

nlohmann::json model_to_json(const MlpParams& net) {
  net.check();
  json j;
  j["layer_sizes"] = net.layer_sizes;
  std::vector<std::string> acts;
  for (Index l = 0; l + 1 < net.n_layers(); ++l) acts.emplace_back("tanh");
  acts.push_back(to_string(net.output_activation));
  j["activations"] = acts;

  json weights = json::array();
  json biases = json::array();
  for (Index l = 0; l < net.n_layers(); ++l) {
    json w = json::array();
    for (Index r = 0; r < net.weights[l].rows(); ++r) {
      json row = json::array();
      for (Index c = 0; c < net.weights[l].cols(); ++c) row.push_back(net.weights[l](r, c));
      w.push_back(std::move(row));
    }
    weights.push_back(std::move(w));
    json b = json::array();
    for (Index r = 0; r < net.biases[l].size(); ++r) b.push_back(net.biases[l][r]);
    biases.push_back(std::move(b));
  }
  j["weights"] = std::move(weights);
  j["biases"] = std::move(biases);
  return j;
}

namespace {

const json& require_array(const json& j, const char* field) {
  if (!j.contains(field)) throw DataError(std::string("model: missing field '") + field + "'");
  const json& v = j.at(field);
  if (!v.is_array()) throw DataError(std::string("model: field '") + field + "' must be an array");
  return v;
}

}  // namespace

MlpParams model_from_json(const nlohmann::json& j) {
  const json& sizes = require_array(j, "layer_sizes");
  if (sizes.size() < 2) throw DataError("model: layer_sizes needs at least two entries");
  MlpParams net;
  for (const json& s : sizes) {
    if (!s.is_number_integer() || s.get<long long>() < 1) {
      throw DataError("model: layer_sizes entries must be positive integers");
    }
    net.layer_sizes.push_back(s.get<Index>());
  }
  const std::size_t n_layers = net.layer_sizes.size() - 1;

  const json& acts = require_array(j, "activations");
  if (acts.size() != n_layers) {
    throw DataError("model: activations has " + std::to_string(acts.size()) +
                    " entries, expected " + std::to_string(n_layers));
  }
  for (std::size_t l = 0; l + 1 < n_layers; ++l) {
    if (acts[l] != "tanh") {
      throw DataError("model: activations[" + std::to_string(l) + "] must be 'tanh'");
    }
  }
  const std::string out_act = acts[n_layers - 1].is_string()
                                  ? acts[n_layers - 1].get<std::string>()
                                  : std::string();
  if (out_act == "linear") {
    net.output_activation = Activation::linear;
  } else if (out_act == "sigmoid") {
    net.output_activation = Activation::sigmoid;
  } else {
    throw DataError("model: activations: output layer must be 'linear' or 'sigmoid'");
  }

  const json& weights = require_array(j, "weights");
  const json& biases = require_array(j, "biases");
  if (weights.size() != n_layers || biases.size() != n_layers) {
    throw DataError("model: weights/biases layer count does not match layer_sizes");
  }
  for (std::size_t l = 0; l < n_layers; ++l) {
    const Index rows = net.layer_sizes[l + 1];
    const Index cols = net.layer_sizes[l];
    const json& w = weights[l];
    if (!w.is_array() || static_cast<Index>(w.size()) != rows) {
      throw DataError("model: weights[" + std::to_string(l) + "] must have " +
                      std::to_string(rows) + " rows");
    }
    Mat wm(rows, cols);
    for (Index r = 0; r < rows; ++r) {
      const json& row = w[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Index>(row.size()) != cols) {
        throw DataError("model: weights[" + std::to_string(l) + "] row " +
                        std::to_string(r) + " must have " + std::to_string(cols) +
                        " entries");
      }
      for (Index c = 0; c < cols; ++c) {
        const json& v = row[static_cast<std::size_t>(c)];
        if (!v.is_number()) {
          throw DataError("model: weights[" + std::to_string(l) + "](" +
                          std::to_string(r) + ", " + std::to_string(c) +
                          ") must be a number");
        }
        wm(r, c) = v.get<double>();
      }
    }
    const json& b = biases[l];
    if (!b.is_array() || static_cast<Index>(b.size()) != rows) {
      throw DataError("model: biases[" + std::to_string(l) + "] must have " +
                      std::to_string(rows) + " entries");
    }
    Vec bv(rows);
    for (Index r = 0; r < rows; ++r) {
      const json& v = b[static_cast<std::size_t>(r)];
      if (!v.is_number()) {
        throw DataError("model: biases[" + std::to_string(l) + "][" + std::to_string(r) +
                        "] must be a number");
      }
      bv[r] = v.get<double>();
    }
    net.weights.push_back(std::move(wm));
    net.biases.push_back(std::move(bv));
  }
  net.check();
  return net;
}

void save_model(const MlpParams& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file: " + path);
  out << model_to_json(net).dump(2) << '\n';
  if (!out) throw DataError("write failed: " + path);
}

MlpParams load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError("model: invalid JSON in " + path + ": " + e.what());
  }
  return model_from_json(j);
}

}  // namespace flexbound
