#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "flexbound/types.hpp"

namespace flexbound {

enum class Activation { linear, sigmoid };

Activation parse_activation(const std::string& name);
std::string to_string(Activation a);

/// Fully connected feed-forward network. Hidden layers use tanh; the output
/// layer uses `output_activation`. weights[l] is (layer_sizes[l+1] x
/// layer_sizes[l]).
struct MlpParams {
  std::vector<Index> layer_sizes;
  std::vector<Mat> weights;
  std::vector<Vec> biases;
  Activation output_activation = Activation::linear;

  [[nodiscard]] Index input_size() const { return layer_sizes.front(); }
  [[nodiscard]] Index output_size() const { return layer_sizes.back(); }
  [[nodiscard]] Index n_layers() const { return static_cast<Index>(weights.size()); }

  /// Shape-chain consistency and finiteness; throws on violation.
  void check() const;
};

struct TrainConfig {
  double learning_rate = 0.5;
  int epochs = 2000;
  Index batch_size = 32;  // must not exceed the training-set size
  std::uint64_t seed = 0;
  double init_scale = 0.5;
  double early_stop_tol = 0.0;
};

struct TrainReport {
  std::vector<double> epoch_loss;  // mean loss over the full set, per epoch run
  double final_loss = 0.0;
  int epochs_run = 0;
};

/// Parameter-shaped gradient of the loss.
struct MlpGradient {
  std::vector<Mat> weights;
  std::vector<Vec> biases;
};

/// Seeded uniform(-init_scale, init_scale) initialization.
MlpParams make_mlp(const std::vector<Index>& layer_sizes, Activation output_activation,
                   std::uint64_t seed, double init_scale = 0.5);

Index default_hidden_size(Index inputs);  // max(2, round(0.75 * inputs))

Vec forward(const MlpParams& net, const Vec& x);

/// Rows of X are samples; returns one prediction row per sample.
Mat forward_batch(const MlpParams& net, const Mat& X);

/// Mean over rows of 0.5 * ||forward(x) - y||^2.
double loss(const MlpParams& net, const Mat& X, const Mat& Y);

/// Exact analytic gradient of loss via backpropagation.
MlpGradient gradient(const MlpParams& net, const Mat& X, const Mat& Y);

/// Seeded mini-batch gradient descent. Stops after cfg.epochs or as soon as
/// the epoch-loss improvement drops below early_stop_tol.
std::pair<MlpParams, TrainReport> train(MlpParams net, const Mat& X, const Mat& Y,
                                        const TrainConfig& cfg);

/// Trains a sigmoid-output network to reproduce its input (X in [0, 1]).
std::pair<MlpParams, TrainReport> train_autoassociative(const Mat& X, const TrainConfig& cfg,
                                                        Index hidden_size);

}  // namespace flexbound
