#include "flexbound/mlp.hpp"

#include <cmath>
#include <numeric>

#include "flexbound/errors.hpp"
#include "flexbound/rng.hpp"

namespace flexbound {

namespace {

// Seed streams so initialization and shuffling never share draws.
constexpr std::uint64_t kInitStream = 0x11;
constexpr std::uint64_t kShuffleStream = 0x22;

Mat apply_output(const Mat& z, Activation a) {
  switch (a) {
    case Activation::linear: return z;
    case Activation::sigmoid: return (1.0 / (1.0 + (-z.array()).exp())).matrix();
  }
  throw ConfigError("unknown activation");
}

void check_xy(const MlpParams& net, const Mat& X, const Mat& Y) {
  if (X.rows() != Y.rows()) {
    throw DataError("mlp: X has " + std::to_string(X.rows()) + " rows but Y has " +
                    std::to_string(Y.rows()));
  }
  if (X.cols() != net.input_size() || Y.cols() != net.output_size()) {
    throw DataError("mlp: data width (" + std::to_string(X.cols()) + " -> " +
                    std::to_string(Y.cols()) + ") does not match network (" +
                    std::to_string(net.input_size()) + " -> " +
                    std::to_string(net.output_size()) + ")");
  }
}

}  // namespace

Activation parse_activation(const std::string& name) {
  if (name == "linear") return Activation::linear;
  if (name == "sigmoid") return Activation::sigmoid;
  throw ConfigError("unknown activation '" + name + "' (expected linear or sigmoid)");
}

std::string to_string(Activation a) {
  return a == Activation::linear ? "linear" : "sigmoid";
}

void MlpParams::check() const {
  if (layer_sizes.size() < 2) throw ConfigError("mlp: need at least input and output sizes");
  for (Index s : layer_sizes) {
    if (s < 1) throw ConfigError("mlp: layer sizes must be positive");
  }
  const std::size_t n_layers = layer_sizes.size() - 1;
  if (weights.size() != n_layers || biases.size() != n_layers) {
    throw ConfigError("mlp: weight/bias count does not match layer_sizes");
  }
  for (std::size_t l = 0; l < n_layers; ++l) {
    if (weights[l].rows() != layer_sizes[l + 1] || weights[l].cols() != layer_sizes[l] ||
        biases[l].size() != layer_sizes[l + 1]) {
      throw ConfigError("mlp: layer " + std::to_string(l) + " shapes do not chain");
    }
    if (!weights[l].allFinite() || !biases[l].allFinite()) {
      throw NumericError("mlp: layer " + std::to_string(l) + " has non-finite parameters");
    }
  }
}

MlpParams make_mlp(const std::vector<Index>& layer_sizes, Activation output_activation,
                   std::uint64_t seed, double init_scale) {
  if (!(init_scale > 0.0) || !std::isfinite(init_scale)) {
    throw ConfigError("mlp: init_scale must be positive");
  }
  MlpParams net;
  net.layer_sizes = layer_sizes;
  net.output_activation = output_activation;
  if (layer_sizes.size() < 2) throw ConfigError("mlp: need at least input and output sizes");
  Rng rng(derive_seed(seed, kInitStream));
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    Mat w(layer_sizes[l + 1], layer_sizes[l]);
    for (Index r = 0; r < w.rows(); ++r) {
      for (Index c = 0; c < w.cols(); ++c) w(r, c) = rng.uniform(-init_scale, init_scale);
    }
    Vec b(layer_sizes[l + 1]);
    for (Index r = 0; r < b.size(); ++r) b[r] = rng.uniform(-init_scale, init_scale);
    net.weights.push_back(std::move(w));
    net.biases.push_back(std::move(b));
  }
  net.check();
  return net;
}

Index default_hidden_size(Index inputs) {
  return std::max<Index>(2, static_cast<Index>(std::llround(0.75 * static_cast<double>(inputs))));
}

Vec forward(const MlpParams& net, const Vec& x) {
  if (x.size() != net.input_size()) {
    throw DataError("forward: input length " + std::to_string(x.size()) +
                    " does not match network input " + std::to_string(net.input_size()));
  }
  Vec a = x;
  for (Index l = 0; l < net.n_layers(); ++l) {
    Vec z = net.weights[l] * a + net.biases[l];
    if (l + 1 == net.n_layers()) {
      a = net.output_activation == Activation::linear
              ? std::move(z)
              : Vec((1.0 / (1.0 + (-z.array()).exp())).matrix());
    } else {
      a = z.array().tanh().matrix();
    }
  }
  return a;
}

Mat forward_batch(const MlpParams& net, const Mat& X) {
  if (X.cols() != net.input_size()) {
    throw DataError("forward_batch: input width does not match network input");
  }
  Mat a = X.transpose();  // samples as columns
  for (Index l = 0; l < net.n_layers(); ++l) {
    Mat z = (net.weights[l] * a).colwise() + net.biases[l];
    a = (l + 1 == net.n_layers()) ? apply_output(z, net.output_activation)
                                  : z.array().tanh().matrix();
  }
  return a.transpose();
}

double loss(const MlpParams& net, const Mat& X, const Mat& Y) {
  check_xy(net, X, Y);
  const Mat pred = forward_batch(net, X);
  return 0.5 * (pred - Y).squaredNorm() / static_cast<double>(X.rows());
}

MlpGradient gradient(const MlpParams& net, const Mat& X, const Mat& Y) {
  check_xy(net, X, Y);
  const Index L = net.n_layers();
  const double inv_n = 1.0 / static_cast<double>(X.rows());

  // Forward pass keeping every activation, samples as columns.
  std::vector<Mat> act(static_cast<std::size_t>(L) + 1);
  act[0] = X.transpose();
  for (Index l = 0; l < L; ++l) {
    Mat z = (net.weights[l] * act[l]) .colwise() + net.biases[l];
    act[l + 1] = (l + 1 == L) ? apply_output(z, net.output_activation)
                              : z.array().tanh().matrix();
  }

  MlpGradient g;
  g.weights.resize(static_cast<std::size_t>(L));
  g.biases.resize(static_cast<std::size_t>(L));

  // Output delta: mean-loss residual times the activation derivative.
  Mat delta = (act[L] - Y.transpose()) * inv_n;
  if (net.output_activation == Activation::sigmoid) {
    delta.array() *= act[L].array() * (1.0 - act[L].array());
  }
  for (Index l = L - 1; l >= 0; --l) {
    g.weights[l] = delta * act[l].transpose();
    g.biases[l] = delta.rowwise().sum();
    if (l > 0) {
      delta = (net.weights[l].transpose() * delta).array() *
              (1.0 - act[l].array().square());
    }
  }
  return g;
}

std::pair<MlpParams, TrainReport> train(MlpParams net, const Mat& X, const Mat& Y,
                                        const TrainConfig& cfg) {
  net.check();
  check_xy(net, X, Y);
  const Index n = X.rows();
  if (n < 1) throw DataError("train: empty training set");
  if (!(cfg.learning_rate >= 0.0) || !std::isfinite(cfg.learning_rate)) {
    throw ConfigError("train: learning_rate must be finite and >= 0");
  }
  if (cfg.epochs < 1) throw ConfigError("train: epochs must be >= 1");
  if (cfg.batch_size < 1 || cfg.batch_size > n) {
    throw ConfigError("train: batch_size (" + std::to_string(cfg.batch_size) +
                      ") must lie in [1, training rows = " + std::to_string(n) + "]");
  }
  if (cfg.early_stop_tol < 0.0) throw ConfigError("train: early_stop_tol must be >= 0");

  Rng rng(derive_seed(cfg.seed, kShuffleStream));
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});

  TrainReport report;
  Mat xb, yb;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle(order, rng);
    for (Index start = 0; start < n; start += cfg.batch_size) {
      const Index b = std::min(cfg.batch_size, n - start);
      xb.resize(b, X.cols());
      yb.resize(b, Y.cols());
      for (Index i = 0; i < b; ++i) {
        xb.row(i) = X.row(order[start + i]);
        yb.row(i) = Y.row(order[start + i]);
      }
      const MlpGradient g = gradient(net, xb, yb);
      for (Index l = 0; l < net.n_layers(); ++l) {
        net.weights[l] -= cfg.learning_rate * g.weights[l];
        net.biases[l] -= cfg.learning_rate * g.biases[l];
      }
    }
    const double epoch_loss = loss(net, X, Y);
    if (!std::isfinite(epoch_loss)) {
      throw NumericError("train: loss diverged (non-finite) at epoch " +
                         std::to_string(epoch + 1));
    }
    report.epoch_loss.push_back(epoch_loss);
    if (epoch > 0) {
      const double improvement = report.epoch_loss[epoch - 1] - epoch_loss;
      if (improvement < cfg.early_stop_tol) break;
    }
  }
  report.epochs_run = static_cast<int>(report.epoch_loss.size());
  report.final_loss = report.epoch_loss.back();
  return {std::move(net), std::move(report)};
}

std::pair<MlpParams, TrainReport> train_autoassociative(const Mat& X, const TrainConfig& cfg,
                                                        Index hidden_size) {
  if (X.rows() < 1 || X.cols() < 1) throw DataError("train_autoassociative: empty data");
  if (!X.allFinite()) throw DataError("train_autoassociative: data must be fully observed");
  if (hidden_size < 1) throw ConfigError("train_autoassociative: hidden_size must be >= 1");
  MlpParams net = make_mlp({X.cols(), hidden_size, X.cols()}, Activation::sigmoid,
                           cfg.seed, cfg.init_scale);
  return train(std::move(net), X, X, cfg);
}

}  // namespace flexbound
