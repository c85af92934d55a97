#pragma once

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "flexbound/dataset.hpp"
#include "flexbound/mlp.hpp"
#include "flexbound/rng.hpp"
#include "flexbound/types.hpp"

namespace testutil {

using namespace flexbound;

/// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("flexbound_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  [[nodiscard]] const std::filesystem::path& path() const { return path_; }

  std::string write(const std::string& name, const std::string& content) const {
    const auto file = path_ / name;
    std::ofstream out(file, std::ios::binary);
    out << content;
    return file.string();
  }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline bool bit_equal(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

inline bool bit_equal(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) return false;
  return std::memcmp(a.data(), b.data(), sizeof(double) * static_cast<std::size_t>(a.size())) == 0;
}

inline bool bit_equal(const MlpParams& a, const MlpParams& b) {
  if (a.layer_sizes != b.layer_sizes || a.output_activation != b.output_activation) return false;
  for (std::size_t l = 0; l < a.weights.size(); ++l) {
    if (!bit_equal(a.weights[l], b.weights[l]) || !bit_equal(Vec(a.biases[l]), Vec(b.biases[l]))) {
      return false;
    }
  }
  return true;
}

/// Central finite differences over every parameter; the independent oracle
/// for the analytic backprop gradient.
inline MlpGradient finite_difference_gradient(const MlpParams& net, const Mat& X, const Mat& Y,
                                              double h = 1e-5) {
  MlpGradient g;
  MlpParams work = net;
  for (Index l = 0; l < net.n_layers(); ++l) {
    Mat gw(net.weights[l].rows(), net.weights[l].cols());
    for (Index r = 0; r < gw.rows(); ++r) {
      for (Index c = 0; c < gw.cols(); ++c) {
        const double orig = work.weights[l](r, c);
        work.weights[l](r, c) = orig + h;
        const double up = loss(work, X, Y);
        work.weights[l](r, c) = orig - h;
        const double down = loss(work, X, Y);
        work.weights[l](r, c) = orig;
        gw(r, c) = (up - down) / (2.0 * h);
      }
    }
    Vec gb(net.biases[l].size());
    for (Index r = 0; r < gb.size(); ++r) {
      const double orig = work.biases[l][r];
      work.biases[l][r] = orig + h;
      const double up = loss(work, X, Y);
      work.biases[l][r] = orig - h;
      const double down = loss(work, X, Y);
      work.biases[l][r] = orig;
      gb[r] = (up - down) / (2.0 * h);
    }
    g.weights.push_back(std::move(gw));
    g.biases.push_back(std::move(gb));
  }
  return g;
}

/// Max relative error between analytic and finite-difference gradients.
inline double gradient_check(const MlpParams& net, const Mat& X, const Mat& Y) {
  const MlpGradient analytic = gradient(net, X, Y);
  const MlpGradient numeric = finite_difference_gradient(net, X, Y);
  double worst = 0.0;
  const auto update = [&](double a, double n) {
    const double rel = std::abs(a - n) / std::max(1e-6, std::abs(a) + std::abs(n));
    worst = std::max(worst, rel);
  };
  for (std::size_t l = 0; l < analytic.weights.size(); ++l) {
    for (Index r = 0; r < analytic.weights[l].rows(); ++r) {
      for (Index c = 0; c < analytic.weights[l].cols(); ++c) {
        update(analytic.weights[l](r, c), numeric.weights[l](r, c));
      }
    }
    for (Index r = 0; r < analytic.biases[l].size(); ++r) {
      update(analytic.biases[l][r], numeric.biases[l][r]);
    }
  }
  return worst;
}

/// Random fully observed matrix with entries in [lo, hi).
inline Mat random_matrix(Index rows, Index cols, Rng& rng, double lo = 0.0, double hi = 1.0) {
  Mat m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) m(r, c) = rng.uniform(lo, hi);
  }
  return m;
}

/// Copy of a fully observed dataset with cells hidden completely at random
/// with probability p, plus the hide mask (true = hidden). Every column keeps
/// at least one observed cell.
inline std::pair<Dataset, BoolMat> hide_mcar(const Dataset& truth, double p, Rng& rng) {
  Dataset masked = truth;
  BoolMat hidden = BoolMat::Constant(truth.n_rows(), truth.n_cols(), false);
  for (Index r = 0; r < truth.n_rows(); ++r) {
    for (Index c = 0; c < truth.n_cols(); ++c) {
      if (truth.mask(r, c) && rng.uniform() < p) {
        hidden(r, c) = true;
        masked.mask(r, c) = false;
        masked.values(r, c) = std::numeric_limits<double>::quiet_NaN();
      }
    }
  }
  for (Index c = 0; c < truth.n_cols(); ++c) {
    if (!masked.mask.col(c).any()) {  // keep the column usable
      hidden(0, c) = false;
      masked.mask(0, c) = true;
      masked.values(0, c) = truth.values(0, c);
    }
  }
  return {std::move(masked), std::move(hidden)};
}

}  // namespace testutil
