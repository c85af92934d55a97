#include <doctest.h>

#include <cmath>

#include "flexbound/errors.hpp"
#include "flexbound/imputation.hpp"
#include "helpers.hpp"

using namespace flexbound;

namespace {

MlpParams identity_net(Index n) {
  MlpParams net;
  net.layer_sizes = {n, n};
  net.weights.push_back(Mat::Identity(n, n));
  net.biases.push_back(Vec::Zero(n));
  net.output_activation = Activation::linear;
  return net;
}

MlpParams zero_output_net(Index n) {
  MlpParams net = identity_net(n);
  net.weights[0].setZero();
  return net;
}

/// Autoassociative net trained on the line x2 = x1; shared fixture.
const MlpParams& line_net() {
  static const MlpParams net = [] {
    Rng rng(67);
    Mat x(200, 2);
    for (Index i = 0; i < 200; ++i) {
      const double v = rng.uniform();
      x(i, 0) = v;
      x(i, 1) = v;
    }
    TrainConfig cfg;
    cfg.learning_rate = 0.5;
    cfg.epochs = 1500;
    cfg.batch_size = 32;
    cfg.seed = 5;
    return train_autoassociative(x, cfg, 2).first;
  }();
  return net;
}

}  // namespace

TEST_CASE("reconstruction_error: fixed point, arithmetic, re-summation") {
  const MlpParams id = identity_net(3);
  const Vec x = (Vec(3) << 0.2, 0.5, 0.9).finished();
  CHECK(reconstruction_error(id, x) == 0.0);

  const MlpParams zero = zero_output_net(2);
  CHECK(reconstruction_error(zero, (Vec(2) << 1, 0).finished()) == doctest::Approx(1.0));

  Rng rng(71);
  const MlpParams net = make_mlp({4, 3, 4}, Activation::sigmoid, 7);
  const Vec v = (Vec(4) << 0.1, 0.9, 0.4, 0.6).finished();
  const Vec recon = forward(net, v);
  double manual = 0.0;
  for (Index i = 0; i < 4; ++i) manual += (v[i] - recon[i]) * (v[i] - recon[i]);
  CHECK(reconstruction_error(net, v) == doctest::Approx(manual).epsilon(1e-12));

  CHECK_THROWS_AS(reconstruction_error(net, Vec::Zero(3)), DataError);
}

TEST_CASE("impute_row: fully observed row is a caller bug") {
  ga::GaConfig cfg;
  cfg.seed = 1;
  const BoolVec all_observed = BoolVec::Constant(2, true);
  CHECK_THROWS_AS(impute_row(identity_net(2), (Vec(2) << 0.1, 0.2).finished(), all_observed, cfg),
                  DataError);
}

TEST_CASE("impute_row: recovers the missing coordinate on the line fixture") {
  ga::GaConfig cfg;
  cfg.seed = 11;
  Vec row(2);
  row[0] = 0.3;
  row[1] = std::numeric_limits<double>::quiet_NaN();
  BoolVec observed(2);
  observed << true, false;
  const ImputedRow imputed = impute_row(line_net(), row, observed, cfg);
  CHECK(imputed.values[0] == 0.3);  // observed coordinate untouched
  CHECK(imputed.values[1] > 0.2);
  CHECK(imputed.values[1] < 0.4);
  CHECK(imputed.error >= 0.0);
}

TEST_CASE("impute_row: all-missing row lands on the memorized point") {
  Mat x(100, 3);
  for (Index i = 0; i < 100; ++i) {
    x(i, 0) = 0.3;
    x(i, 1) = 0.7;
    x(i, 2) = 0.2;
  }
  TrainConfig tc;
  tc.learning_rate = 0.5;
  tc.epochs = 1500;
  tc.batch_size = 25;
  tc.seed = 8;
  const MlpParams net = train_autoassociative(x, tc, 2).first;

  ga::GaConfig cfg;
  cfg.seed = 13;
  const Vec row = Vec::Constant(3, std::numeric_limits<double>::quiet_NaN());
  const BoolVec observed = BoolVec::Constant(3, false);
  const ImputedRow imputed = impute_row(net, row, observed, cfg);
  CHECK(std::abs(imputed.values[0] - 0.3) < 0.05);
  CHECK(std::abs(imputed.values[1] - 0.7) < 0.05);
  CHECK(std::abs(imputed.values[2] - 0.2) < 0.05);
}

TEST_CASE("impute_dataset: no-op on complete data") {
  Rng rng(73);
  const Dataset d = Dataset::from_matrix(testutil::random_matrix(10, 3, rng));
  ImputerSpec spec;
  spec.method = ImputeMethod::column_mean;
  const ImputationResult res = impute_dataset(d, spec);
  CHECK(res.filled_cells.empty());
  CHECK(res.row_errors.empty());
  CHECK(testutil::bit_equal(res.completed.values, d.values));
}

TEST_CASE("impute_dataset: column mean and zero fill") {
  Dataset d = Dataset::from_matrix((Mat(3, 2) << 2, 1, 4, 1, 0, 1).finished(), {"a", "b"});
  d.mask(2, 0) = false;
  d.values(2, 0) = std::numeric_limits<double>::quiet_NaN();

  ImputerSpec mean_spec;
  mean_spec.method = ImputeMethod::column_mean;
  const ImputationResult mean_res = impute_dataset(d, mean_spec);
  CHECK(mean_res.completed.values(2, 0) == doctest::Approx(3.0));
  REQUIRE(mean_res.filled_cells.size() == 1);
  CHECK(mean_res.filled_cells[0].row == 2);
  CHECK(mean_res.filled_cells[0].col == 0);
  CHECK(mean_res.completed.mask.all());

  ImputerSpec zero_spec;
  zero_spec.method = ImputeMethod::zero_fill;
  const ImputationResult zero_res = impute_dataset(d, zero_spec);
  CHECK(zero_res.completed.values(2, 0) == 0.0);
}

TEST_CASE("impute_dataset: unimputable column") {
  Dataset d = Dataset::from_matrix(Mat::Zero(2, 2), {"a", "b"});
  d.mask.col(1).setConstant(false);
  ImputerSpec spec;
  spec.method = ImputeMethod::column_mean;
  CHECK_THROWS_WITH_AS(impute_dataset(d, spec), doctest::Contains("'b'"), DataError);
}

TEST_CASE("impute_dataset: correlation machine beats column mean on linear structure") {
  Rng rng(79);
  Mat truth_values(300, 3);
  for (Index i = 0; i < 300; ++i) {
    const double a = rng.uniform();
    const double b = rng.uniform();
    truth_values(i, 0) = a;
    truth_values(i, 1) = b;
    truth_values(i, 2) = a + b;
  }
  const Dataset truth = Dataset::from_matrix(truth_values, {"x1", "x2", "x3"});
  auto [masked, hidden] = testutil::hide_mcar(truth, 0.1, rng);

  TrainConfig tc;
  tc.learning_rate = 0.5;
  tc.epochs = 1200;
  tc.batch_size = 32;
  tc.seed = 17;
  ga::GaConfig gc;
  gc.generations = 80;
  gc.seed = 19;
  const auto [spec, train_rep] = make_correlation_imputer(masked, 2, tc, gc);
  const ImputationResult corr = impute_dataset(masked, spec);

  ImputerSpec mean_spec;
  mean_spec.method = ImputeMethod::column_mean;
  const ImputationResult mean = impute_dataset(masked, mean_spec);

  const double corr_rmse = evaluate_imputation(truth, corr, hidden);
  const double mean_rmse = evaluate_imputation(truth, mean, hidden);
  CHECK(corr_rmse < mean_rmse);
}

TEST_CASE("impute_dataset: observed cells bit-exact, fills inside observed range") {
  Rng rng(83);
  const Dataset truth = Dataset::from_matrix(testutil::random_matrix(60, 3, rng, -7.0, 13.0));
  auto [masked, hidden] = testutil::hide_mcar(truth, 0.2, rng);
  const NormalizationParams limits = fit_normalization(masked);

  TrainConfig tc;
  tc.epochs = 50;
  tc.seed = 29;
  ga::GaConfig gc;
  gc.generations = 20;
  gc.seed = 31;
  const auto [corr_spec, rep] = make_correlation_imputer(masked, 0, tc, gc);

  ImputerSpec mean_spec;
  mean_spec.method = ImputeMethod::column_mean;

  for (const ImputerSpec* spec : {&corr_spec, &mean_spec}) {
    const ImputationResult res = impute_dataset(masked, *spec);
    CHECK(res.completed.mask.all());
    for (Index r = 0; r < masked.n_rows(); ++r) {
      for (Index c = 0; c < masked.n_cols(); ++c) {
        if (masked.mask(r, c)) {
          CHECK(res.completed.values(r, c) == masked.values(r, c));  // bit-exact
        } else {
          CHECK(res.completed.values(r, c) >= limits.min[c]);
          CHECK(res.completed.values(r, c) <= limits.max[c]);
        }
      }
    }
  }
}

TEST_CASE("impute_dataset: deterministic given net, seed and data") {
  Rng rng(89);
  const Dataset truth = Dataset::from_matrix(testutil::random_matrix(30, 3, rng));
  auto [masked, hidden] = testutil::hide_mcar(truth, 0.15, rng);
  TrainConfig tc;
  tc.epochs = 60;
  tc.seed = 41;
  ga::GaConfig gc;
  gc.generations = 25;
  gc.seed = 43;
  const auto [spec, rep] = make_correlation_imputer(masked, 0, tc, gc);
  const ImputationResult a = impute_dataset(masked, spec);
  const ImputationResult b = impute_dataset(masked, spec);
  CHECK(testutil::bit_equal(a.completed.values, b.completed.values));
}

TEST_CASE("evaluate_imputation: exact values and re-summation") {
  const Dataset truth = Dataset::from_matrix((Mat(2, 2) << 2, 0, 1, 1).finished());
  ImputationResult res;
  res.completed = truth;
  BoolMat eval = BoolMat::Constant(2, 2, false);

  CHECK_THROWS_AS(evaluate_imputation(truth, res, eval), DataError);  // empty eval mask

  eval(0, 0) = true;
  CHECK(evaluate_imputation(truth, res, eval) == 0.0);

  res.completed.values(0, 0) = 5.0;  // truth 2, filled 5
  CHECK(evaluate_imputation(truth, res, eval) == doctest::Approx(3.0));

  Rng rng(97);
  const Dataset t2 = Dataset::from_matrix(testutil::random_matrix(20, 4, rng));
  ImputationResult r2;
  r2.completed = t2;
  BoolMat eval2 = BoolMat::Constant(20, 4, false);
  double manual = 0.0;
  int count = 0;
  for (Index r = 0; r < 20; ++r) {
    for (Index c = 0; c < 4; ++c) {
      if (rng.uniform() < 0.3) {
        eval2(r, c) = true;
        const double fill = rng.uniform();
        r2.completed.values(r, c) = fill;
        manual += (t2.values(r, c) - fill) * (t2.values(r, c) - fill);
        ++count;
      }
    }
  }
  const double expected = std::sqrt(manual / count);
  CHECK(evaluate_imputation(t2, r2, eval2) == doctest::Approx(expected).epsilon(1e-12));
}
