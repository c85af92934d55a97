#include "flexbound/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "flexbound/errors.hpp"
#include "flexbound/json_util.hpp"
#include "flexbound/rng.hpp"

namespace flexbound {

using nlohmann::json;

namespace {

// Stage tags for seed derivation; every stochastic component gets its own
// stream off cfg.seed so the bounded/flexible twins stay comparable.
constexpr std::uint64_t kSplitStage = 1;
constexpr std::uint64_t kModelInitStage = 2;
constexpr std::uint64_t kModelTrainStage = 3;
constexpr std::uint64_t kCorrelationStage = 4;
constexpr std::uint64_t kGaStage = 5;

template <class F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.code(), std::string(name) + ": " + e.what());
  }
}

TrainConfig train_config_from_json(const json& j, const char* context) {
  check_keys(j, {"learning_rate", "epochs", "batch_size", "init_scale", "early_stop_tol",
                 "hidden_size", "hidden_sizes", "output"},
             context);
  TrainConfig cfg;
  cfg.learning_rate = get_or(j, "learning_rate", cfg.learning_rate);
  cfg.epochs = get_or(j, "epochs", cfg.epochs);
  cfg.batch_size = get_or(j, "batch_size", cfg.batch_size);
  cfg.init_scale = get_or(j, "init_scale", cfg.init_scale);
  cfg.early_stop_tol = get_or(j, "early_stop_tol", cfg.early_stop_tol);
  return cfg;
}

json train_report_to_json(const TrainReport& r) {
  json j;
  j["epochs_run"] = r.epochs_run;
  j["final_loss"] = r.final_loss;
  j["loss_trace"] = r.epoch_loss;
  return j;
}

Dataset drop_column(const Dataset& d, Index col) {
  Dataset out;
  out.values.resize(d.n_rows(), d.n_cols() - 1);
  out.mask.resize(d.n_rows(), d.n_cols() - 1);
  Index k = 0;
  for (Index c = 0; c < d.n_cols(); ++c) {
    if (c == col) continue;
    out.column_names.push_back(d.column_names[c]);
    out.values.col(k) = d.values.col(c);
    out.mask.col(k) = d.mask.col(c);
    ++k;
  }
  return out;
}

}  // namespace

PipelineMode parse_mode(const std::string& name) {
  if (name == "bounded") return PipelineMode::bounded;
  if (name == "flexibly_bounded") return PipelineMode::flexibly_bounded;
  throw ConfigError("unknown mode '" + name + "' (expected bounded or flexibly_bounded)");
}

std::string to_string(PipelineMode m) {
  return m == PipelineMode::bounded ? "bounded" : "flexibly_bounded";
}

PipelineConfig PipelineConfig::from_json(const json& j) {
  check_keys(j, {"mode", "transform", "imputer", "split", "correlation", "model", "ga", "seed"},
             "config");
  PipelineConfig cfg;
  cfg.mode = parse_mode(get_or<std::string>(j, "mode", "bounded"));
  cfg.seed = get_or<std::uint64_t>(j, "seed", 0);

  if (j.contains("transform")) {
    const json& t = j.at("transform");
    check_keys(t, {"domain", "window_size", "hop"}, "config.transform");
    cfg.transform = parse_domain(get_or<std::string>(t, "domain", "time"));
    cfg.transform_params.window_size = get_or(t, "window_size", cfg.transform_params.window_size);
    cfg.transform_params.hop = get_or(t, "hop", cfg.transform_params.hop);
  }
  if (cfg.mode == PipelineMode::bounded && cfg.transform != Domain::time) {
    throw ConfigError("config: bounded mode always uses the time-domain identity transform");
  }

  if (j.contains("imputer")) {
    const json& imp = j.at("imputer");
    check_keys(imp, {"method"}, "config.imputer");
    const ImputeMethod m = parse_impute_method(get_or<std::string>(imp, "method", to_string(cfg.imputer())));
    if (m != cfg.imputer()) {
      throw ConfigError("config: " + to_string(cfg.mode) + " mode requires the " +
                        to_string(cfg.imputer()) + " imputer, got " + to_string(m));
    }
  }

  if (j.contains("split")) {
    const json& s = j.at("split");
    check_keys(s, {"train_fraction"}, "config.split");
    cfg.train_fraction = get_or(s, "train_fraction", cfg.train_fraction);
  }
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0)) {
    throw ConfigError("config: split.train_fraction must lie in (0, 1)");
  }

  if (j.contains("correlation")) {
    const json& c = j.at("correlation");
    cfg.correlation_train = train_config_from_json(c, "config.correlation");
    cfg.correlation_hidden = get_or<Index>(c, "hidden_size", 0);
    if (cfg.correlation_hidden < 0) {
      throw ConfigError("config.correlation: hidden_size must be >= 0 (0 = default)");
    }
  }

  if (j.contains("model")) {
    const json& m = j.at("model");
    cfg.model.train = train_config_from_json(m, "config.model");
    cfg.model.hidden_sizes = get_or(m, "hidden_sizes", cfg.model.hidden_sizes);
    for (Index h : cfg.model.hidden_sizes) {
      if (h < 1) throw ConfigError("config.model: hidden_sizes must be positive");
    }
    cfg.model.output = parse_activation(get_or<std::string>(m, "output", "linear"));
  }

  if (j.contains("ga")) {
    const json& g = j.at("ga");
    check_keys(g,
               {"population_size", "generations", "crossover_rate", "mutation_rate",
                "mutation_sigma", "tournament_size", "elitism_count"},
               "config.ga");
    cfg.ga.population_size = get_or(g, "population_size", cfg.ga.population_size);
    cfg.ga.generations = get_or(g, "generations", cfg.ga.generations);
    cfg.ga.crossover_rate = get_or(g, "crossover_rate", cfg.ga.crossover_rate);
    cfg.ga.mutation_rate = get_or(g, "mutation_rate", cfg.ga.mutation_rate);
    cfg.ga.mutation_sigma = get_or(g, "mutation_sigma", cfg.ga.mutation_sigma);
    cfg.ga.tournament_size = get_or(g, "tournament_size", cfg.ga.tournament_size);
    cfg.ga.elitism_count = get_or(g, "elitism_count", cfg.ga.elitism_count);
  }
  cfg.ga.check_operators();
  return cfg;
}

json PipelineConfig::to_json() const {
  json j;
  j["mode"] = to_string(mode);
  j["seed"] = seed;
  j["transform"] = {{"domain", to_string(transform)},
                    {"window_size", transform_params.window_size},
                    {"hop", transform_params.hop}};
  j["imputer"] = {{"method", to_string(imputer())}};
  j["split"] = {{"train_fraction", train_fraction}};
  j["correlation"] = {{"hidden_size", correlation_hidden},
                      {"learning_rate", correlation_train.learning_rate},
                      {"epochs", correlation_train.epochs},
                      {"batch_size", correlation_train.batch_size},
                      {"init_scale", correlation_train.init_scale},
                      {"early_stop_tol", correlation_train.early_stop_tol}};
  j["model"] = {{"hidden_sizes", model.hidden_sizes},
                {"output", to_string(model.output)},
                {"learning_rate", model.train.learning_rate},
                {"epochs", model.train.epochs},
                {"batch_size", model.train.batch_size},
                {"init_scale", model.train.init_scale},
                {"early_stop_tol", model.train.early_stop_tol}};
  j["ga"] = {{"population_size", ga.population_size},
             {"generations", ga.generations},
             {"crossover_rate", ga.crossover_rate},
             {"mutation_rate", ga.mutation_rate},
             {"mutation_sigma", ga.mutation_sigma},
             {"tournament_size", ga.tournament_size},
             {"elitism_count", ga.elitism_count}};
  return j;
}

json RunReport::to_json() const {
  json j;
  j["mode"] = mode;
  j["seed"] = seed;
  j["data"] = {{"path", data_path},
               {"target", target},
               {"n_rows", n_rows},
               {"n_feature_cols", n_feature_cols},
               {"missing_cells", missing_cells}};
  j["information_power"] = {{"observed_power", info_power.observed_power},
                            {"missing_power", info_power.missing_power},
                            {"ratio", json_ratio(info_power.ratio)}};
  json imp;
  imp["method"] = impute_method;
  imp["filled_cells"] = json::array();
  for (const FilledCell& f : filled_cells) {
    imp["filled_cells"].push_back({{"row", f.row}, {"col", f.col}, {"value", f.value}});
  }
  imp["row_errors"] = json::array();
  for (const RowError& e : imputation_row_errors) {
    imp["row_errors"].push_back({{"row", e.row}, {"error", e.error}});
  }
  if (correlation_train) {
    imp["correlation_train"] = train_report_to_json(*correlation_train);
  }
  j["imputation"] = std::move(imp);
  j["transform"] = {{"domain", transform}, {"feature_length", feature_length}};
  j["train"] = train_report_to_json(train);
  json test = {{"n_train", n_train}, {"n_test", n_test}, {"mse", test_mse}};
  if (test_accuracy) test["accuracy"] = *test_accuracy;
  j["test"] = std::move(test);
  return j;
}

PipelineResult run_pipeline(const std::string& data_path, const PipelineConfig& cfg,
                            const std::string& target_column) {
  const Dataset d = stage("load", [&] { return load_csv(data_path); });

  const Index tcol = d.column_index(target_column);
  if (tcol < 0) throw DataError("load: target column '" + target_column + "' not found");
  if (!d.mask.col(tcol).all()) {
    throw DataError("load: target column '" + target_column + "' has missing cells");
  }
  if (d.n_cols() < 2) throw DataError("load: need at least one feature column");

  const Dataset features = drop_column(d, tcol);
  const Vec targets = d.values.col(tcol);

  RunReport report;
  report.mode = to_string(cfg.mode);
  report.seed = cfg.seed;
  report.data_path = data_path;
  report.target = target_column;
  report.n_rows = d.n_rows();
  report.n_feature_cols = features.n_cols();
  report.missing_cells = features.missing_count();
  report.info_power = information_power_ratio(features);
  report.impute_method = to_string(cfg.imputer());

  // Imputation; skipped entirely when nothing is missing so both modes
  // coincide on complete data.
  ImputationResult imp;
  if (features.fully_observed()) {
    imp.completed = features;
  } else {
    imp = stage("impute", [&] {
      if (cfg.imputer() == ImputeMethod::column_mean) {
        ImputerSpec spec;
        spec.method = ImputeMethod::column_mean;
        return impute_dataset(features, spec);
      }
      TrainConfig tc = cfg.correlation_train;
      tc.seed = derive_seed(cfg.seed, kCorrelationStage);
      ga::GaConfig gc = cfg.ga;
      gc.seed = derive_seed(cfg.seed, kGaStage);
      auto [spec, train_rep] = make_correlation_imputer(features, cfg.correlation_hidden, tc, gc);
      report.correlation_train = std::move(train_rep);
      return impute_dataset(features, spec);
    });
  }
  report.filled_cells = imp.filled_cells;
  report.imputation_row_errors = imp.row_errors;

  // Transform: normalized completed rows into the configured domain.
  const Domain domain = cfg.mode == PipelineMode::bounded ? Domain::time : cfg.transform;
  report.transform = to_string(domain);
  const Mat feature_matrix = stage("transform", [&] {
    const NormalizationParams params = fit_normalization(imp.completed);
    const Dataset cn = normalize(imp.completed, params);
    const Index flen = feature_length(cn.n_cols(), domain, cfg.transform_params);
    Mat f(cn.n_rows(), flen);
    for (Index r = 0; r < cn.n_rows(); ++r) {
      f.row(r) = extract_features(cn.values.row(r), domain, cfg.transform_params);
    }
    return f;
  });
  report.feature_length = feature_matrix.cols();

  // Split.
  const auto [train_idx, test_idx] = stage("split", [&] {
    return split_indices(d.n_rows(), {cfg.train_fraction, derive_seed(cfg.seed, kSplitStage)});
  });
  const auto gather = [&](const std::vector<Index>& rows, Mat& x, Mat& y) {
    x.resize(static_cast<Index>(rows.size()), feature_matrix.cols());
    y.resize(static_cast<Index>(rows.size()), 1);
    for (Index i = 0; i < static_cast<Index>(rows.size()); ++i) {
      x.row(i) = feature_matrix.row(rows[i]);
      y(i, 0) = targets[rows[i]];
    }
  };
  Mat x_train, y_train, x_test, y_test;
  gather(train_idx, x_train, y_train);
  gather(test_idx, x_test, y_test);
  report.n_train = x_train.rows();
  report.n_test = x_test.rows();

  // Decision model.
  auto [model, train_rep] = stage("train", [&] {
    std::vector<Index> sizes{feature_matrix.cols()};
    if (cfg.model.hidden_sizes.empty()) {
      sizes.push_back(default_hidden_size(feature_matrix.cols()));
    } else {
      sizes.insert(sizes.end(), cfg.model.hidden_sizes.begin(), cfg.model.hidden_sizes.end());
    }
    sizes.push_back(1);
    MlpParams net = make_mlp(sizes, cfg.model.output, derive_seed(cfg.seed, kModelInitStage),
                             cfg.model.train.init_scale);
    TrainConfig tc = cfg.model.train;
    tc.seed = derive_seed(cfg.seed, kModelTrainStage);
    tc.batch_size = std::min<Index>(tc.batch_size, x_train.rows());
    return train(std::move(net), x_train, y_train, tc);
  });
  report.train = std::move(train_rep);

  // Held-out evaluation.
  stage("evaluate", [&] {
    const Mat pred = forward_batch(model, x_test);
    report.test_mse = (pred - y_test).squaredNorm() / static_cast<double>(x_test.rows());
    if (cfg.model.output == Activation::sigmoid) {
      Index correct = 0;
      for (Index i = 0; i < pred.rows(); ++i) {
        if ((pred(i, 0) > 0.5) == (y_test(i, 0) > 0.5)) ++correct;
      }
      report.test_accuracy = static_cast<double>(correct) / static_cast<double>(pred.rows());
    }
    return 0;
  });

  return {std::move(report), std::move(model)};
}

json compare_modes(const std::string& data_path, const PipelineConfig& first,
                   const PipelineConfig& second, const std::string& target_column) {
  if (first.seed != second.seed) {
    throw ConfigError("compare: both configs must share the same seed");
  }
  const PipelineResult a = run_pipeline(data_path, first, target_column);
  const PipelineResult b = run_pipeline(data_path, second, target_column);

  const bool use_accuracy = a.report.test_accuracy.has_value() &&
                            b.report.test_accuracy.has_value();
  const double ma = use_accuracy ? *a.report.test_accuracy : a.report.test_mse;
  const double mb = use_accuracy ? *b.report.test_accuracy : b.report.test_mse;
  const double delta = mb - ma;
  // Higher accuracy wins; lower mse wins.
  const bool second_wins = use_accuracy ? mb > ma : mb < ma;
  const bool first_wins = use_accuracy ? ma > mb : ma < mb;

  json j;
  j["runs"] = json::array({a.report.to_json(), b.report.to_json()});
  j["metric"] = use_accuracy ? "accuracy" : "mse";
  j["delta"] = delta;
  j["winner"] = second_wins ? b.report.mode : (first_wins ? a.report.mode : "tie");
  return j;
}

}  // namespace flexbound
