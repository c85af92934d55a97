#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flexbound/dataset.hpp"
#include "flexbound/ga.hpp"
#include "flexbound/imputation.hpp"
#include "flexbound/mlp.hpp"
#include "flexbound/rationality.hpp"
#include "flexbound/signal.hpp"
#include "flexbound/types.hpp"

namespace flexbound {

/// bounded: column-mean imputation and raw time-domain features.
/// flexibly_bounded: correlation-machine imputation and any transform domain.
enum class PipelineMode { bounded, flexibly_bounded };

PipelineMode parse_mode(const std::string& name);
std::string to_string(PipelineMode m);

struct ModelConfig {
  std::vector<Index> hidden_sizes;  // empty -> one default-sized hidden layer
  Activation output = Activation::linear;
  TrainConfig train;
};

struct PipelineConfig {
  PipelineMode mode = PipelineMode::bounded;
  Domain transform = Domain::time;
  FeatureParams transform_params;
  double train_fraction = 0.75;
  Index correlation_hidden = 0;  // 0 -> default_hidden_size(n_features)
  TrainConfig correlation_train;
  ModelConfig model;
  ga::GaConfig ga;  // genome bounds are derived per row
  std::uint64_t seed = 0;

  /// The mode fixes the imputer family.
  [[nodiscard]] ImputeMethod imputer() const {
    return mode == PipelineMode::bounded ? ImputeMethod::column_mean
                                         : ImputeMethod::correlation_machine;
  }

  /// Parses and validates; a transform or imputer that conflicts with the
  /// mode is rejected here.
  static PipelineConfig from_json(const nlohmann::json& j);
  [[nodiscard]] nlohmann::json to_json() const;
};

struct RunReport {
  std::string mode;
  std::uint64_t seed = 0;
  std::string data_path;
  std::string target;
  Index n_rows = 0;
  Index n_feature_cols = 0;
  Index missing_cells = 0;
  InformationPowerReport info_power;  // of the feature block, before imputation

  std::string impute_method;
  std::vector<FilledCell> filled_cells;
  std::vector<RowError> imputation_row_errors;
  std::optional<TrainReport> correlation_train;  // present when the machine was trained

  std::string transform;
  Index feature_length = 0;

  TrainReport train;
  Index n_train = 0;
  Index n_test = 0;
  double test_mse = 0.0;
  std::optional<double> test_accuracy;  // sigmoid-output models only

  [[nodiscard]] nlohmann::json to_json() const;
};

struct PipelineResult {
  RunReport report;
  MlpParams model;
};

/// Full staged run: load -> impute (per mode) -> normalize + transform ->
/// split -> train the decision model -> evaluate on the held-out rows.
/// Deterministic given cfg.seed; stage errors carry a stage tag.
PipelineResult run_pipeline(const std::string& data_path, const PipelineConfig& cfg,
                            const std::string& target_column);

/// Runs both configs (which must share the seed) on the same data and target
/// and reports side-by-side metrics, the delta and which mode won.
nlohmann::json compare_modes(const std::string& data_path, const PipelineConfig& first,
                             const PipelineConfig& second, const std::string& target_column);

}  // namespace flexbound
