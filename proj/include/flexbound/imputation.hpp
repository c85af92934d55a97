#pragma once

#include <string>
#include <utility>
#include <vector>

#include "flexbound/dataset.hpp"
#include "flexbound/ga.hpp"
#include "flexbound/mlp.hpp"
#include "flexbound/types.hpp"

namespace flexbound {

enum class ImputeMethod { correlation_machine, column_mean, zero_fill };

ImputeMethod parse_impute_method(const std::string& name);
std::string to_string(ImputeMethod m);

/// Imputer selection. The net drives the correlation machine only and must be
/// autoassociative over all columns; ga is a template whose genome bounds are
/// derived per row.
struct ImputerSpec {
  ImputeMethod method = ImputeMethod::column_mean;
  MlpParams net;
  ga::GaConfig ga;
};

struct FilledCell {
  Index row = 0;
  Index col = 0;
  double value = 0.0;
};

struct RowError {
  Index row = 0;
  double error = 0.0;
};

struct ImputationResult {
  Dataset completed;                    // mask all-true
  std::vector<FilledCell> filled_cells; // row-major order
  std::vector<RowError> row_errors;     // one entry per originally incomplete row
};

/// Squared Euclidean distance between x and its autoassociative reconstruction.
double reconstruction_error(const MlpParams& net, const Vec& x);

struct ImputedRow {
  Vec values;
  double error = 0.0;  // final reconstruction error of the completed row
};

/// Completes one normalized row: the GA searches the missing coordinates over
/// [0, 1] to minimize reconstruction error; observed coordinates pass through
/// untouched.
ImputedRow impute_row(const MlpParams& net, const Vec& row, const BoolVec& observed,
                      const ga::GaConfig& ga_template);

/// Completes a dataset with the selected method. Observed cells are preserved
/// bit-exactly; the correlation machine works in normalized space and
/// denormalizes its fills back into column units.
ImputationResult impute_dataset(const Dataset& d, const ImputerSpec& spec);

/// RMSE over artificially hidden cells with known truth.
double evaluate_imputation(const Dataset& truth, const ImputationResult& result,
                           const BoolMat& eval_mask);

/// Trains the autoassociative net on the normalized complete rows of d and
/// returns a ready correlation-machine spec plus the training report.
std::pair<ImputerSpec, TrainReport> make_correlation_imputer(const Dataset& d,
                                                             Index hidden_size,
                                                             const TrainConfig& train_cfg,
                                                             const ga::GaConfig& ga_cfg);

}  // namespace flexbound
