#include "flexbound/imputation.hpp"

#include <cmath>

#include "flexbound/errors.hpp"

namespace flexbound {

ImputeMethod parse_impute_method(const std::string& name) {
  if (name == "correlation_machine") return ImputeMethod::correlation_machine;
  if (name == "column_mean") return ImputeMethod::column_mean;
  if (name == "zero_fill") return ImputeMethod::zero_fill;
  throw ConfigError("unknown imputation method '" + name +
                    "' (expected correlation_machine, column_mean or zero_fill)");
}

std::string to_string(ImputeMethod m) {
  switch (m) {
    case ImputeMethod::correlation_machine: return "correlation_machine";
    case ImputeMethod::column_mean: return "column_mean";
    case ImputeMethod::zero_fill: return "zero_fill";
  }
  return "?";
}

double reconstruction_error(const MlpParams& net, const Vec& x) {
  return (x - forward(net, x)).squaredNorm();
}

ImputedRow impute_row(const MlpParams& net, const Vec& row, const BoolVec& observed,
                      const ga::GaConfig& ga_template) {
  if (row.size() != observed.size()) {
    throw DataError("impute_row: row and mask lengths differ");
  }
  if (row.size() != net.input_size() || row.size() != net.output_size()) {
    throw ConfigError("impute_row: net is not autoassociative over the row length");
  }
  std::vector<Index> missing;
  for (Index i = 0; i < row.size(); ++i) {
    if (!observed[i]) {
      missing.push_back(i);
    } else if (!std::isfinite(row[i])) {
      throw DataError("impute_row: observed coordinate " + std::to_string(i) +
                      " is not finite");
    }
  }
  if (missing.empty()) {
    throw DataError("impute_row: row is fully observed, nothing to impute");
  }

  ga::GaConfig cfg = ga_template;
  cfg.bounds.assign(missing.size(), {0.0, 1.0});

  Vec candidate = row;
  const auto fitness = [&](const Vec& genome) {
    for (std::size_t j = 0; j < missing.size(); ++j) candidate[missing[j]] = genome[j];
    return reconstruction_error(net, candidate);
  };
  const ga::GaReport report = ga::run(fitness, cfg);

  ImputedRow out;
  out.values = row;
  for (std::size_t j = 0; j < missing.size(); ++j) {
    out.values[missing[j]] = report.best_genome[j];
  }
  out.error = report.best_fitness;
  return out;
}

ImputationResult impute_dataset(const Dataset& d, const ImputerSpec& spec) {
  d.check();
  if (d.n_rows() < 1 || d.n_cols() < 1) throw DataError("impute_dataset: empty dataset");
  for (Index c = 0; c < d.n_cols(); ++c) {
    if (!d.mask.col(c).any()) {
      throw DataError("impute_dataset: column '" + d.column_names[c] +
                      "' has no observed cells and cannot be imputed");
    }
  }

  ImputationResult res;
  res.completed = d;
  res.completed.mask.setConstant(true);

  std::vector<Index> incomplete;
  for (Index r = 0; r < d.n_rows(); ++r) {
    if (!d.mask.row(r).all()) incomplete.push_back(r);
  }

  switch (spec.method) {
    case ImputeMethod::zero_fill: {
      for (Index r : incomplete) {
        for (Index c = 0; c < d.n_cols(); ++c) {
          if (!d.mask(r, c)) {
            res.completed.values(r, c) = 0.0;
            res.filled_cells.push_back({r, c, 0.0});
          }
        }
        res.row_errors.push_back({r, 0.0});
      }
      break;
    }
    case ImputeMethod::column_mean: {
      Vec mean(d.n_cols());
      for (Index c = 0; c < d.n_cols(); ++c) {
        double sum = 0.0;
        Index cnt = 0;
        for (Index r = 0; r < d.n_rows(); ++r) {
          if (d.mask(r, c)) {
            sum += d.values(r, c);
            ++cnt;
          }
        }
        mean[c] = sum / static_cast<double>(cnt);
      }
      for (Index r : incomplete) {
        for (Index c = 0; c < d.n_cols(); ++c) {
          if (!d.mask(r, c)) {
            res.completed.values(r, c) = mean[c];
            res.filled_cells.push_back({r, c, mean[c]});
          }
        }
        res.row_errors.push_back({r, 0.0});
      }
      break;
    }
    case ImputeMethod::correlation_machine: {
      if (spec.net.layer_sizes.empty() || spec.net.input_size() != d.n_cols() ||
          spec.net.output_size() != d.n_cols()) {
        throw ConfigError(
            "impute_dataset: correlation machine net must be autoassociative over " +
            std::to_string(d.n_cols()) + " columns");
      }
      const NormalizationParams params = fit_normalization(d);
      const Dataset dn = normalize(d, params);
      for (Index r : incomplete) {
        const Vec nrow = dn.values.row(r);
        const BoolVec obs = dn.mask.row(r).transpose();
        ga::GaConfig cfg = spec.ga;
        cfg.seed = spec.ga.seed + static_cast<std::uint64_t>(r);  // per-row stream
        const ImputedRow ir = impute_row(spec.net, nrow, obs, cfg);
        for (Index c = 0; c < d.n_cols(); ++c) {
          if (d.mask(r, c)) continue;
          const double range = params.max[c] - params.min[c];
          const double filled =
              range > 0.0 ? ir.values[c] * range + params.min[c] : params.min[c];
          res.completed.values(r, c) = filled;
          res.filled_cells.push_back({r, c, filled});
        }
        res.row_errors.push_back({r, ir.error});
      }
      break;
    }
  }
  res.completed.check();
  return res;
}

double evaluate_imputation(const Dataset& truth, const ImputationResult& result,
                           const BoolMat& eval_mask) {
  const Dataset& filled = result.completed;
  if (truth.values.rows() != filled.values.rows() ||
      truth.values.cols() != filled.values.cols() ||
      eval_mask.rows() != truth.values.rows() || eval_mask.cols() != truth.values.cols()) {
    throw DataError("evaluate_imputation: shape mismatch");
  }
  double sum_sq = 0.0;
  Index count = 0;
  for (Index r = 0; r < truth.values.rows(); ++r) {
    for (Index c = 0; c < truth.values.cols(); ++c) {
      if (!eval_mask(r, c)) continue;
      const double diff = truth.values(r, c) - filled.values(r, c);
      sum_sq += diff * diff;
      ++count;
    }
  }
  if (count == 0) throw DataError("evaluate_imputation: empty eval mask");
  return std::sqrt(sum_sq / static_cast<double>(count));
}

std::pair<ImputerSpec, TrainReport> make_correlation_imputer(const Dataset& d,
                                                             Index hidden_size,
                                                             const TrainConfig& train_cfg,
                                                             const ga::GaConfig& ga_cfg) {
  d.check();
  std::vector<Index> complete;
  for (Index r = 0; r < d.n_rows(); ++r) {
    if (d.mask.row(r).all()) complete.push_back(r);
  }
  if (complete.empty()) {
    throw DataError("correlation machine: no complete rows to train on");
  }
  const NormalizationParams params = fit_normalization(d);
  const Dataset dn = normalize(d, params);
  Mat x(static_cast<Index>(complete.size()), d.n_cols());
  for (Index i = 0; i < static_cast<Index>(complete.size()); ++i) {
    x.row(i) = dn.values.row(complete[i]);
  }
  const Index hidden = hidden_size > 0 ? hidden_size : default_hidden_size(d.n_cols());
  TrainConfig tc = train_cfg;
  tc.batch_size = std::min<Index>(tc.batch_size, x.rows());
  auto [net, report] = train_autoassociative(x, tc, hidden);

  ImputerSpec spec;
  spec.method = ImputeMethod::correlation_machine;
  spec.net = std::move(net);
  spec.ga = ga_cfg;
  return {std::move(spec), std::move(report)};
}

}  // namespace flexbound
