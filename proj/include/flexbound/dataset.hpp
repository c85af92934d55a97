#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "flexbound/types.hpp"

namespace flexbound {

/// Numeric table with an explicit observed/missing mask. Masked cells hold a
/// quiet-NaN sentinel and are never read by any operation.
struct Dataset {
  std::vector<std::string> column_names;
  Mat values;    // n_rows x n_cols
  BoolMat mask;  // same shape, true = observed

  [[nodiscard]] Index n_rows() const { return values.rows(); }
  [[nodiscard]] Index n_cols() const { return values.cols(); }
  [[nodiscard]] Index observed_count() const { return mask.count(); }
  [[nodiscard]] Index missing_count() const { return mask.size() - mask.count(); }
  [[nodiscard]] bool fully_observed() const { return mask.all(); }

  /// Index of a named column, -1 when absent.
  [[nodiscard]] Index column_index(const std::string& name) const;

  /// Shape and finiteness invariants; throws DataError on violation.
  void check() const;

  /// Fully observed dataset from a plain matrix; names default to c0..c{n-1}.
  static Dataset from_matrix(Mat values, std::vector<std::string> names = {});
};

/// Per-column [min, max] over observed cells, mapping values into [0, 1].
struct NormalizationParams {
  Vec min;
  Vec max;

  [[nodiscard]] Index n_cols() const { return min.size(); }
};

struct SplitSpec {
  double train_fraction = 0.75;  // in (0, 1)
  std::uint64_t seed = 0;
};

const std::set<std::string>& default_missing_tokens();  // {"", "NaN", "nan", "?"}

/// Reads a comma-separated file with a header row. Cells whose trimmed text is
/// empty or in `missing_tokens` become masked; everything else must parse as a
/// finite real. Errors carry 1-based row/column positions.
Dataset load_csv(const std::string& path,
                 const std::set<std::string>& missing_tokens = default_missing_tokens());

/// Writes a dataset back out; masked cells are emitted as `missing_token`.
void write_csv(const Dataset& d, const std::string& path,
               const std::string& missing_token = "NaN");

/// Min/max over observed cells only. Errors on a column with no observed cell.
NormalizationParams fit_normalization(const Dataset& d);

/// Observed cells mapped to (v - min) / (max - min); constant columns map to
/// 0.5. Mask and masked cells are untouched.
Dataset normalize(const Dataset& d, const NormalizationParams& p);

/// Inverse of normalize on observed cells; constant columns map back to min.
Dataset denormalize(const Dataset& d, const NormalizationParams& p);

/// Seed-deterministic row partition. Train size is round(train_fraction * n).
std::pair<std::vector<Index>, std::vector<Index>> split_indices(Index n_rows,
                                                                const SplitSpec& s);
std::pair<Dataset, Dataset> split(const Dataset& d, const SplitSpec& s);

/// Row subset, keeping the given order.
Dataset take_rows(const Dataset& d, const std::vector<Index>& rows);

}  // namespace flexbound
