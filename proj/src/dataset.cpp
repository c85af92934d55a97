#include "flexbound/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <numeric>
#include <string_view>

#include "flexbound/errors.hpp"
#include "flexbound/rng.hpp"

namespace flexbound {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

Index Dataset::column_index(const std::string& name) const {
  const auto it = std::find(column_names.begin(), column_names.end(), name);
  return it == column_names.end() ? -1 : static_cast<Index>(it - column_names.begin());
}

void Dataset::check() const {
  if (mask.rows() != values.rows() || mask.cols() != values.cols()) {
    throw DataError("dataset: mask shape does not match values shape");
  }
  if (static_cast<Index>(column_names.size()) != values.cols()) {
    throw DataError("dataset: column_names length does not match column count");
  }
  for (Index r = 0; r < values.rows(); ++r) {
    for (Index c = 0; c < values.cols(); ++c) {
      if (mask(r, c) && !std::isfinite(values(r, c))) {
        throw DataError("dataset: observed cell (" + std::to_string(r) + ", " +
                        std::to_string(c) + ") is not finite");
      }
    }
  }
}

Dataset Dataset::from_matrix(Mat values, std::vector<std::string> names) {
  Dataset d;
  if (names.empty()) {
    names.reserve(values.cols());
    for (Index c = 0; c < values.cols(); ++c) names.push_back("c" + std::to_string(c));
  }
  d.column_names = std::move(names);
  d.mask = BoolMat::Constant(values.rows(), values.cols(), true);
  d.values = std::move(values);
  d.check();
  return d;
}

const std::set<std::string>& default_missing_tokens() {
  static const std::set<std::string> tokens = {"", "NaN", "nan", "?"};
  return tokens;
}

Dataset load_csv(const std::string& path, const std::set<std::string>& missing_tokens) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);  // UTF-8 BOM

  std::vector<std::string_view> lines;
  {
    std::string_view rest = text;
    while (!rest.empty()) {
      const std::size_t nl = rest.find('\n');
      std::string_view line = rest.substr(0, nl);
      if (line.ends_with('\r')) line.remove_suffix(1);
      lines.push_back(line);
      if (nl == std::string_view::npos) break;
      rest.remove_prefix(nl + 1);
    }
    // A trailing newline terminates the last row, it does not open a new one.
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
  }
  if (lines.empty()) throw DataError(path + ": empty dataset (no header row)");

  Dataset d;
  for (std::string_view name : split_line(lines[0])) {
    d.column_names.emplace_back(trim(name));
  }
  const Index n_cols = static_cast<Index>(d.column_names.size());
  const Index n_rows = static_cast<Index>(lines.size()) - 1;
  if (n_rows == 0) throw DataError(path + ": empty dataset (header only)");

  d.values.resize(n_rows, n_cols);
  d.mask.resize(n_rows, n_cols);
  for (Index r = 0; r < n_rows; ++r) {
    const auto cells = split_line(lines[r + 1]);
    if (static_cast<Index>(cells.size()) != n_cols) {
      throw DataError(path + ": row " + std::to_string(r + 2) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(n_cols));
    }
    for (Index c = 0; c < n_cols; ++c) {
      const std::string_view cell = trim(cells[c]);
      if (missing_tokens.count(std::string(cell)) > 0) {
        d.values(r, c) = kMissing;
        d.mask(r, c) = false;
        continue;
      }
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        throw DataError(path + ": row " + std::to_string(r + 2) + ", column '" +
                        d.column_names[c] + "': cannot parse '" + std::string(cell) +
                        "' as a finite real");
      }
      d.values(r, c) = v;
      d.mask(r, c) = true;
    }
  }
  return d;
}

void write_csv(const Dataset& d, const std::string& path, const std::string& missing_token) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  for (Index c = 0; c < d.n_cols(); ++c) {
    if (c > 0) out << ',';
    out << d.column_names[c];
  }
  out << '\n';
  for (Index r = 0; r < d.n_rows(); ++r) {
    for (Index c = 0; c < d.n_cols(); ++c) {
      if (c > 0) out << ',';
      if (d.mask(r, c)) {
        out << format_double(d.values(r, c));
      } else {
        out << missing_token;
      }
    }
    out << '\n';
  }
  if (!out) throw DataError("write failed: " + path);
}

NormalizationParams fit_normalization(const Dataset& d) {
  d.check();
  NormalizationParams p;
  p.min.resize(d.n_cols());
  p.max.resize(d.n_cols());
  for (Index c = 0; c < d.n_cols(); ++c) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    Index seen = 0;
    for (Index r = 0; r < d.n_rows(); ++r) {
      if (!d.mask(r, c)) continue;
      lo = std::min(lo, d.values(r, c));
      hi = std::max(hi, d.values(r, c));
      ++seen;
    }
    if (seen == 0) {
      throw DataError("column '" + d.column_names[c] + "' has no observed cells");
    }
    p.min[c] = lo;
    p.max[c] = hi;
  }
  return p;
}

Dataset normalize(const Dataset& d, const NormalizationParams& p) {
  if (p.n_cols() != d.n_cols() || p.max.size() != d.n_cols()) {
    throw DataError("normalize: parameter shape does not match dataset");
  }
  Dataset out = d;
  for (Index c = 0; c < d.n_cols(); ++c) {
    const double range = p.max[c] - p.min[c];
    for (Index r = 0; r < d.n_rows(); ++r) {
      if (!d.mask(r, c)) continue;
      out.values(r, c) = range > 0.0 ? (d.values(r, c) - p.min[c]) / range : 0.5;
    }
  }
  return out;
}

Dataset denormalize(const Dataset& d, const NormalizationParams& p) {
  if (p.n_cols() != d.n_cols() || p.max.size() != d.n_cols()) {
    throw DataError("denormalize: parameter shape does not match dataset");
  }
  Dataset out = d;
  for (Index c = 0; c < d.n_cols(); ++c) {
    const double range = p.max[c] - p.min[c];
    for (Index r = 0; r < d.n_rows(); ++r) {
      if (!d.mask(r, c)) continue;
      out.values(r, c) = range > 0.0 ? d.values(r, c) * range + p.min[c] : p.min[c];
    }
  }
  return out;
}

std::pair<std::vector<Index>, std::vector<Index>> split_indices(Index n_rows,
                                                                const SplitSpec& s) {
  if (!(s.train_fraction > 0.0 && s.train_fraction < 1.0)) {
    throw ConfigError("split: train_fraction must lie in (0, 1)");
  }
  if (n_rows < 2) throw DataError("split: need at least 2 rows");
  const Index n_train = static_cast<Index>(std::llround(s.train_fraction * static_cast<double>(n_rows)));

  std::vector<Index> order(n_rows);
  std::iota(order.begin(), order.end(), Index{0});
  Rng rng(s.seed);
  shuffle(order, rng);

  std::vector<Index> train(order.begin(), order.begin() + n_train);
  std::vector<Index> test(order.begin() + n_train, order.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

Dataset take_rows(const Dataset& d, const std::vector<Index>& rows) {
  Dataset out;
  out.column_names = d.column_names;
  out.values.resize(static_cast<Index>(rows.size()), d.n_cols());
  out.mask.resize(static_cast<Index>(rows.size()), d.n_cols());
  for (Index i = 0; i < static_cast<Index>(rows.size()); ++i) {
    out.values.row(i) = d.values.row(rows[i]);
    out.mask.row(i) = d.mask.row(rows[i]);
  }
  return out;
}

std::pair<Dataset, Dataset> split(const Dataset& d, const SplitSpec& s) {
  const auto [train_idx, test_idx] = split_indices(d.n_rows(), s);
  return {take_rows(d, train_idx), take_rows(d, test_idx)};
}

}  // namespace flexbound
