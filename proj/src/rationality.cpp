#include "flexbound/rationality.hpp"

#include <cmath>
#include <limits>

#include "flexbound/errors.hpp"

namespace flexbound {

StepKind parse_step_kind(const std::string& name) {
  if (name == "rational") return StepKind::rational;
  if (name == "irrational") return StepKind::irrational;
  throw DataError("unknown step kind '" + name + "' (expected rational or irrational)");
}

std::string to_string(StepKind k) {
  return k == StepKind::rational ? "rational" : "irrational";
}

std::string to_string(Verdict v) {
  return v == Verdict::satisficing ? "satisficing" : "not_satisficing";
}

std::pair<double, double> aggregate_powers(const DecisionProcess& p) {
  if (p.steps.empty()) throw DataError("process '" + p.name + "' has no steps");
  double rational = 0.0;
  double irrational = 0.0;
  for (const ProcessStep& s : p.steps) {
    if (!std::isfinite(s.power) || s.power < 0.0) {
      throw DataError("step '" + s.label + "': power must be finite and >= 0");
    }
    (s.kind == StepKind::rational ? rational : irrational) += s.power;
  }
  return {rational, irrational};
}

double rationality_ratio(double rational_power, double irrational_power) {
  if (!(rational_power >= 0.0) || !(irrational_power >= 0.0)) {
    throw DataError("rationality_ratio: powers must be >= 0");
  }
  if (irrational_power > 0.0) return rational_power / irrational_power;
  if (rational_power > 0.0) return std::numeric_limits<double>::infinity();
  throw DataError("rationality_ratio: both powers are zero, the process is invalid");
}

RationalityReport assess_satisficing(const DecisionProcess& p, double threshold) {
  if (!(threshold > 0.0) || !std::isfinite(threshold)) {
    throw ConfigError("assess_satisficing: threshold must be positive and finite");
  }
  RationalityReport report;
  std::tie(report.rational_power, report.irrational_power) = aggregate_powers(p);
  report.ratio = rationality_ratio(report.rational_power, report.irrational_power);
  report.threshold = threshold;
  report.marginalizable = report.ratio > threshold;  // strict
  report.verdict = report.marginalizable ? Verdict::satisficing : Verdict::not_satisficing;
  return report;
}

InformationPowerReport information_power_ratio(const Dataset& d,
                                               const std::optional<Vec>& column_weights) {
  if (d.values.size() == 0) throw DataError("information_power_ratio: dataset has no cells");
  if (column_weights) {
    if (column_weights->size() != d.n_cols()) {
      throw ConfigError("information_power_ratio: need one weight per column");
    }
    for (Index c = 0; c < column_weights->size(); ++c) {
      if (!((*column_weights)[c] > 0.0) || !std::isfinite((*column_weights)[c])) {
        throw ConfigError("information_power_ratio: weights must be positive and finite");
      }
    }
  }

  InformationPowerReport report;
  for (Index c = 0; c < d.n_cols(); ++c) {
    const double w = column_weights ? (*column_weights)[c] : 1.0;
    for (Index r = 0; r < d.n_rows(); ++r) {
      (d.mask(r, c) ? report.observed_power : report.missing_power) += w;
    }
  }
  report.ratio = report.missing_power > 0.0
                     ? report.observed_power / report.missing_power
                     : std::numeric_limits<double>::infinity();
  return report;
}

}  // namespace flexbound
