#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flexbound/dataset.hpp"
#include "flexbound/types.hpp"

namespace flexbound {

enum class StepKind { rational, irrational };

StepKind parse_step_kind(const std::string& name);
std::string to_string(StepKind k);

/// One step of a decision process with its impact weight ("power").
struct ProcessStep {
  std::string label;
  StepKind kind = StepKind::rational;
  double power = 0.0;  // finite, >= 0
};

struct DecisionProcess {
  std::string name;
  std::vector<ProcessStep> steps;  // at least one
};

enum class Verdict { satisficing, not_satisficing };

std::string to_string(Verdict v);

struct RationalityReport {
  double rational_power = 0.0;
  double irrational_power = 0.0;
  double ratio = 0.0;  // +infinity when irrational_power == 0
  double threshold = 1.0;
  bool marginalizable = false;  // ratio strictly above threshold
  Verdict verdict = Verdict::not_satisficing;
};

struct InformationPowerReport {
  double observed_power = 0.0;
  double missing_power = 0.0;
  double ratio = 0.0;  // +infinity when nothing is missing
};

/// Sums of step power by kind: (rational, irrational).
std::pair<double, double> aggregate_powers(const DecisionProcess& p);

/// rational / irrational; +infinity when the denominator is zero. Both powers
/// zero is an invalid process and errors.
double rationality_ratio(double rational_power, double irrational_power);

/// Tags, aggregates and judges a process: the irrational steps are
/// marginalizable iff the power ratio strictly exceeds the threshold, and the
/// verdict is satisficing exactly when they are.
RationalityReport assess_satisficing(const DecisionProcess& p, double threshold);

/// Observed-vs-missing information power of a dataset. Unweighted power is
/// the cell count; optional per-column positive weights scale the counts.
InformationPowerReport information_power_ratio(
    const Dataset& d, const std::optional<Vec>& column_weights = std::nullopt);

}  // namespace flexbound
