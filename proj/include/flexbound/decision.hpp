#pragma once

#include <string>
#include <vector>

#include "flexbound/types.hpp"

namespace flexbound {

struct UtilityOption {
  std::string label;
  double impact = 0.0;
  double probability = 0.0;  // in [0, 1]
};

/// Alternatives under consideration; probabilities need not sum to 1.
struct UtilitySpec {
  std::vector<UtilityOption> options;
};

struct DecisionOutcome {
  std::string chosen_label;
  Index chosen_index = 0;
  std::vector<double> expected_utilities;  // impact * probability, per option
};

/// Rational choice: pick the option with the highest expected utility,
/// breaking ties toward the lowest index.
DecisionOutcome choose_rational(const UtilitySpec& u);

}  // namespace flexbound
