#include "flexbound/decision.hpp"

#include <cmath>

#include "flexbound/errors.hpp"

namespace flexbound {

DecisionOutcome choose_rational(const UtilitySpec& u) {
  if (u.options.empty()) throw DataError("choose_rational: no options to choose from");
  DecisionOutcome out;
  out.expected_utilities.reserve(u.options.size());
  for (std::size_t i = 0; i < u.options.size(); ++i) {
    const UtilityOption& opt = u.options[i];
    if (!std::isfinite(opt.impact)) {
      throw DataError("option '" + opt.label + "': impact must be finite");
    }
    if (!(opt.probability >= 0.0 && opt.probability <= 1.0)) {
      throw DataError("option '" + opt.label + "': probability must lie in [0, 1]");
    }
    const double eu = opt.impact * opt.probability;
    out.expected_utilities.push_back(eu);
    if (i == 0 || eu > out.expected_utilities[static_cast<std::size_t>(out.chosen_index)]) {
      out.chosen_index = static_cast<Index>(i);
    }
  }
  out.chosen_label = u.options[static_cast<std::size_t>(out.chosen_index)].label;
  return out;
}

}  // namespace flexbound
