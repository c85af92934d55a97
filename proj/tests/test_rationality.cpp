#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "flexbound/errors.hpp"
#include "flexbound/rationality.hpp"
#include "helpers.hpp"

using namespace flexbound;

namespace {

DecisionProcess make_process(std::vector<std::pair<StepKind, double>> steps) {
  DecisionProcess p;
  p.name = "test";
  int i = 0;
  for (const auto& [kind, power] : steps) {
    p.steps.push_back({"step" + std::to_string(i++), kind, power});
  }
  return p;
}

}  // namespace

TEST_CASE("aggregate_powers") {
  // The canonical 95%-participation case: 0.05 rational vs 0.95 irrational.
  const auto [r1, i1] = aggregate_powers(
      make_process({{StepKind::rational, 0.05}, {StepKind::irrational, 0.95}}));
  CHECK(r1 == doctest::Approx(0.05));
  CHECK(i1 == doctest::Approx(0.95));

  const auto [r2, i2] = aggregate_powers(
      make_process({{StepKind::rational, 1.0}, {StepKind::rational, 2.5}}));
  CHECK(r2 == doctest::Approx(3.5));
  CHECK(i2 == 0.0);

  const auto [r3, i3] = aggregate_powers(make_process({{StepKind::rational, 1},
                                                       {StepKind::irrational, 2},
                                                       {StepKind::rational, 3},
                                                       {StepKind::irrational, 4}}));
  CHECK(r3 == doctest::Approx(4.0));
  CHECK(i3 == doctest::Approx(6.0));

  CHECK_THROWS_AS(aggregate_powers(DecisionProcess{"empty", {}}), DataError);
  CHECK_THROWS_AS(aggregate_powers(make_process({{StepKind::rational, -1.0}})), DataError);
}

TEST_CASE("rationality_ratio") {
  CHECK(rationality_ratio(0.05, 0.95) == doctest::Approx(0.0526).epsilon(0.01));
  CHECK(rationality_ratio(1.0, 0.0) == std::numeric_limits<double>::infinity());
  CHECK(rationality_ratio(0.6, 0.4) == doctest::Approx(1.5));
  CHECK(rationality_ratio(0.0, 0.4) == 0.0);
  CHECK_THROWS_AS(rationality_ratio(0.0, 0.0), DataError);
}

TEST_CASE("assess_satisficing: overwhelming irrationality is not satisficing") {
  const RationalityReport report = assess_satisficing(
      make_process({{StepKind::rational, 0.05}, {StepKind::irrational, 0.95}}), 1.0);
  CHECK(report.ratio == doctest::Approx(0.0526).epsilon(0.01));
  CHECK_FALSE(report.marginalizable);
  CHECK(report.verdict == Verdict::not_satisficing);
}

TEST_CASE("assess_satisficing: purely rational process") {
  const RationalityReport report =
      assess_satisficing(make_process({{StepKind::rational, 0.4}}), 1.0);
  CHECK(std::isinf(report.ratio));
  CHECK(report.marginalizable);
  CHECK(report.verdict == Verdict::satisficing);
}

TEST_CASE("assess_satisficing: two-step consultation narrative") {
  // One irrational consult (power 0.3) against a rational one (power 0.7).
  DecisionProcess p;
  p.name = "consultation";
  p.steps.push_back({"astrologer", StepKind::irrational, 0.3});
  p.steps.push_back({"cardiologist", StepKind::rational, 0.7});
  const RationalityReport report = assess_satisficing(p, 1.0);
  CHECK(report.ratio == doctest::Approx(7.0 / 3.0).epsilon(1e-9));
  CHECK(report.verdict == Verdict::satisficing);

  // Equal powers sit exactly on the threshold: strictly-greater loses.
  const RationalityReport boundary = assess_satisficing(
      make_process({{StepKind::irrational, 0.5}, {StepKind::rational, 0.5}}), 1.0);
  CHECK(boundary.ratio == 1.0);
  CHECK_FALSE(boundary.marginalizable);
  CHECK(boundary.verdict == Verdict::not_satisficing);
}

TEST_CASE("assess_satisficing: validation") {
  const auto p = make_process({{StepKind::rational, 1.0}});
  CHECK_THROWS_AS(assess_satisficing(p, 0.0), ConfigError);
  CHECK_THROWS_AS(assess_satisficing(p, -2.0), ConfigError);
  CHECK_THROWS_AS(
      assess_satisficing(make_process({{StepKind::rational, 0.0}, {StepKind::irrational, 0.0}}),
                         1.0),
      DataError);
}

TEST_CASE("rationality properties: scaling, permutation, monotonicity") {
  Rng rng(101);
  for (int rep = 0; rep < 200; ++rep) {
    DecisionProcess p;
    p.name = "random";
    const int n = 1 + static_cast<int>(rng.below(6));
    for (int s = 0; s < n; ++s) {
      p.steps.push_back({"s" + std::to_string(s),
                         rng.uniform() < 0.5 ? StepKind::rational : StepKind::irrational,
                         rng.uniform(0.0, 10.0)});
    }
    const auto [rp, ip] = aggregate_powers(p);
    if (rp == 0.0 && ip == 0.0) continue;
    const double threshold = rng.uniform(0.1, 3.0);
    const RationalityReport base = assess_satisficing(p, threshold);

    // Uniform scaling preserves the ratio (within 1e-12 relative) and verdict.
    const double k = rng.uniform(0.01, 100.0);
    DecisionProcess scaled = p;
    for (auto& s : scaled.steps) s.power *= k;
    const RationalityReport after = assess_satisficing(scaled, threshold);
    if (std::isinf(base.ratio)) {
      CHECK(std::isinf(after.ratio));
    } else {
      CHECK(std::abs(after.ratio - base.ratio) <= 1e-12 * std::max(1.0, std::abs(base.ratio)));
    }
    CHECK(after.verdict == base.verdict);

    // Permutation invariance.
    DecisionProcess shuffled = p;
    testutil::shuffle(shuffled.steps, rng);
    const RationalityReport permuted = assess_satisficing(shuffled, threshold);
    CHECK(permuted.ratio == base.ratio);
    CHECK(permuted.verdict == base.verdict);

    // Monotonicity: more rational power never lowers the ratio, more
    // irrational power never raises it.
    DecisionProcess more_rational = p;
    more_rational.steps.push_back({"extra", StepKind::rational, 1.0});
    const RationalityReport up = assess_satisficing(more_rational, threshold);
    CHECK(up.ratio >= base.ratio);

    DecisionProcess more_irrational = p;
    more_irrational.steps.push_back({"extra", StepKind::irrational, 1.0});
    const RationalityReport down = assess_satisficing(more_irrational, threshold);
    CHECK(down.ratio <= base.ratio);
  }
}

TEST_CASE("information_power_ratio: counts and weights") {
  Rng rng(103);
  const Dataset full = Dataset::from_matrix(testutil::random_matrix(10, 10, rng));
  auto [d, hidden] = testutil::hide_mcar(full, 0.0, rng);

  // Hide exactly 10 of the 100 cells.
  int hidden_count = 0;
  for (Index r = 0; r < 10 && hidden_count < 10; ++r) {
    d.mask(r, 3) = false;
    ++hidden_count;
  }
  const InformationPowerReport report = information_power_ratio(d);
  CHECK(report.observed_power == doctest::Approx(90.0));
  CHECK(report.missing_power == doctest::Approx(10.0));
  CHECK(report.ratio == doctest::Approx(9.0));
  CHECK(report.observed_power + report.missing_power == doctest::Approx(100.0));

  const InformationPowerReport complete = information_power_ratio(full);
  CHECK(std::isinf(complete.ratio));

  // Two columns, weights (2, 1): observed column A (5 cells), missing column B.
  Dataset two = Dataset::from_matrix(testutil::random_matrix(5, 2, rng), {"a", "b"});
  two.mask.col(1).setConstant(false);
  const Vec weights = (Vec(2) << 2.0, 1.0).finished();
  const InformationPowerReport weighted = information_power_ratio(two, weights);
  CHECK(weighted.observed_power == doctest::Approx(10.0));
  CHECK(weighted.missing_power == doctest::Approx(5.0));
  CHECK(weighted.ratio == doctest::Approx(2.0));

  CHECK_THROWS_AS(information_power_ratio(two, Vec::Zero(2)), ConfigError);
  CHECK_THROWS_AS(information_power_ratio(two, (Vec(1) << 1.0).finished()), ConfigError);
  CHECK_THROWS_AS(information_power_ratio(Dataset{}), DataError);
}

TEST_CASE("step kind names") {
  CHECK(parse_step_kind("rational") == StepKind::rational);
  CHECK(parse_step_kind("irrational") == StepKind::irrational);
  CHECK_THROWS_AS(parse_step_kind("arational"), DataError);
  CHECK(to_string(Verdict::satisficing) == "satisficing");
  CHECK(to_string(Verdict::not_satisficing) == "not_satisficing");
}
