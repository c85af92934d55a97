#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "flexbound/types.hpp"

namespace flexbound::ga {

struct GaConfig {
  int population_size = 50;
  int generations = 200;
  double crossover_rate = 0.9;
  double mutation_rate = 0.1;
  double mutation_sigma = 0.1;  // fraction of each gene's range
  int tournament_size = 3;
  int elitism_count = 1;
  std::vector<std::pair<double, double>> bounds;  // per gene (low, high)
  std::uint64_t seed = 0;

  void check() const;
  void check_operators() const;  // everything except the bounds
};

struct GaReport {
  Vec best_genome;
  double best_fitness = 0.0;
  std::vector<double> best_fitness_trace;  // population best per generation
};

using FitnessFn = std::function<double(const Vec&)>;

/// Minimizes a pure fitness function over the bounds box: uniform
/// initialization, tournament selection, blend crossover, per-gene Gaussian
/// mutation, clamping, elitism. All randomness is drawn before a
/// generation's fitness evaluations, so the result is independent of
/// evaluation order. Returns the best genome ever evaluated.
GaReport run(const FitnessFn& fitness, const GaConfig& cfg);

/// Maximization as run() on the negated fitness; the report carries
/// un-negated values.
GaReport maximize(const FitnessFn& fitness, const GaConfig& cfg);

}  // namespace flexbound::ga
