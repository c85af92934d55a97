#include "flexbound/ga.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "flexbound/errors.hpp"
#include "flexbound/rng.hpp"

namespace flexbound::ga {

namespace {

double evaluate(const FitnessFn& fitness, const Vec& genome) {
  const double f = fitness(genome);
  if (!std::isfinite(f)) {
    std::ostringstream oss;
    oss << "ga: non-finite fitness " << f << " at genome [";
    for (Index i = 0; i < genome.size(); ++i) {
      if (i > 0) oss << ", ";
      oss << genome[i];
    }
    oss << "]";
    throw NumericError(oss.str());
  }
  return f;
}

Index tournament(const std::vector<double>& fit, int k, Rng& rng) {
  Index best = static_cast<Index>(rng.below(fit.size()));
  for (int i = 1; i < k; ++i) {
    const Index c = static_cast<Index>(rng.below(fit.size()));
    if (fit[c] < fit[best]) best = c;
  }
  return best;
}

}  // namespace

void GaConfig::check_operators() const {
  if (population_size < 2) throw ConfigError("ga: population_size must be >= 2");
  if (generations < 1) throw ConfigError("ga: generations must be >= 1");
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
    throw ConfigError("ga: crossover_rate must lie in [0, 1]");
  }
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
    throw ConfigError("ga: mutation_rate must lie in [0, 1]");
  }
  if (!(mutation_sigma > 0.0) || !std::isfinite(mutation_sigma)) {
    throw ConfigError("ga: mutation_sigma must be positive");
  }
  if (tournament_size < 1) throw ConfigError("ga: tournament_size must be >= 1");
  if (elitism_count < 0 || elitism_count >= population_size) {
    throw ConfigError("ga: elitism_count must lie in [0, population_size)");
  }
}

void GaConfig::check() const {
  check_operators();
  if (bounds.empty()) throw ConfigError("ga: bounds must not be empty");
  for (const auto& [lo, hi] : bounds) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
      throw ConfigError("ga: every gene needs finite bounds with low < high");
    }
  }
}

GaReport run(const FitnessFn& fitness, const GaConfig& cfg) {
  cfg.check();
  const Index n_genes = static_cast<Index>(cfg.bounds.size());
  const int pop_size = cfg.population_size;
  Rng rng(cfg.seed);

  std::vector<Vec> pop(pop_size, Vec(n_genes));
  for (auto& genome : pop) {
    for (Index g = 0; g < n_genes; ++g) {
      genome[g] = rng.uniform(cfg.bounds[g].first, cfg.bounds[g].second);
    }
  }
  std::vector<double> fit(pop_size);
  for (int i = 0; i < pop_size; ++i) fit[i] = evaluate(fitness, pop[i]);

  GaReport report;
  report.best_fitness = std::numeric_limits<double>::infinity();
  auto track_best = [&](const Vec& genome, double f) {
    if (f < report.best_fitness) {
      report.best_fitness = f;
      report.best_genome = genome;
    }
  };
  for (int i = 0; i < pop_size; ++i) track_best(pop[i], fit[i]);

  std::vector<Index> rank(pop_size);
  for (int gen = 0; gen < cfg.generations; ++gen) {
    // Elites first: ranked by (fitness, index) so ties are deterministic.
    std::iota(rank.begin(), rank.end(), Index{0});
    std::sort(rank.begin(), rank.end(), [&](Index a, Index b) {
      return fit[a] != fit[b] ? fit[a] < fit[b] : a < b;
    });
    std::vector<Vec> next;
    next.reserve(pop_size);
    for (int e = 0; e < cfg.elitism_count; ++e) next.push_back(pop[rank[e]]);

    // All draws happen here; fitness evaluation follows as a pure map.
    while (static_cast<int>(next.size()) < pop_size) {
      const Vec& pa = pop[tournament(fit, cfg.tournament_size, rng)];
      const Vec& pb = pop[tournament(fit, cfg.tournament_size, rng)];
      Vec child;
      if (rng.uniform() < cfg.crossover_rate) {
        const double alpha = rng.uniform();
        child = alpha * pa + (1.0 - alpha) * pb;
      } else {
        child = pa;
      }
      for (Index g = 0; g < n_genes; ++g) {
        if (rng.uniform() < cfg.mutation_rate) {
          const double range = cfg.bounds[g].second - cfg.bounds[g].first;
          child[g] += rng.normal() * cfg.mutation_sigma * range;
        }
        child[g] = std::clamp(child[g], cfg.bounds[g].first, cfg.bounds[g].second);
      }
      next.push_back(std::move(child));
    }

    pop = std::move(next);
    for (int i = 0; i < pop_size; ++i) fit[i] = evaluate(fitness, pop[i]);
    for (int i = 0; i < pop_size; ++i) track_best(pop[i], fit[i]);
    report.best_fitness_trace.push_back(*std::min_element(fit.begin(), fit.end()));
  }
  return report;
}

GaReport maximize(const FitnessFn& fitness, const GaConfig& cfg) {
  GaReport report = run([&](const Vec& g) { return -fitness(g); }, cfg);
  report.best_fitness = -report.best_fitness;
  for (double& v : report.best_fitness_trace) v = -v;
  return report;
}

}  // namespace flexbound::ga
