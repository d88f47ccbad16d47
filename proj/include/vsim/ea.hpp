#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "vsim/rng.hpp"

namespace vsim {

using Genotype = std::vector<double>;

struct Individual {
  Genotype genotype;
  double fitness = 0.0;  // minimized
};

struct EAConfig {
  int population = 100;  // mu = lambda
  int tournament = 8;
  int generations = 100;
  double p_crossover = 0.8;
  double p_mutation = 0.2;  // must complement p_crossover; the operators are exclusive
  double mutation_sigma = 0.15;
  double alpha_low = -1.0;   // crossover blend range
  double alpha_high = 2.0;
  int diversity_retries = 10;
  uint64_t seed = 0;
  int threads = 1;  // evaluation workers; the result does not depend on the count
};

struct GenerationRecord {
  int iteration = 0;
  double best = 0.0;
  double median = 0.0;
  double sd = 0.0;
  uint64_t best_hash = 0;
};

using EvolutionHistory = std::vector<GenerationRecord>;

struct EvolveResult {
  Individual best;
  EvolutionHistory history;
};

// adds iid N(0, sigma^2) noise to every coordinate
Genotype gaussian_mutation(const Genotype& g, double sigma, SeededRng& rng);

// child = x1 + alpha (.) (x2 - x1) with alpha_i ~ U(alpha_low, alpha_high)
// drawn per coordinate; extends past both parents when alpha leaves [0, 1]
Genotype extended_segment_crossover(const Genotype& x1, const Genotype& x2, double alpha_low,
                                    double alpha_high, SeededRng& rng);

// n_tour draws with replacement; returns the index of the sampled individual
// with the lowest fitness, ties broken by the lower population index
int tournament_select(const std::vector<Individual>& population, int n_tour, SeededRng& rng);

// FNV-1a over the raw coordinate bytes
uint64_t genotype_hash(const Genotype& g);

// mu+lambda evolution: each generation breeds `population` children (blend
// crossover with probability p_crossover, Gaussian mutation otherwise), skips
// bitwise duplicates of parents or earlier siblings for up to
// diversity_retries attempts, then keeps the best `population` of parents
// plus children. The fitness callback runs on worker threads when
// threads > 1; a callback that throws scores +infinity. History holds one
// record per iteration, starting with the initial population as iteration 0.
EvolveResult evolve(const EAConfig& config, int dimension, double init_low, double init_high,
                    const std::function<double(const Genotype&)>& fitness);

}  // namespace vsim
