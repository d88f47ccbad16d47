#include "vsim/ea.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_set>

namespace vsim {

namespace {

void validate(const EAConfig& c, int dimension) {
  if (c.population < 1) throw std::invalid_argument("population must be positive");
  if (c.tournament < 1) throw std::invalid_argument("tournament size must be positive");
  if (c.generations < 0) throw std::invalid_argument("generations must be non-negative");
  if (c.p_crossover < 0.0 || c.p_mutation < 0.0 ||
      std::abs(c.p_crossover + c.p_mutation - 1.0) > 1e-12)
    throw std::invalid_argument("operator probabilities must be non-negative and sum to 1");
  if (c.mutation_sigma <= 0.0) throw std::invalid_argument("mutation sigma must be positive");
  if (c.alpha_high <= c.alpha_low) throw std::invalid_argument("empty crossover alpha range");
  if (c.diversity_retries < 0) throw std::invalid_argument("diversity retries must be non-negative");
  if (c.threads < 1) throw std::invalid_argument("thread count must be positive");
  if (dimension < 1) throw std::invalid_argument("genotype dimension must be positive");
}

std::string genotype_key(const Genotype& g) {
  std::string key(g.size() * sizeof(double), '\0');
  if (!g.empty()) std::memcpy(key.data(), g.data(), key.size());
  return key;
}

double guarded_fitness(const std::function<double(const Genotype&)>& fitness, const Genotype& g) {
  try {
    double f = fitness(g);
    return std::isnan(f) ? std::numeric_limits<double>::infinity() : f;
  } catch (const std::exception&) {
    return std::numeric_limits<double>::infinity();
  }
}

// fills fitnesses for individuals [begin, end); slot-indexed so the outcome
// is identical for any worker count
void evaluate_range(std::vector<Individual>& pop, size_t begin, size_t end,
                    const std::function<double(const Genotype&)>& fitness, int threads) {
  if (threads <= 1 || end - begin <= 1) {
    for (size_t i = begin; i < end; ++i) pop[i].fitness = guarded_fitness(fitness, pop[i].genotype);
    return;
  }
  std::atomic<size_t> next{begin};
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= end) return;
      pop[i].fitness = guarded_fitness(fitness, pop[i].genotype);
    }
  };
  size_t n_workers = std::min<size_t>(threads, end - begin);
  std::vector<std::thread> workers;
  workers.reserve(n_workers);
  for (size_t w = 0; w < n_workers; ++w) workers.emplace_back(worker);
  for (auto& t : workers) t.join();
}

GenerationRecord make_record(int iteration, const std::vector<Individual>& pop) {
  GenerationRecord rec;
  rec.iteration = iteration;
  std::vector<double> fit;
  fit.reserve(pop.size());
  size_t best = 0;
  for (size_t i = 0; i < pop.size(); ++i) {
    fit.push_back(pop[i].fitness);
    if (pop[i].fitness < pop[best].fitness) best = i;
  }
  rec.best = pop[best].fitness;
  rec.best_hash = genotype_hash(pop[best].genotype);
  std::sort(fit.begin(), fit.end());
  size_t n = fit.size();
  rec.median = (n % 2 == 1) ? fit[n / 2] : 0.5 * (fit[n / 2 - 1] + fit[n / 2]);
  double mean = 0.0;
  for (double f : fit) mean += f;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double f : fit) var += (f - mean) * (f - mean);
  rec.sd = std::sqrt(var / static_cast<double>(n));
  return rec;
}

}  // namespace

Genotype gaussian_mutation(const Genotype& g, double sigma, SeededRng& rng) {
  Genotype child(g.size());
  for (size_t i = 0; i < g.size(); ++i) child[i] = g[i] + rng.normal(0.0, sigma);
  return child;
}

Genotype extended_segment_crossover(const Genotype& x1, const Genotype& x2, double alpha_low,
                                    double alpha_high, SeededRng& rng) {
  if (x1.size() != x2.size()) throw std::invalid_argument("crossover parents differ in dimension");
  Genotype child(x1.size());
  for (size_t i = 0; i < x1.size(); ++i) {
    double alpha = rng.uniform(alpha_low, alpha_high);
    child[i] = x1[i] + alpha * (x2[i] - x1[i]);
  }
  return child;
}

int tournament_select(const std::vector<Individual>& population, int n_tour, SeededRng& rng) {
  if (population.empty()) throw std::invalid_argument("empty population");
  int best = -1;
  for (int t = 0; t < n_tour; ++t) {
    int i = static_cast<int>(rng.uniform_int(population.size()));
    if (best < 0 || population[i].fitness < population[best].fitness ||
        (population[i].fitness == population[best].fitness && i < best))
      best = i;
  }
  return best;
}

uint64_t genotype_hash(const Genotype& g) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (double v : g) {
    uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (bits >> (8 * byte)) & 0xFFu;
      h *= 0x100000001B3ULL;
    }
  }
  return h;
}

EvolveResult evolve(const EAConfig& config, int dimension, double init_low, double init_high,
                    const std::function<double(const Genotype&)>& fitness) {
  validate(config, dimension);
  SeededRng rng(config.seed);
  size_t n = static_cast<size_t>(config.population);

  std::vector<Individual> pop(n);
  for (auto& ind : pop) {
    ind.genotype.resize(dimension);
    for (double& v : ind.genotype) v = rng.uniform(init_low, init_high);
  }
  evaluate_range(pop, 0, n, fitness, config.threads);

  EvolveResult result;
  result.history.push_back(make_record(0, pop));

  for (int gen = 1; gen <= config.generations; ++gen) {
    std::unordered_set<std::string> seen;
    seen.reserve(2 * n);
    for (const auto& ind : pop) seen.insert(genotype_key(ind.genotype));

    std::vector<Individual> merged = pop;
    merged.reserve(2 * n);
    for (size_t i = 0; i < n; ++i) {
      Genotype child;
      for (int attempt = 0;; ++attempt) {
        if (rng.next_double() < config.p_crossover) {
          const Genotype& p1 = pop[tournament_select(pop, config.tournament, rng)].genotype;
          const Genotype& p2 = pop[tournament_select(pop, config.tournament, rng)].genotype;
          child = extended_segment_crossover(p1, p2, config.alpha_low, config.alpha_high, rng);
        } else {
          const Genotype& p = pop[tournament_select(pop, config.tournament, rng)].genotype;
          child = gaussian_mutation(p, config.mutation_sigma, rng);
        }
        if (attempt >= config.diversity_retries || !seen.count(genotype_key(child))) break;
      }
      seen.insert(genotype_key(child));
      merged.push_back({std::move(child), 0.0});
    }
    evaluate_range(merged, n, 2 * n, fitness, config.threads);

    // survivors: best n of parents plus children, earlier index on ties
    std::stable_sort(merged.begin(), merged.end(),
                     [](const Individual& a, const Individual& b) { return a.fitness < b.fitness; });
    merged.resize(n);
    pop = std::move(merged);
    result.history.push_back(make_record(gen, pop));
  }

  size_t best = 0;
  for (size_t i = 1; i < pop.size(); ++i)
    if (pop[i].fitness < pop[best].fitness) best = i;
  result.best = pop[best];
  return result;
}

}  // namespace vsim
