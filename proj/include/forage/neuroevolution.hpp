#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <vector>

#include "forage/nets.hpp"
#include "forage/policy.hpp"
#include "forage/rng.hpp"

namespace forage {

struct NeConfig {
    std::size_t population_size = 30;
    double temperature = 1.0;
    std::size_t tournament_size = 3;
    double mutation_rate = 0.1;
    double mutation_sigma = 0.1;

    void validate() const;
};

struct Genome {
    NetParams params;
    double fitness = 0.0;  ///< running mean of rewards; 0 until first use
    std::size_t uses = 0;
};

struct Population {
    std::vector<Genome> genomes;
    double temperature = 1.0;

    std::size_t size() const { return genomes.size(); }
};

Population make_population(Rng& rng, const NeConfig& config, Architecture arch, std::size_t input_dim,
                           std::size_t outputs);

/// Probability of each genome under softmax(fitness / temperature), max-shifted.
std::vector<double> selection_probabilities(const Population& pop);

std::size_t select_network(const Population& pop, Rng& rng);

void update_fitness(Genome& genome, double reward);

/// Samples k distinct genomes; highest fitness wins, ties uniformly at random.
std::size_t tournament_select(const Population& pop, std::size_t k, Rng& rng);

/// child = alpha * a + (1 - alpha) * b with a single alpha ~ U(0, 1).
NetParams arithmetic_crossover(const NetParams& a, const NetParams& b, Rng& rng);
NetParams arithmetic_crossover(const NetParams& a, const NetParams& b, double alpha);

/// Each weight is perturbed with probability `rate` by N(0, sigma).
void mutate(NetParams& params, double rate, double sigma, Rng& rng);

/// Index of the lowest-fitness genome; ties resolved to the lowest index.
std::size_t weakest(const Population& pop);

/// Tournament, crossover and mutation; the child overwrites the weakest slot.
/// Returns the replaced index.
std::size_t evolve_step(Population& pop, const NeConfig& config, Rng& rng);

/// Index of the largest score; ties uniformly at random.
std::size_t argmax_random_tie(std::span<const double> scores, Rng& rng);

/// Online neuro-evolution learner owned by one agent.
class NeAgent {
public:
    NeAgent(Population population, NeConfig config, std::size_t window_length);

    /// Selects a network by softmax over fitness and returns the argmax of its scores.
    std::size_t decide(const Observation& obs, Rng& rng);

    /// Credits the network that acted this step, then runs one evolution cycle.
    void learn(double reward, Rng& rng);

    const Population& population() const { return pop_; }
    Population& population() { return pop_; }
    const ObservationWindow& window() const { return window_; }
    std::optional<std::size_t> acting() const { return acting_; }

private:
    Population pop_;
    NeConfig config_;
    ObservationWindow window_;
    std::optional<std::size_t> acting_;
};

/// Versioned text checkpoint: header, then one genome per line (fitness, uses, params).
void write_population(std::ostream& os, const Population& pop);
Population read_population(std::istream& is);

}  // namespace forage
