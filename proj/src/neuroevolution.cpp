#include "forage/neuroevolution.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "forage/format.hpp"

namespace forage {

void NeConfig::validate() const {
    if (population_size < 2) throw std::invalid_argument("ne: population_size must be >= 2");
    if (!(temperature > 0.0)) throw std::invalid_argument("ne: temperature must be > 0");
    if (tournament_size < 1 || tournament_size > population_size) {
        throw std::invalid_argument("ne: tournament_size must be in [1, population_size]");
    }
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) throw std::invalid_argument("ne: mutation_rate must be in [0, 1]");
    if (!(mutation_sigma >= 0.0)) throw std::invalid_argument("ne: mutation_sigma must be >= 0");
}

Population make_population(Rng& rng, const NeConfig& config, Architecture arch, std::size_t input_dim,
                           std::size_t outputs) {
    config.validate();
    Population pop;
    pop.temperature = config.temperature;
    pop.genomes.reserve(config.population_size);
    for (std::size_t i = 0; i < config.population_size; ++i) {
        pop.genomes.push_back(Genome{init_params(rng, arch, input_dim, outputs), 0.0, 0});
    }
    return pop;
}

std::vector<double> selection_probabilities(const Population& pop) {
    std::vector<double> w(pop.size());
    double top = -std::numeric_limits<double>::infinity();
    for (const Genome& g : pop.genomes) top = std::max(top, g.fitness);
    double total = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = std::exp((pop.genomes[i].fitness - top) / pop.temperature);
        total += w[i];
    }
    for (double& x : w) x /= total;
    return w;
}

std::size_t select_network(const Population& pop, Rng& rng) {
    const std::vector<double> p = selection_probabilities(pop);
    std::discrete_distribution<std::size_t> pick(p.begin(), p.end());
    return pick(rng);
}

void update_fitness(Genome& genome, double reward) {
    ++genome.uses;
    genome.fitness += (reward - genome.fitness) / static_cast<double>(genome.uses);
}

std::size_t tournament_select(const Population& pop, std::size_t k, Rng& rng) {
    const std::size_t n = pop.size();
    if (k < 1 || k > n) throw std::invalid_argument("tournament_select: k out of range");

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        std::swap(idx[i], idx[i + uniform_index(rng, n - i)]);
    }

    double best = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> leaders;
    for (std::size_t i = 0; i < k; ++i) {
        const double f = pop.genomes[idx[i]].fitness;
        if (f > best) {
            best = f;
            leaders.assign(1, idx[i]);
        } else if (f == best) {
            leaders.push_back(idx[i]);
        }
    }
    return leaders.size() == 1 ? leaders.front() : leaders[uniform_index(rng, leaders.size())];
}

NetParams arithmetic_crossover(const NetParams& a, const NetParams& b, double alpha) {
    if (!same_shape(a, b)) throw std::invalid_argument("arithmetic_crossover: parent architectures differ");
    NetParams child = a;
    auto out = flat(child);
    auto pb = flat(b);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = pb[i] + alpha * (out[i] - pb[i]);
    return child;
}

NetParams arithmetic_crossover(const NetParams& a, const NetParams& b, Rng& rng) {
    return arithmetic_crossover(a, b, uniform01(rng));
}

void mutate(NetParams& params, double rate, double sigma, Rng& rng) {
    std::normal_distribution<double> noise(0.0, sigma);
    for (double& w : flat(params)) {
        if (uniform01(rng) < rate) w += noise(rng);
    }
}

std::size_t weakest(const Population& pop) {
    std::size_t worst = 0;
    for (std::size_t i = 1; i < pop.size(); ++i) {
        if (pop.genomes[i].fitness < pop.genomes[worst].fitness) worst = i;
    }
    return worst;
}

std::size_t evolve_step(Population& pop, const NeConfig& config, Rng& rng) {
    const std::size_t a = tournament_select(pop, config.tournament_size, rng);
    const std::size_t b = tournament_select(pop, config.tournament_size, rng);
    NetParams child = arithmetic_crossover(pop.genomes[a].params, pop.genomes[b].params, rng);
    mutate(child, config.mutation_rate, config.mutation_sigma, rng);

    const std::size_t slot = weakest(pop);
    pop.genomes[slot] = Genome{std::move(child), 0.0, 0};
    return slot;
}

std::size_t argmax_random_tie(std::span<const double> scores, Rng& rng) {
    const double best = *std::max_element(scores.begin(), scores.end());
    std::size_t ties = 0;
    for (double s : scores) ties += s == best ? 1 : 0;
    std::size_t pick = ties == 1 ? 0 : uniform_index(rng, ties);
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i] == best && pick-- == 0) return i;
    }
    return 0;
}

NeAgent::NeAgent(Population population, NeConfig config, std::size_t window_length)
    : pop_(std::move(population)), config_(config), window_(window_length) {
    config_.validate();
}

std::size_t NeAgent::decide(const Observation& obs, Rng& rng) {
    window_.push(obs);
    const std::size_t chosen = select_network(pop_, rng);
    acting_ = chosen;
    const std::vector<double> scores = forward(pop_.genomes[chosen].params, window_);
    return argmax_random_tie(scores, rng);
}

void NeAgent::learn(double reward, Rng& rng) {
    if (!acting_) return;
    update_fitness(pop_.genomes[*acting_], reward);
    acting_.reset();
    evolve_step(pop_, config_, rng);
}

namespace {
constexpr const char* kPopulationMagic = "forage-population";
constexpr int kPopulationVersion = 1;
}  // namespace

void write_population(std::ostream& os, const Population& pop) {
    os << kPopulationMagic << " v" << kPopulationVersion << '\n';
    os << "temperature " << format_double(pop.temperature) << '\n';
    os << "genomes " << pop.size() << '\n';
    for (const Genome& g : pop.genomes) {
        os << format_double(g.fitness) << ' ' << g.uses << ' ';
        write_params(os, g.params);
        os << '\n';
    }
}

Population read_population(std::istream& is) {
    std::string magic, version, key, tok;
    if (!(is >> magic >> version) || magic != kPopulationMagic) {
        throw std::runtime_error("read_population: not a population checkpoint");
    }
    if (version != "v" + std::to_string(kPopulationVersion)) {
        throw std::runtime_error("read_population: unsupported version " + version);
    }
    Population pop;
    if (!(is >> key >> tok) || key != "temperature") throw std::runtime_error("read_population: missing temperature");
    pop.temperature = parse_double(tok);
    std::size_t n = 0;
    if (!(is >> key >> n) || key != "genomes") throw std::runtime_error("read_population: missing genome count");
    pop.genomes.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Genome g;
        if (!(is >> tok >> g.uses)) {
            throw std::runtime_error("read_population: truncated at genome " + std::to_string(i));
        }
        g.fitness = parse_double(tok);
        g.params = read_params(is);
        pop.genomes.push_back(std::move(g));
    }
    return pop;
}

}  // namespace forage
