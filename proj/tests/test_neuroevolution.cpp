#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "forage/neuroevolution.hpp"

using namespace forage;

namespace {

constexpr std::size_t kK = 4;
constexpr std::size_t kDim = 7;

Population flat_population(double fitness = 0.0, std::size_t n = 30) {
    Population pop;
    for (std::size_t i = 0; i < n; ++i) pop.genomes.push_back(Genome{FfnParams(kDim, kK), fitness, 1});
    return pop;
}

double mean_distance(const Population& pop, std::span<const double> target) {
    // Distance from the population's mean weight vector to the target.
    std::vector<double> mean(target.size(), 0.0);
    for (const Genome& g : pop.genomes) {
        auto w = flat(g.params);
        for (std::size_t i = 0; i < w.size(); ++i) mean[i] += w[i] / static_cast<double>(pop.size());
    }
    double d = 0.0;
    for (std::size_t i = 0; i < mean.size(); ++i) d += (mean[i] - target[i]) * (mean[i] - target[i]);
    return std::sqrt(d);
}

}  // namespace

TEST_CASE("softmax network selection") {
    SUBCASE("equal fitness is uniform") {
        for (double p : selection_probabilities(flat_population(0.7))) CHECK(p == doctest::Approx(1.0 / 30.0));
    }
    SUBCASE("one dominant genome") {
        Population pop = flat_population();
        pop.genomes[0].fitness = 10.0;
        const double want = std::exp(10.0) / (std::exp(10.0) + 29.0);
        CHECK(want == doctest::Approx(0.9987).epsilon(1e-4));
        CHECK(selection_probabilities(pop)[0] == doctest::Approx(want).epsilon(1e-12));

        Rng rng(1);
        std::size_t hits = 0;
        for (int i = 0; i < 100000; ++i) hits += select_network(pop, rng) == 0 ? 1 : 0;
        CHECK(static_cast<double>(hits) / 1e5 == doctest::Approx(want).epsilon(0.002));
    }
    SUBCASE("shift invariance") {
        Rng rng(2);
        Population a = flat_population();
        for (Genome& g : a.genomes) g.fitness = uniform01(rng) * 5.0;
        Population b = a;
        for (Genome& g : b.genomes) g.fitness += 123.0;
        const auto pa = selection_probabilities(a);
        const auto pb = selection_probabilities(b);
        for (std::size_t i = 0; i < pa.size(); ++i) CHECK(pa[i] == doctest::Approx(pb[i]).epsilon(1e-9));
    }
    SUBCASE("very high temperature is uniform (chi-square, 29 dof)") {
        Rng rng(3);
        Population pop = flat_population();
        for (std::size_t i = 0; i < 30; ++i) pop.genomes[i].fitness = static_cast<double>(i);
        pop.temperature = 1e12;
        std::vector<double> counts(30, 0.0);
        const int draws = 100000;
        for (int i = 0; i < draws; ++i) counts[select_network(pop, rng)] += 1.0;
        double chi2 = 0.0;
        const double expect = draws / 30.0;
        for (double c : counts) chi2 += (c - expect) * (c - expect) / expect;
        CHECK(chi2 < 58.3);  // 0.999 quantile of chi-square with 29 dof
    }
}

TEST_CASE("update_fitness keeps a running mean") {
    Genome g{FfnParams(kDim, kK), 0.0, 0};
    update_fitness(g, 0.5);
    CHECK(g.fitness == 0.5);
    CHECK(g.uses == 1);
    update_fitness(g, 1.0);
    CHECK(g.fitness == 0.75);
    CHECK(g.uses == 2);

    Genome c{FfnParams(kDim, kK), 0.0, 0};
    for (int i = 0; i < 1000; ++i) {
        update_fitness(c, 0.25);
        CHECK(c.fitness == 0.25);
    }
}

TEST_CASE("tournament selection") {
    Rng rng(4);
    Population pop = flat_population();
    for (std::size_t i = 0; i < 30; ++i) pop.genomes[i].fitness = static_cast<double>(i);

    SUBCASE("full tournament returns the best") {
        for (int i = 0; i < 100; ++i) CHECK(tournament_select(pop, 30, rng) == 29);
    }
    SUBCASE("k = 1 is uniform") {
        std::vector<int> counts(30, 0);
        for (int i = 0; i < 30000; ++i) ++counts[tournament_select(pop, 1, rng)];
        for (int c : counts) CHECK(std::abs(c - 1000) < 150);
    }
    SUBCASE("k = 3 picks the best with probability 1 - C(29,3)/C(30,3)") {
        const double want = 1.0 - (29.0 * 28.0 * 27.0) / (30.0 * 29.0 * 28.0);
        CHECK(want == doctest::Approx(0.1));
        int best = 0;
        for (int i = 0; i < 100000; ++i) best += tournament_select(pop, 3, rng) == 29 ? 1 : 0;
        CHECK(std::abs(best / 1e5 - want) <= 0.01);
    }
    SUBCASE("ties are broken at random") {
        Population tied = flat_population(1.0);
        std::vector<int> counts(30, 0);
        for (int i = 0; i < 30000; ++i) ++counts[tournament_select(tied, 30, rng)];
        for (int c : counts) CHECK(c > 700);
    }
    SUBCASE("k out of range") {
        CHECK_THROWS(tournament_select(pop, 0, rng));
        CHECK_THROWS(tournament_select(pop, 31, rng));
    }
}

TEST_CASE("arithmetic crossover") {
    Rng rng(5);
    SUBCASE("identical parents reproduce themselves") {
        const NetParams a = init_params(rng, Architecture::Lstm, kDim, kK);
        for (int i = 0; i < 10; ++i) CHECK(arithmetic_crossover(a, a, rng) == a);
    }
    SUBCASE("midpoint") {
        FfnParams a(kDim, kK), b(kDim, kK);
        for (double& v : a.flat()) v = 1.0;
        for (double& v : b.flat()) v = 3.0;
        const NetParams child = arithmetic_crossover(NetParams(a), NetParams(b), 0.5);
        for (double v : flat(child)) CHECK(v == 2.0);
    }
    SUBCASE("children stay inside the parents' box") {
        for (int i = 0; i < 1000; ++i) {
            const NetParams a = init_params(rng, Architecture::Feedforward, kDim, kK);
            const NetParams b = init_params(rng, Architecture::Feedforward, kDim, kK);
            const NetParams c = arithmetic_crossover(a, b, rng);
            auto fa = flat(a), fb = flat(b), fc = flat(c);
            for (std::size_t j = 0; j < fc.size(); ++j) {
                CHECK(fc[j] >= std::min(fa[j], fb[j]) - 1e-15);
                CHECK(fc[j] <= std::max(fa[j], fb[j]) + 1e-15);
            }
        }
    }
    SUBCASE("architecture mismatch") {
        const NetParams a = init_params(rng, Architecture::Feedforward, kDim, kK);
        const NetParams b = init_params(rng, Architecture::Lstm, kDim, kK);
        const NetParams c = init_params(rng, Architecture::Feedforward, kDim + 1, kK);
        CHECK_THROWS_AS(arithmetic_crossover(a, b, rng), std::invalid_argument);
        CHECK_THROWS_AS(arithmetic_crossover(a, c, rng), std::invalid_argument);
    }
}

TEST_CASE("mutation") {
    Rng rng(6);
    const NetParams base = init_params(rng, Architecture::Lstm, kDim, kK);
    SUBCASE("rate 0 and sigma 0 are identities") {
        NetParams p = base;
        mutate(p, 0.0, 0.1, rng);
        CHECK(p == base);
        mutate(p, 1.0, 0.0, rng);
        CHECK(p == base);
    }
    SUBCASE("default rate and sigma") {
        std::size_t changed = 0, total = 0;
        double ss = 0.0;
        while (total < 10000) {
            NetParams p = base;
            mutate(p, 0.1, 0.1, rng);
            std::span<const double> a = flat(p), b = flat(base);
            for (std::size_t i = 0; i < a.size(); ++i) {
                ++total;
                if (a[i] != b[i]) {
                    ++changed;
                    ss += (a[i] - b[i]) * (a[i] - b[i]);
                }
            }
        }
        const double rate = static_cast<double>(changed) / static_cast<double>(total);
        CHECK(std::abs(rate - 0.1) <= 0.01);
        CHECK(std::abs(std::sqrt(ss / static_cast<double>(changed)) - 0.1) <= 0.01);
    }
}

TEST_CASE("evolve_step replaces only the weakest slot") {
    Rng rng(7);
    NeConfig cfg;
    Population pop = make_population(rng, cfg, Architecture::Feedforward, kDim, kK);
    for (std::size_t i = 0; i < 30; ++i) {
        pop.genomes[i].fitness = 1.0 + static_cast<double>(i % 7);
        pop.genomes[i].uses = 1;
    }
    pop.genomes[12].fitness = -4.0;
    pop.genomes[20].fitness = -4.0;  // tie: lowest index loses its slot
    const Population before = pop;
    const std::size_t slot = evolve_step(pop, cfg, rng);
    CHECK(slot == 12);
    CHECK(pop.size() == 30);
    CHECK(pop.genomes[12].uses == 0);
    CHECK(pop.genomes[12].fitness == 0.0);
    for (std::size_t i = 0; i < 30; ++i) {
        if (i == slot) continue;
        CHECK(pop.genomes[i].params == before.genomes[i].params);
        CHECK(pop.genomes[i].fitness == before.genomes[i].fitness);
    }
}

TEST_CASE("evolution moves the population toward a synthetic optimum") {
    // Oracle fitness: negative distance to a fixed target weight vector.
    NeConfig cfg;
    int improved = 0;
    const int seeds = 20;
    for (int seed = 0; seed < seeds; ++seed) {
        Rng rng(static_cast<std::uint64_t>(seed) + 100);
        Population pop = make_population(rng, cfg, Architecture::Feedforward, kDim, kK);
        std::vector<double> target(flat(pop.genomes[0].params).size());
        for (double& t : target) t = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
        auto score = [&](Genome& g) {
            auto w = flat(g.params);
            double d = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) d += (w[i] - target[i]) * (w[i] - target[i]);
            g.fitness = -std::sqrt(d);
            g.uses = 1;
        };
        for (Genome& g : pop.genomes) score(g);
        const double start = mean_distance(pop, target);
        for (int step = 0; step < 1000; ++step) score(pop.genomes[evolve_step(pop, cfg, rng)]);
        improved += mean_distance(pop, target) < start ? 1 : 0;
    }
    CHECK(improved >= seeds * 9 / 10);
}

TEST_CASE("NeAgent decisions") {
    SUBCASE("degenerate population always picks the biased output") {
        NeConfig cfg;
        Population pop;
        pop.temperature = cfg.temperature;
        for (int i = 0; i < 30; ++i) {
            FfnParams p(kDim, kK);
            p.b2(2) = 1.0;
            pop.genomes.push_back(Genome{p, 0.0, 0});
        }
        NeAgent agent(pop, cfg, 1);
        Rng rng(1);
        Observation obs{std::vector<double>(kDim, 0.3)};
        for (int i = 0; i < 50; ++i) {
            CHECK(agent.decide(obs, rng) == 2);
            REQUIRE(agent.acting().has_value());
            agent.learn(0.1, rng);
            CHECK(agent.population().size() == 30);
        }
    }
    SUBCASE("fresh random populations give near-uniform first actions") {
        NeConfig cfg;
        std::vector<int> counts(kK, 0);
        Observation obs{{1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0}};
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            Rng rng(seed);
            NeAgent agent(make_population(rng, cfg, Architecture::Feedforward, kDim, kK), cfg, 1);
            ++counts[agent.decide(obs, rng)];
        }
        // Binomial(1000, 1/4): 4 standard deviations is about 55.
        for (int c : counts) CHECK(std::abs(c - 250) < 55);
    }
    SUBCASE("a favoured constant-greedy genome is chosen at its softmax weight") {
        NeConfig cfg;
        Population pop;
        for (int i = 0; i < 30; ++i) {
            FfnParams p(kDim, kK);
            p.b2(i == 0 ? 3 : 0) = 1.0;
            pop.genomes.push_back(Genome{p, i == 0 ? 2.0 : 0.0, 1});
        }
        pop.temperature = 1.0;
        const double want = std::exp(2.0) / (std::exp(2.0) + 29.0);
        Rng rng(9);
        int greedy = 0;
        const int draws = 20000;
        for (int i = 0; i < draws; ++i) {
            NeAgent agent(pop, cfg, 1);
            greedy += agent.decide(Observation{std::vector<double>(kDim, 0.0)}, rng) == 3 ? 1 : 0;
        }
        CHECK(std::abs(greedy / static_cast<double>(draws) - want) < 0.01);
    }
}

TEST_CASE("population checkpoint round trip") {
    Rng rng(10);
    NeConfig cfg;
    for (Architecture arch : {Architecture::Feedforward, Architecture::Lstm}) {
        Population pop = make_population(rng, cfg, arch, kDim, kK);
        for (Genome& g : pop.genomes) {
            g.fitness = uniform01(rng) - 0.3;
            g.uses = uniform_index(rng, 50);
        }
        std::stringstream ss;
        write_population(ss, pop);
        const Population back = read_population(ss);
        REQUIRE(back.size() == pop.size());
        CHECK(back.temperature == pop.temperature);
        for (std::size_t i = 0; i < pop.size(); ++i) {
            CHECK(back.genomes[i].params == pop.genomes[i].params);
            CHECK(back.genomes[i].fitness == pop.genomes[i].fitness);
            CHECK(back.genomes[i].uses == pop.genomes[i].uses);
        }
    }
    std::stringstream wrong("forage-population v9\n");
    CHECK_THROWS(read_population(wrong));
}
